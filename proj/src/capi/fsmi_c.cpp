#include "fsmi/fsmi.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "fsmi/error.hpp"
#include "fsmi/explore.hpp"
#include "fsmi/grid.hpp"
#include "fsmi/mi.hpp"
#include "fsmi/rle.hpp"
#include "fsmi/sensor.hpp"

#ifndef FSMI_BUILD_ID
#define FSMI_BUILD_ID "unknown"
#endif

struct fsmi_context {
  fsmi::SensorModel sensor;
  fsmi::MiTables tables;
  fsmi_context(const fsmi::SensorModel& s, double eps) : sensor(s), tables(s, eps) {}
};
struct fsmi_beam {
  fsmi::BeamView view;
};
struct fsmi_rle {
  fsmi::RleSequence seq;
};
struct fsmi_rle_tables {
  fsmi::RleTables tables;
};
struct fsmi_grid {
  fsmi::OccupancyGrid2D grid;
};
struct fsmi_world {
  fsmi::SyntheticWorld world;
};
struct fsmi_exploration {
  fsmi::ExplorationLog log;
};

namespace {

thread_local std::string last_error;

fsmi_status to_status(fsmi::ErrorCode c) {
  switch (c) {
    case fsmi::ErrorCode::invalid_argument: return FSMI_ERR_INVALID_ARGUMENT;
    case fsmi::ErrorCode::out_of_range: return FSMI_ERR_OUT_OF_RANGE;
    case fsmi::ErrorCode::numerical_range: return FSMI_ERR_NUMERICAL_RANGE;
    case fsmi::ErrorCode::io: return FSMI_ERR_IO;
    case fsmi::ErrorCode::parse: return FSMI_ERR_PARSE;
    case fsmi::ErrorCode::no_candidates: return FSMI_ERR_NO_CANDIDATES;
  }
  return FSMI_ERR_INTERNAL;
}

template <class F>
fsmi_status guard(F body) {
  try {
    body();
    return FSMI_OK;
  } catch (const fsmi::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return FSMI_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return FSMI_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) fsmi::fail(fsmi::ErrorCode::invalid_argument, std::string(what) + " is null");
}

fsmi::SensorModel sensor_from(const fsmi_sensor_params& p) {
  return fsmi::SensorModel::make(p.sigma, p.delta_occ, p.max_range);
}

fsmi::EvalOptions eval_from(const fsmi_eval_options& o) {
  fsmi::EvalOptions e;
  e.kernel = o.pdf_kernel ? fsmi::Kernel::pdf : fsmi::Kernel::cdf;
  e.count = o.count != 0;
  e.timed = o.timed != 0;
  return e;
}

void fill(const fsmi::MiBreakdown& b, fsmi_result* out) {
  out->mi = b.mi;
  out->multiplications = b.multiplications;
  out->elapsed_ns = static_cast<uint64_t>(b.elapsed.count());
}

fsmi::MiAlgorithm explore_algorithm(fsmi_algorithm a) {
  switch (a) {
    case FSMI_ALGO_FSMI: return fsmi::MiAlgorithm::fsmi;
    case FSMI_ALGO_APPROX_FSMI: return fsmi::MiAlgorithm::approx_fsmi;
    case FSMI_ALGO_UNIFORM_FSMI: return fsmi::MiAlgorithm::uniform_fsmi;
    case FSMI_ALGO_CSQMI_APPROX: return fsmi::MiAlgorithm::csqmi_approx;
    default: break;
  }
  fsmi::fail(fsmi::ErrorCode::invalid_argument, "algorithm not usable for map scoring");
}

}  // namespace

extern "C" {

const char* fsmi_last_error(void) { return last_error.c_str(); }
const char* fsmi_build_id(void) { return FSMI_BUILD_ID; }

const char* fsmi_status_name(fsmi_status s) {
  switch (s) {
    case FSMI_OK: return "ok";
    case FSMI_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case FSMI_ERR_OUT_OF_RANGE: return "out_of_range";
    case FSMI_ERR_NUMERICAL_RANGE: return "numerical_range";
    case FSMI_ERR_IO: return "io";
    case FSMI_ERR_PARSE: return "parse";
    case FSMI_ERR_NO_CANDIDATES: return "no_candidates";
    case FSMI_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

void fsmi_sensor_defaults(fsmi_sensor_params* out) {
  if (!out) return;
  *out = {0.05, 1.5, 10.0, 1e-4};
}

void fsmi_eval_defaults(fsmi_eval_options* out) {
  if (!out) return;
  *out = {3, 0, 0.01, 0, 0, 0, 0};
}

void fsmi_world_defaults(fsmi_world_params* out) {
  if (!out) return;
  fsmi::WorldConfig w;
  *out = {1, w.size, w.resolution, w.obstacle_density, w.room_count};
}

void fsmi_explore_defaults(fsmi_explore_params* out) {
  if (!out) return;
  fsmi::ExploreConfig c;
  out->sensor = {c.sensor.sigma, c.sensor.delta_occ, c.sensor.max_range, c.clamp_eps};
  out->scan_beams = c.scan_beams;
  out->planner = FSMI_PLANNER_INFORMATION;
  out->algorithm = FSMI_ALGO_APPROX_FSMI;
  out->delta = c.delta;
  out->entropy_threshold = c.entropy_threshold;
  out->max_steps = c.max_steps;
  out->noise_seed = c.noise_seed;
  out->planning_beams = c.planning.planning_beams;
  out->max_candidates = c.planning.max_candidates;
  out->path_interval = c.planning.path_interval;
  out->traversable = c.planning.traversable;
  out->unknown_band = c.planning.unknown_band;
  out->min_cluster = c.planning.min_cluster;
  out->snapshot_dir = nullptr;
}

fsmi_status fsmi_context_create(const fsmi_sensor_params* params, fsmi_context** out) {
  return guard([&] {
    need(params, "params");
    need(out, "out");
    *out = new fsmi_context(sensor_from(*params), params->clamp_eps);
  });
}

void fsmi_context_destroy(fsmi_context* ctx) { delete ctx; }

fsmi_status fsmi_beam_create(const double* occupancies, const double* boundaries, size_t n, double clamp_eps,
                             fsmi_beam** out) {
  return guard([&] {
    need(occupancies, "occupancies");
    need(boundaries, "boundaries");
    need(out, "out");
    *out = new fsmi_beam{fsmi::BeamView({occupancies, n}, {boundaries, n + 1}, clamp_eps)};
  });
}

fsmi_status fsmi_beam_create_uniform(const double* occupancies, size_t n, double width, double clamp_eps,
                                     fsmi_beam** out) {
  return guard([&] {
    need(occupancies, "occupancies");
    need(out, "out");
    *out = new fsmi_beam{fsmi::BeamView::uniform({occupancies, n}, width, clamp_eps)};
  });
}

void fsmi_beam_destroy(fsmi_beam* beam) { delete beam; }
size_t fsmi_beam_size(const fsmi_beam* beam) { return beam ? beam->view.size() : 0; }

fsmi_status fsmi_beam_mi(const fsmi_context* ctx, const fsmi_beam* beam, fsmi_algorithm algorithm,
                         const fsmi_eval_options* options, fsmi_result* out) {
  return guard([&] {
    need(ctx, "ctx");
    need(beam, "beam");
    need(out, "out");
    fsmi_eval_options o;
    fsmi_eval_defaults(&o);
    if (options) o = *options;
    auto e = eval_from(o);
    const auto& v = beam->view;
    switch (algorithm) {
      case FSMI_ALGO_SMI_REFERENCE: {
        auto t0 = std::chrono::steady_clock::now();
        fsmi::MiBreakdown b;
        b.mi = fsmi::smi_reference(v, ctx->sensor, o.step,
                                   o.smi_shared_prior ? fsmi::SmiEvaluation::shared_prior
                                                      : fsmi::SmiEvaluation::per_cell);
        if (e.timed) b.elapsed = std::chrono::steady_clock::now() - t0;
        fill(b, out);
        return;
      }
      case FSMI_ALGO_FSMI: fill(fsmi::fsmi(v, ctx->tables, e), out); return;
      case FSMI_ALGO_APPROX_FSMI: fill(fsmi::approx_fsmi(v, ctx->tables, o.delta, e), out); return;
      case FSMI_ALGO_UNIFORM_FSMI: fill(fsmi::uniform_fsmi(v, ctx->tables, o.uniform_h, e), out); return;
      case FSMI_ALGO_CSQMI_EXACT: fill(fsmi::csqmi_exact(v, ctx->sensor, e), out); return;
      case FSMI_ALGO_CSQMI_APPROX: fill(fsmi::csqmi_approx(v, ctx->sensor, o.delta, e), out); return;
    }
    fsmi::fail(fsmi::ErrorCode::invalid_argument, "unknown algorithm");
  });
}

fsmi_status fsmi_count_multiplications(const fsmi_context* ctx, const fsmi_beam* beam, fsmi_algorithm algorithm,
                                       int delta, uint64_t* out) {
  return guard([&] {
    need(ctx, "ctx");
    need(beam, "beam");
    need(out, "out");
    fsmi::CountedOp op;
    if (algorithm == FSMI_ALGO_APPROX_FSMI)
      op = fsmi::CountedOp::approx_fsmi;
    else if (algorithm == FSMI_ALGO_CSQMI_APPROX)
      op = fsmi::CountedOp::csqmi_approx;
    else
      fsmi::fail(fsmi::ErrorCode::invalid_argument, "multiplication counts exist for the truncated variants only");
    *out = fsmi::count_multiplications(op, beam->view, ctx->tables, delta);
  });
}

fsmi_status fsmi_rle_compress(const double* occupancies, size_t n, double w0, int levels, fsmi_rle** out) {
  return guard([&] {
    need(occupancies, "occupancies");
    need(out, "out");
    *out = new fsmi_rle{fsmi::RleSequence::compress({occupancies, n}, w0, levels)};
  });
}

fsmi_status fsmi_rle_read(const char* path, fsmi_rle** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    std::ifstream in(path);
    if (!in) fsmi::fail(fsmi::ErrorCode::io, std::string("cannot open ") + path);
    *out = new fsmi_rle{fsmi::read_rle(in)};
  });
}

fsmi_status fsmi_rle_write(const fsmi_rle* rle, const char* path) {
  return guard([&] {
    need(rle, "rle");
    need(path, "path");
    std::ofstream f(path);
    if (!f) fsmi::fail(fsmi::ErrorCode::io, std::string("cannot open ") + path);
    fsmi::write_rle(rle->seq, f);
  });
}

void fsmi_rle_destroy(fsmi_rle* rle) { delete rle; }
size_t fsmi_rle_groups(const fsmi_rle* rle) { return rle ? rle->seq.size() : 0; }
size_t fsmi_rle_cells(const fsmi_rle* rle) { return rle ? rle->seq.cells() : 0; }
double fsmi_rle_w0(const fsmi_rle* rle) { return rle ? rle->seq.w0() : 0.0; }

fsmi_status fsmi_rle_decompress(const fsmi_rle* rle, double* out, size_t capacity) {
  return guard([&] {
    need(rle, "rle");
    need(out, "out");
    auto v = rle->seq.decompress();
    for (size_t i = 0; i < v.size() && i < capacity; ++i) out[i] = v[i];
  });
}

fsmi_status fsmi_rle_tables_create(double sigma_prime, int levels, int l_bound, int l_max, int uniform,
                                   fsmi_rle_tables** out) {
  return guard([&] {
    need(out, "out");
    fsmi::RleTableConfig c;
    c.sigma_prime = sigma_prime;
    c.levels = levels;
    c.l_bound = l_bound;
    c.l_max = l_max;
    c.uniform = uniform != 0;
    *out = new fsmi_rle_tables{fsmi::RleTables(c)};
  });
}

void fsmi_rle_tables_destroy(fsmi_rle_tables* tables) { delete tables; }

fsmi_status fsmi_rle_mi(const fsmi_context* ctx, const fsmi_rle_tables* tables, const fsmi_rle* rle,
                        fsmi_rle_algorithm algorithm, const fsmi_eval_options* options, fsmi_result* out) {
  return guard([&] {
    need(ctx, "ctx");
    need(tables, "tables");
    need(rle, "rle");
    need(out, "out");
    fsmi_eval_options o;
    fsmi_eval_defaults(&o);
    if (options) o = *options;
    auto e = eval_from(o);
    switch (algorithm) {
      case FSMI_RLE_EXACT: fill(fsmi::fsmi_rle(rle->seq, ctx->tables, tables->tables, e), out); return;
      case FSMI_RLE_APPROX:
        fill(fsmi::approx_fsmi_rle(rle->seq, ctx->tables, o.delta, tables->tables, e), out);
        return;
      case FSMI_RLE_UNIFORM:
        fill(fsmi::uniform_fsmi_rle(rle->seq, ctx->tables, o.uniform_h, tables->tables, e), out);
        return;
    }
    fsmi::fail(fsmi::ErrorCode::invalid_argument, "unknown RLE algorithm");
  });
}

fsmi_status fsmi_grid_create(int width, int height, double resolution, double prior, double clamp_eps,
                             fsmi_grid** out) {
  return guard([&] {
    need(out, "out");
    *out = new fsmi_grid{fsmi::new_grid(width, height, resolution, prior, clamp_eps)};
  });
}

fsmi_status fsmi_grid_read_pgm(const char* path, double resolution, double clamp_eps, fsmi_grid** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    std::ifstream in(path, std::ios::binary);
    if (!in) fsmi::fail(fsmi::ErrorCode::io, std::string("cannot open ") + path);
    *out = new fsmi_grid{fsmi::read_pgm(in, resolution, clamp_eps)};
  });
}

fsmi_status fsmi_grid_write_pgm(const fsmi_grid* grid, const char* path) {
  return guard([&] {
    need(grid, "grid");
    need(path, "path");
    std::ofstream f(path, std::ios::binary);
    if (!f) fsmi::fail(fsmi::ErrorCode::io, std::string("cannot open ") + path);
    fsmi::write_pgm(grid->grid, f);
  });
}

void fsmi_grid_destroy(fsmi_grid* grid) { delete grid; }
int fsmi_grid_width(const fsmi_grid* grid) { return grid ? grid->grid.width() : 0; }
int fsmi_grid_height(const fsmi_grid* grid) { return grid ? grid->grid.height() : 0; }
double fsmi_grid_resolution(const fsmi_grid* grid) { return grid ? grid->grid.resolution() : 0.0; }

double fsmi_grid_get(const fsmi_grid* grid, int cx, int cy) {
  if (!grid || !grid->grid.in_bounds(cx, cy)) return -1.0;
  return grid->grid.at(cx, cy);
}

fsmi_status fsmi_grid_set(fsmi_grid* grid, int cx, int cy, double occupancy) {
  return guard([&] {
    need(grid, "grid");
    if (!grid->grid.in_bounds(cx, cy)) fsmi::fail(fsmi::ErrorCode::out_of_range, "cell outside the grid");
    fsmi::require(occupancy >= 0.0 && occupancy <= 1.0, "occupancy must lie in [0, 1]");
    grid->grid.set(grid->grid.index(cx, cy), occupancy);
  });
}

double fsmi_grid_entropy(const fsmi_grid* grid) { return grid ? fsmi::entropy(grid->grid) : 0.0; }

fsmi_status fsmi_grid_mi_surface(const fsmi_context* ctx, const fsmi_grid* grid, fsmi_algorithm algorithm,
                                 int n_beams, int delta, double* out) {
  return guard([&] {
    need(ctx, "ctx");
    need(grid, "grid");
    need(out, "out");
    const auto& g = grid->grid;
    fsmi::MiContext mc(ctx->sensor, g.resolution(), delta, g.clamp_eps());
    std::vector<fsmi::Pose> poses(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) poses[i] = {g.center_x(i), g.center_y(i), 0.0};
    auto v = fsmi::mi_surface(g, mc, poses, explore_algorithm(algorithm), n_beams);
    std::copy(v.begin(), v.end(), out);
  });
}

fsmi_status fsmi_world_generate(const fsmi_world_params* params, fsmi_world** out) {
  return guard([&] {
    need(params, "params");
    need(out, "out");
    fsmi::WorldConfig c;
    c.size = params->size;
    c.resolution = params->resolution;
    c.obstacle_density = params->obstacle_density;
    c.room_count = params->room_count;
    *out = new fsmi_world{fsmi::generate_world(params->seed, c)};
  });
}

void fsmi_world_destroy(fsmi_world* world) { delete world; }
uint64_t fsmi_world_seed(const fsmi_world* world) { return world ? world->world.seed : 0; }

fsmi_status fsmi_world_truth(const fsmi_world* world, fsmi_grid** out) {
  return guard([&] {
    need(world, "world");
    need(out, "out");
    *out = new fsmi_grid{world->world.truth};
  });
}

fsmi_status fsmi_exploration_run(const fsmi_world* world, const fsmi_explore_params* p, fsmi_exploration** out) {
  return guard([&] {
    need(world, "world");
    need(p, "params");
    need(out, "out");
    fsmi::ExploreConfig c;
    c.sensor = sensor_from(p->sensor);
    c.clamp_eps = p->sensor.clamp_eps;
    c.scan_beams = p->scan_beams;
    c.planner = p->planner == FSMI_PLANNER_FRONTIER ? fsmi::PlannerKind::frontier : fsmi::PlannerKind::information;
    c.algorithm = explore_algorithm(p->algorithm);
    c.delta = p->delta;
    c.entropy_threshold = p->entropy_threshold;
    c.max_steps = p->max_steps;
    c.noise_seed = p->noise_seed;
    c.planning.planning_beams = p->planning_beams;
    c.planning.max_candidates = p->max_candidates;
    c.planning.path_interval = p->path_interval;
    c.planning.traversable = p->traversable;
    c.planning.unknown_band = p->unknown_band;
    c.planning.min_cluster = p->min_cluster;
    if (p->snapshot_dir) {
      std::string dir = p->snapshot_dir;
      c.snapshot = [dir](int step, const fsmi::OccupancyGrid2D& map) {
        char name[32];
        std::snprintf(name, sizeof name, "/step_%04d.pgm", step);
        std::ofstream f(dir + name, std::ios::binary);
        if (!f) fsmi::fail(fsmi::ErrorCode::io, "cannot write snapshot in " + dir);
        fsmi::write_pgm(map, f);
      };
    }
    *out = new fsmi_exploration{fsmi::run_exploration(world->world, c)};
  });
}

void fsmi_exploration_destroy(fsmi_exploration* ex) { delete ex; }
size_t fsmi_exploration_steps(const fsmi_exploration* ex) { return ex ? ex->log.steps.size() : 0; }

fsmi_status fsmi_exploration_step(const fsmi_exploration* ex, size_t i, fsmi_step_record* out) {
  return guard([&] {
    need(ex, "ex");
    need(out, "out");
    if (i >= ex->log.steps.size()) fsmi::fail(fsmi::ErrorCode::out_of_range, "step index out of range");
    const auto& s = ex->log.steps[i];
    *out = {s.step, s.x, s.y, s.goal_x, s.goal_y, s.path_len, s.entropy};
  });
}

const char* fsmi_exploration_stop_reason(const fsmi_exploration* ex) {
  return ex ? fsmi::stop_reason_name(ex->log.reason) : "";
}
double fsmi_exploration_path_length(const fsmi_exploration* ex) { return ex ? ex->log.path_length() : 0.0; }
double fsmi_exploration_final_entropy(const fsmi_exploration* ex) { return ex ? ex->log.final_entropy() : 0.0; }

double fsmi_exploration_us_per_beam(const fsmi_exploration* ex) {
  if (!ex || ex->log.mi.beams == 0) return 0.0;
  return static_cast<double>(ex->log.mi.nanoseconds) / 1e3 / static_cast<double>(ex->log.mi.beams);
}

fsmi_status fsmi_exploration_write_csv(const fsmi_exploration* ex, const char* path) {
  return guard([&] {
    need(ex, "ex");
    need(path, "path");
    std::ofstream f(path);
    if (!f) fsmi::fail(fsmi::ErrorCode::io, std::string("cannot open ") + path);
    fsmi::write_log_csv(ex->log, f);
  });
}

fsmi_status fsmi_exploration_map(const fsmi_exploration* ex, fsmi_grid** out) {
  return guard([&] {
    need(ex, "ex");
    need(out, "out");
    *out = new fsmi_grid{ex->log.map};
  });
}

}  // extern "C"
