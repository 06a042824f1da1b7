// Benchmark and experiment driver. Talks to the library through the C API only.
#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fsmi/fsmi.h"

namespace {

using Clock = std::chrono::steady_clock;

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(fsmi_status s, const char* what) {
  if (s != FSMI_OK)
    throw Failure(std::string(what) + ": " + fsmi_status_name(s) + ": " + fsmi_last_error());
}

template <class T, void (*Destroy)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  Handle(Handle&& o) noexcept : p(o.p) { o.p = nullptr; }
  ~Handle() { Destroy(p); }
  T** out() { return &p; }
  T* get() const { return p; }
};
using Context = Handle<fsmi_context, fsmi_context_destroy>;
using Beam = Handle<fsmi_beam, fsmi_beam_destroy>;
using Rle = Handle<fsmi_rle, fsmi_rle_destroy>;
using RleTables = Handle<fsmi_rle_tables, fsmi_rle_tables_destroy>;
using Grid = Handle<fsmi_grid, fsmi_grid_destroy>;
using World = Handle<fsmi_world, fsmi_world_destroy>;
using Exploration = Handle<fsmi_exploration, fsmi_exploration_destroy>;

struct Common {
  double sigma = 0.05;
  double delta_occ = 1.5;
  double resolution = 0.1;
  double beam_length = 10.0;
  double lambda_z = 0.01;
  int trunc = 3;
  int uniform_h = -1;  // -1: derived from sigma and resolution
  std::vector<std::uint64_t> seeds{1};
  int reps = 10;
  std::vector<std::string> algos;
  std::string out = ".";
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", "key=value configuration file; flags override it")->check(CLI::ExistingFile);
  app->add_option("--sigma", c.sigma, "range noise std-dev (m)")->capture_default_str();
  app->add_option("--delta-occ", c.delta_occ, "odds multiplier of a hit; delta_emp = 1/delta_occ")
      ->capture_default_str();
  app->add_option("--resolution", c.resolution, "cell size (m)")->capture_default_str();
  app->add_option("--beam-length", c.beam_length, "beam length (m)")->capture_default_str();
  app->add_option("--lambda-z", c.lambda_z, "SMI reference integration step (m)")->capture_default_str();
  app->add_option("--trunc", c.trunc, "Gaussian truncation in cells")->capture_default_str();
  app->add_option("--uniform-h", c.uniform_h, "uniform noise half-width in cells (-1: match sigma)")
      ->capture_default_str();
  app->add_option("--seed", c.seeds, "random seed(s)")->delimiter(',')->capture_default_str();
  app->add_option("--reps", c.reps, "repetitions")->check(CLI::PositiveNumber)->capture_default_str();
  app->add_option("--algos", c.algos, "algorithm list")->delimiter(',');
  app->add_option("--out", c.out, "output directory")->capture_default_str();
}

int uniform_h_of(const Common& c) {
  if (c.uniform_h >= 0) return c.uniform_h;
  double h = std::round(std::sqrt(3.0) * c.sigma / c.resolution - 0.5);
  return h < 0 ? 0 : static_cast<int>(h);
}

// The active subcommand's effective settings, one `# key=value` line each.
std::string config_echo(const CLI::App& cmd) {
  std::ostringstream os;
  os << "# build=" << fsmi_build_id() << '\n';
  os << "# command=" << cmd.get_name() << '\n';
  std::istringstream cfg(cmd.config_to_str(true, false));
  for (std::string line; std::getline(cfg, line);)
    if (!line.empty()) os << "# " << line << '\n';
  return os.str();
}

std::ofstream open_out(const std::string& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  std::string path = (std::filesystem::path(dir) / name).string();
  std::ofstream f(path);
  if (!f) throw Failure("cannot open " + path);
  return f;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double mean(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

struct AlgoSpec {
  std::string name;
  fsmi_algorithm algo;
};

AlgoSpec beam_algo(const std::string& name) {
  static const std::map<std::string, fsmi_algorithm> names{
      {"smi", FSMI_ALGO_SMI_REFERENCE},         {"fsmi", FSMI_ALGO_FSMI},
      {"approx_fsmi", FSMI_ALGO_APPROX_FSMI},   {"uniform_fsmi", FSMI_ALGO_UNIFORM_FSMI},
      {"csqmi_exact", FSMI_ALGO_CSQMI_EXACT},   {"csqmi_approx", FSMI_ALGO_CSQMI_APPROX}};
  auto it = names.find(name);
  if (it == names.end()) throw Failure("unknown algorithm: " + name);
  return {name, it->second};
}

// Time `reps` calls; returns ns per call.
double time_calls(const fsmi_context* ctx, const fsmi_beam* beam, fsmi_algorithm a, const fsmi_eval_options& o,
                  int reps, double& mi) {
  fsmi_result r{};
  auto t0 = Clock::now();
  for (int i = 0; i < reps; ++i) check(fsmi_beam_mi(ctx, beam, a, &o, &r), "beam mi");
  auto t1 = Clock::now();
  mi = r.mi;
  return std::chrono::duration<double, std::nano>(t1 - t0).count() / reps;
}

int bench_beam(const CLI::App& root, const Common& c, int beams, double truth_step) {
  std::vector<std::string> names = c.algos;
  if (names.empty()) names = {"smi", "fsmi", "approx_fsmi", "uniform_fsmi", "csqmi_exact", "csqmi_approx"};
  std::vector<AlgoSpec> algos;
  for (const auto& n : names) algos.push_back(beam_algo(n));

  fsmi_sensor_params sp;
  fsmi_sensor_defaults(&sp);
  sp.sigma = c.sigma;
  sp.delta_occ = c.delta_occ;
  sp.max_range = c.beam_length;
  Context ctx;
  check(fsmi_context_create(&sp, ctx.out()), "context");

  fsmi_eval_options opt;
  fsmi_eval_defaults(&opt);
  opt.delta = c.trunc;
  opt.uniform_h = uniform_h_of(c);
  opt.step = c.lambda_z;
  fsmi_eval_options truth_opt = opt;
  truth_opt.step = truth_step;
  truth_opt.smi_shared_prior = 1;

  const auto n = static_cast<std::size_t>(std::llround(c.beam_length / c.resolution));
  std::map<std::string, std::vector<double>> times, errs;
  std::map<std::string, std::uint64_t> mults;
  for (auto seed : c.seeds) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> occ(0.0, 1.0);
    for (int b = 0; b < beams; ++b) {
      std::vector<double> o(n);
      for (auto& v : o) v = occ(rng);
      Beam beam;
      check(fsmi_beam_create_uniform(o.data(), n, c.resolution, sp.clamp_eps, beam.out()), "beam");
      fsmi_result truth{};
      check(fsmi_beam_mi(ctx.get(), beam.get(), FSMI_ALGO_SMI_REFERENCE, &truth_opt, &truth), "ground truth");
      for (const auto& a : algos) {
        // The reference integrator is ~10^4 times slower; one timed call suffices.
        int reps = a.algo == FSMI_ALGO_SMI_REFERENCE ? 1 : c.reps;
        double mi = 0.0;
        time_calls(ctx.get(), beam.get(), a.algo, opt, 1, mi);  // warm-up
        times[a.name].push_back(time_calls(ctx.get(), beam.get(), a.algo, opt, reps, mi));
        errs[a.name].push_back(truth.mi > 0.0 ? std::abs(mi - truth.mi) / truth.mi : std::abs(mi));
        if (a.algo != FSMI_ALGO_SMI_REFERENCE && !mults.count(a.name)) {
          fsmi_eval_options co = opt;
          co.count = 1;
          fsmi_result r{};
          check(fsmi_beam_mi(ctx.get(), beam.get(), a.algo, &co, &r), "count");
          mults[a.name] = r.multiplications;
        }
      }
    }
  }

  auto f = open_out(c.out, "bench_beam.csv");
  std::ostringstream table;
  table << config_echo(root);
  table << "algorithm,n,mean_ns,p50_ns,rel_err_mean,mults\n";
  for (const auto& a : algos) {
    char row[256];
    std::snprintf(row, sizeof row, "%s,%zu,%.1f,%.1f,%.6g,%llu\n", a.name.c_str(), n, mean(times[a.name]),
                  median(times[a.name]), mean(errs[a.name]),
                  static_cast<unsigned long long>(mults.count(a.name) ? mults[a.name] : 0));
    table << row;
  }
  f << table.str();
  std::cout << table.str();
  return 0;
}

int bench_rle(const CLI::App& root, const Common& c, int n, const std::vector<int>& lengths) {
  fsmi_sensor_params sp;
  fsmi_sensor_defaults(&sp);
  sp.sigma = c.sigma;
  sp.delta_occ = c.delta_occ;
  sp.max_range = n * c.resolution;
  Context ctx;
  check(fsmi_context_create(&sp, ctx.out()), "context");
  RleTables tables;
  check(fsmi_rle_tables_create(c.sigma / c.resolution, 128, 2 * c.trunc, std::max(n, 2 * c.trunc), 0,
                               tables.out()),
        "RLE tables");

  fsmi_eval_options opt;
  fsmi_eval_defaults(&opt);
  opt.delta = c.trunc;
  fsmi_eval_options pdf = opt;
  pdf.pdf_kernel = 1;

  std::ostringstream table;
  table << config_echo(root);
  table << "L,n,groups,approx_ns,rle_ns,ratio,rel_err_max\n";
  for (int len : lengths) {
    if (len < 1 || n % len != 0) throw Failure("L=" + std::to_string(len) + " does not divide n");
    std::vector<double> t_plain, t_rle;
    double err = 0.0;
    std::size_t groups = 0;
    for (auto seed : c.seeds) {
      std::mt19937_64 rng(seed * 1000003ULL + static_cast<std::uint64_t>(len));
      std::uniform_int_distribution<int> level(1, 127);
      for (int s = 0; s < c.reps; ++s) {
        std::vector<double> occ;
        int prev = -1;
        for (int g = 0; g < n / len; ++g) {
          int l;
          do l = level(rng);
          while (l == prev);
          prev = l;
          occ.insert(occ.end(), static_cast<std::size_t>(len), l / 128.0);
        }
        Rle rle;
        check(fsmi_rle_compress(occ.data(), occ.size(), c.resolution, 128, rle.out()), "compress");
        groups = fsmi_rle_groups(rle.get());
        Beam beam;
        check(fsmi_beam_create_uniform(occ.data(), occ.size(), c.resolution, sp.clamp_eps, beam.out()), "beam");
        fsmi_result r{}, oracle{};
        check(fsmi_rle_mi(ctx.get(), tables.get(), rle.get(), FSMI_RLE_APPROX, &opt, &r), "rle");
        check(fsmi_beam_mi(ctx.get(), beam.get(), FSMI_ALGO_APPROX_FSMI, &pdf, &oracle), "oracle");
        err = std::max(err, std::abs(r.mi - oracle.mi) / oracle.mi);
        // Interleave batches so drift hits both sides alike.
        const int batch = 200;
        for (int round = 0; round < 5; ++round) {
          auto t0 = Clock::now();
          for (int i = 0; i < batch; ++i)
            check(fsmi_beam_mi(ctx.get(), beam.get(), FSMI_ALGO_APPROX_FSMI, &opt, &r), "approx");
          auto t1 = Clock::now();
          for (int i = 0; i < batch; ++i)
            check(fsmi_rle_mi(ctx.get(), tables.get(), rle.get(), FSMI_RLE_APPROX, &opt, &r), "rle");
          auto t2 = Clock::now();
          t_plain.push_back(std::chrono::duration<double, std::nano>(t1 - t0).count() / batch);
          t_rle.push_back(std::chrono::duration<double, std::nano>(t2 - t1).count() / batch);
        }
      }
    }
    double a = median(t_plain), b = median(t_rle);
    char row[256];
    std::snprintf(row, sizeof row, "%d,%d,%zu,%.1f,%.1f,%.3f,%.3g\n", len, n, groups, a, b, a / b, err);
    table << row;
  }
  auto f = open_out(c.out, "bench_rle.csv");
  f << table.str();
  std::cout << table.str();
  return 0;
}

struct PlannerSpec {
  std::string name;
  fsmi_planner planner;
  fsmi_algorithm algo;
};

PlannerSpec planner_of(const std::string& name) {
  if (name == "frontier") return {name, FSMI_PLANNER_FRONTIER, FSMI_ALGO_APPROX_FSMI};
  const std::string prefix = "info_";
  if (name.rfind(prefix, 0) == 0) {
    auto spec = beam_algo(name.substr(prefix.size()));
    if (spec.algo == FSMI_ALGO_SMI_REFERENCE || spec.algo == FSMI_ALGO_CSQMI_EXACT)
      throw Failure("planner metric must be fsmi, approx_fsmi, uniform_fsmi or csqmi_approx");
    return {name, FSMI_PLANNER_INFORMATION, spec.algo};
  }
  throw Failure("unknown planner: " + name);
}

struct ExploreOptions {
  double max_range = 5.0;
  double delta_occ = 3.0;
  double threshold = 0.5;
  int max_steps = 1000;
  int scan_beams = 180;
  int planning_beams = 60;
  double size = 18.0;
  double density = 0.03;
  int rooms = 3;
  bool snapshots = false;
};

int explore(const CLI::App& root, const Common& c, const ExploreOptions& e) {
  std::vector<std::string> names = c.algos;
  if (names.empty()) names = {"frontier", "info_approx_fsmi"};
  std::vector<PlannerSpec> planners;
  for (const auto& n : names) planners.push_back(planner_of(n));

  std::ostringstream summary;
  summary << config_echo(root);
  summary << "planner,runs,mean_path_len,mean_final_entropy,mean_us_per_beam,stop_reasons\n";
  std::ostringstream runs;
  runs << "planner,seed,world_seed,steps,path_len,final_entropy,us_per_beam,stop_reason\n";
  for (const auto& p : planners) {
    double len = 0.0, ent = 0.0, us = 0.0;
    std::string reasons;
    for (auto seed : c.seeds) {
      fsmi_world_params wp;
      fsmi_world_defaults(&wp);
      wp.seed = seed;
      wp.size = e.size;
      wp.resolution = c.resolution;
      wp.obstacle_density = e.density;
      wp.room_count = e.rooms;
      World world;
      check(fsmi_world_generate(&wp, world.out()), "world");

      fsmi_explore_params xp;
      fsmi_explore_defaults(&xp);
      xp.sensor.sigma = c.sigma;
      xp.sensor.delta_occ = e.delta_occ;
      xp.sensor.max_range = e.max_range;
      xp.scan_beams = e.scan_beams;
      xp.planner = p.planner;
      xp.algorithm = p.algo;
      xp.delta = c.trunc;
      xp.entropy_threshold = e.threshold;
      xp.max_steps = e.max_steps;
      xp.noise_seed = seed;
      xp.planning_beams = e.planning_beams;
      std::string tag = p.name + "_seed" + std::to_string(seed);
      std::string snap_dir = (std::filesystem::path(c.out) / (tag + "_maps")).string();
      if (e.snapshots) {
        std::filesystem::create_directories(snap_dir);
        xp.snapshot_dir = snap_dir.c_str();
      }
      Exploration ex;
      check(fsmi_exploration_run(world.get(), &xp, ex.out()), "exploration");
      std::filesystem::create_directories(c.out);
      check(fsmi_exploration_write_csv(ex.get(), (std::filesystem::path(c.out) / (tag + ".csv")).string().c_str()),
            "log");
      double l = fsmi_exploration_path_length(ex.get()), h = fsmi_exploration_final_entropy(ex.get());
      double u = fsmi_exploration_us_per_beam(ex.get());
      const char* why = fsmi_exploration_stop_reason(ex.get());
      len += l;
      ent += h;
      us += u;
      reasons += (reasons.empty() ? "" : ";") + std::string(why);
      char row[256];
      std::snprintf(row, sizeof row, "%s,%llu,%llu,%zu,%.3f,%.3f,%.4f,%s\n", p.name.c_str(),
                    static_cast<unsigned long long>(seed),
                    static_cast<unsigned long long>(fsmi_world_seed(world.get())),
                    fsmi_exploration_steps(ex.get()) - 1, l, h, u, why);
      runs << row;
    }
    double k = static_cast<double>(c.seeds.size());
    char row[512];
    std::snprintf(row, sizeof row, "%s,%zu,%.3f,%.3f,%.4f,%s\n", p.name.c_str(), c.seeds.size(), len / k, ent / k,
                  us / k, reasons.c_str());
    summary << row;
  }
  auto f = open_out(c.out, "explore_summary.csv");
  f << summary.str();
  auto g = open_out(c.out, "explore_runs.csv");
  g << config_echo(root) << runs.str();
  std::cout << summary.str();
  return 0;
}

int mi_surface(const CLI::App& root, const Common& c, const std::string& grid_path, double max_range, int beams) {
  std::string algo_name = c.algos.empty() ? "approx_fsmi" : c.algos.front();
  auto spec = beam_algo(algo_name);
  Grid grid;
  check(fsmi_grid_read_pgm(grid_path.c_str(), c.resolution, 1e-4, grid.out()), "grid");
  fsmi_sensor_params sp;
  fsmi_sensor_defaults(&sp);
  sp.sigma = c.sigma;
  sp.delta_occ = c.delta_occ;
  sp.max_range = max_range;
  Context ctx;
  check(fsmi_context_create(&sp, ctx.out()), "context");
  const int w = fsmi_grid_width(grid.get()), h = fsmi_grid_height(grid.get());
  std::vector<double> mi(static_cast<std::size_t>(w) * h);
  check(fsmi_grid_mi_surface(ctx.get(), grid.get(), spec.algo, beams, c.trunc, mi.data()), "surface");
  double top = *std::max_element(mi.begin(), mi.end());
  Grid heat;
  check(fsmi_grid_create(w, h, c.resolution, 0.5, 1e-4, heat.out()), "heat map");
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double v = mi[static_cast<std::size_t>(y) * w + x];
      check(fsmi_grid_set(heat.get(), x, y, top > 0.0 ? v / top : 0.0), "heat map");
    }
  std::filesystem::create_directories(c.out);
  std::string out = (std::filesystem::path(c.out) / "mi_surface.pgm").string();
  check(fsmi_grid_write_pgm(heat.get(), out.c_str()), "write");
  auto f = open_out(c.out, "mi_surface.csv");
  f << config_echo(root) << "cx,cy,mi_nats\n";
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) f << x << ',' << y << ',' << mi[static_cast<std::size_t>(y) * w + x] << '\n';
  std::cout << "max_mi_nats=" << top << " image=" << out << '\n';
  return 0;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool given(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(),
                     [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
}

// Turns the lines of a `--config FILE` into `--key=value` flags for every key the
// command line leaves unset. Blank lines and lines starting with # ; or [ are skipped.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::ifstream f(path);
  if (!f) return args;  // reported by the option's ExistingFile check
  std::vector<std::string> extra;
  for (std::string line; std::getline(f, line);) {
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';' || line[0] == '[') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw Failure("config line without '=': " + line);
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front())
      value = value.substr(1, value.size() - 2);
    if (!given(args, "--" + key)) extra.push_back("--" + key + "=" + value);
  }
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shannon mutual information benchmarks for range beams on occupancy grids"};
  app.require_subcommand(1);

  Common beam_c, rle_c, explore_c, surface_c;
  int beams = 100;
  double truth_step = 1e-5;
  auto* bb = app.add_subcommand("bench-beam", "accuracy and speed of the per-beam algorithms");
  add_common(bb, beam_c);
  bb->add_option("--beams", beams, "random beams per seed")->check(CLI::PositiveNumber)->capture_default_str();
  bb->add_option("--truth-step", truth_step, "ground-truth integration step (m)")->capture_default_str();

  int rle_n = 256;
  std::vector<int> lengths{1, 2, 4, 8, 16, 32, 64, 128};
  auto* br = app.add_subcommand("bench-rle", "compressed versus uncompressed truncated FSMI");
  add_common(br, rle_c);
  br->add_option("--n", rle_n, "cells per beam")->capture_default_str();
  br->add_option("--lengths", lengths, "group lengths L")->delimiter(',')->capture_default_str();

  ExploreOptions eo;
  auto* ex = app.add_subcommand("explore", "exploration runs with each planner");
  add_common(ex, explore_c);
  explore_c.delta_occ = eo.delta_occ;
  ex->get_option("--delta-occ")->default_val(eo.delta_occ);
  ex->add_option("--max-range", eo.max_range, "sensor range (m)")->capture_default_str();
  ex->add_option("--entropy-threshold", eo.threshold, "stop when a step reduces entropy less (nats)")
      ->capture_default_str();
  ex->add_option("--max-steps", eo.max_steps)->capture_default_str();
  ex->add_option("--scan-beams", eo.scan_beams)->capture_default_str();
  ex->add_option("--planning-beams", eo.planning_beams)->capture_default_str();
  ex->add_option("--world-size", eo.size, "world side (m)")->capture_default_str();
  ex->add_option("--density", eo.density, "obstacle density")->capture_default_str();
  ex->add_option("--rooms", eo.rooms)->capture_default_str();
  ex->add_flag("--snapshots", eo.snapshots, "write a PGM of the map after every step");

  std::string grid_path;
  double surface_range = 5.0;
  int surface_beams = 60;
  auto* ms = app.add_subcommand("mi-surface", "MI heat map of a PGM occupancy grid");
  add_common(ms, surface_c);
  ms->add_option("--grid", grid_path, "input PGM")->required()->check(CLI::ExistingFile);
  ms->add_option("--max-range", surface_range, "sensor range (m)")->capture_default_str();
  ms->add_option("--beams", surface_beams, "beams per scan")->capture_default_str();

  std::vector<std::string> args;
  try {
    args = expand_config(std::vector<std::string>(argv, argv + argc));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  std::vector<char*> cargs;
  for (auto& a : args) cargs.push_back(a.data());
  CLI11_PARSE(app, static_cast<int>(cargs.size()), cargs.data());
  try {
    if (*bb) return bench_beam(*bb, beam_c, beams, truth_step);
    if (*br) return bench_rle(*br, rle_c, rle_n, lengths);
    if (*ex) return explore(*ex, explore_c, eo);
    if (*ms) return mi_surface(*ms, surface_c, grid_path, surface_range, surface_beams);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
