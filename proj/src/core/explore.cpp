#include "fsmi/explore.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <numbers>
#include <ostream>
#include <queue>
#include <random>

#include "fsmi/error.hpp"

namespace fsmi {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9E3779B97F4A7C15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

struct Rect {
  int x0, y0, x1, y1;  // inclusive
  bool overlaps(const Rect& o, int margin) const {
    return x0 - margin <= o.x1 && o.x0 - margin <= x1 && y0 - margin <= o.y1 && o.y0 - margin <= y1;
  }
};

std::size_t flood4(const std::vector<std::uint8_t>& occ, int w, int h, std::size_t start) {
  if (occ[start]) return 0;
  std::vector<std::uint8_t> seen(occ.size(), 0);
  std::vector<std::size_t> stack{start};
  seen[start] = 1;
  std::size_t count = 0;
  while (!stack.empty()) {
    std::size_t i = stack.back();
    stack.pop_back();
    ++count;
    int cx = static_cast<int>(i % w), cy = static_cast<int>(i / w);
    const int nx[4] = {cx + 1, cx - 1, cx, cx};
    const int ny[4] = {cy, cy, cy + 1, cy - 1};
    for (int k = 0; k < 4; ++k) {
      if (nx[k] < 0 || ny[k] < 0 || nx[k] >= w || ny[k] >= h) continue;
      std::size_t j = static_cast<std::size_t>(ny[k]) * w + nx[k];
      if (!occ[j] && !seen[j]) {
        seen[j] = 1;
        stack.push_back(j);
      }
    }
  }
  return count;
}

bool try_world(std::mt19937_64& rng, int w, int h, const WorldConfig& cfg, std::vector<std::uint8_t>& occ,
               std::size_t start) {
  occ.assign(static_cast<std::size_t>(w) * h, 0);
  auto at = [&](int x, int y) -> std::uint8_t& { return occ[static_cast<std::size_t>(y) * w + x]; };
  for (int x = 0; x < w; ++x) at(x, 0) = at(x, h - 1) = 1;
  for (int y = 0; y < h; ++y) at(0, y) = at(w - 1, y) = 1;

  const int sx = static_cast<int>(start % w), sy = static_cast<int>(start / w);
  const int keep = static_cast<int>(std::lround(1.0 / cfg.resolution));
  Rect keep_out{sx - keep, sy - keep, sx + keep, sy + keep};
  std::vector<std::uint8_t> protect(occ.size(), 0);

  auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const int rmin = std::max(6, w / 6), rmax = std::max(rmin, w / 3);
  const int door = std::max(2, keep);
  std::vector<Rect> rooms;
  for (int r = 0; r < cfg.room_count; ++r) {
    for (int attempt = 0; attempt < 50; ++attempt) {
      int rw = uni(rmin, rmax), rh = uni(rmin, rmax);
      if (rw + 6 >= w || rh + 6 >= h) break;
      int x0 = uni(3, w - rw - 4), y0 = uni(3, h - rh - 4);
      Rect room{x0, y0, x0 + rw - 1, y0 + rh - 1};
      if (room.overlaps(keep_out, 2)) continue;
      bool clash = false;
      for (const auto& o : rooms) clash = clash || room.overlaps(o, 4);
      if (clash) continue;
      rooms.push_back(room);
      for (int x = room.x0; x <= room.x1; ++x) at(x, room.y0) = at(x, room.y1) = 1;
      for (int y = room.y0; y <= room.y1; ++y) at(room.x0, y) = at(room.x1, y) = 1;
      // Two doors on different sides.
      int first = uni(0, 3), second = (first + uni(1, 3)) % 4;
      for (int side : {first, second}) {
        bool horizontal = side < 2;
        int len = horizontal ? rw : rh;
        int off = uni(2, std::max(2, len - door - 2));
        for (int k = 0; k < door && off + k < len - 1; ++k) {
          int x = horizontal ? room.x0 + off + k : (side == 2 ? room.x0 : room.x1);
          int y = horizontal ? (side == 0 ? room.y0 : room.y1) : room.y0 + off + k;
          at(x, y) = 0;
        }
      }
      break;
    }
  }
  for (const auto& room : rooms)
    for (int y = std::max(0, room.y0 - 3); y <= std::min(h - 1, room.y1 + 3); ++y)
      for (int x = std::max(0, room.x0 - 3); x <= std::min(w - 1, room.x1 + 3); ++x) {
        bool near_wall = x <= room.x0 + 3 || x >= room.x1 - 3 || y <= room.y0 + 3 || y >= room.y1 - 3;
        if (near_wall) protect[static_cast<std::size_t>(y) * w + x] = 1;
      }

  const double interior = static_cast<double>(w - 2) * (h - 2);
  const auto target = static_cast<std::size_t>(cfg.obstacle_density * interior);
  std::size_t covered = 0;
  for (int attempt = 0; covered < target && attempt < 20000; ++attempt) {
    int s = uni(2, 5);
    int x0 = uni(2, w - s - 3), y0 = uni(2, h - s - 3);
    Rect block{x0, y0, x0 + s - 1, y0 + s - 1};
    if (block.overlaps(keep_out, 0)) continue;
    bool bad = false;
    for (int y = block.y0 - 1; y <= block.y1 + 1 && !bad; ++y)
      for (int x = block.x0 - 1; x <= block.x1 + 1 && !bad; ++x)
        bad = protect[static_cast<std::size_t>(y) * w + x] || at(x, y);
    if (bad) continue;
    for (int y = block.y0; y <= block.y1; ++y)
      for (int x = block.x0; x <= block.x1; ++x) at(x, y) = 1;
    covered += static_cast<std::size_t>(s) * s;
  }

  std::size_t free_cells = 0;
  for (auto c : occ) free_cells += c ? 0 : 1;
  return flood4(occ, w, h, start) == free_cells;
}

}  // namespace

double SyntheticWorld::true_range(const Pose& origin, double angle, double max_range) const {
  RayTrace ray = ray_trace(truth, origin, angle, max_range);
  for (std::size_t i = 0; i < ray.size(); ++i)
    if (is_occupied(ray.cell_indices[i])) return std::min(ray.boundaries[i], max_range);
  return max_range;
}

SyntheticWorld generate_world(std::uint64_t seed, const WorldConfig& cfg) {
  require(cfg.resolution > 0.0 && cfg.size > 0.0, "world size and resolution must be positive");
  require(cfg.obstacle_density >= 0.0 && cfg.obstacle_density < 0.5, "obstacle density must be in [0, 0.5)");
  require(cfg.room_count >= 0, "room count must be non-negative");
  const int w = static_cast<int>(std::lround(cfg.size / cfg.resolution));
  require(w >= 32, "world must be at least 32 x 32 cells");
  const std::size_t start = static_cast<std::size_t>(w / 2) * w + w / 2;
  std::vector<std::uint8_t> occ;
  for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
    std::uint64_t s = attempt == 0 ? seed : mix_seed(seed, static_cast<std::uint64_t>(attempt));
    std::mt19937_64 rng(s);
    if (!try_world(rng, w, w, cfg, occ, start)) continue;
    SyntheticWorld world;
    world.seed = s;
    world.truth = OccupancyGrid2D(w, w, cfg.resolution, 0.5);
    for (std::size_t i = 0; i < occ.size(); ++i) world.truth.set(i, occ[i] ? 1.0 : 0.0);
    world.start = {world.truth.center_x(start), world.truth.center_y(start), 0.0};
    return world;
  }
  fail(ErrorCode::invalid_argument, "could not generate a connected world within the retry budget");
}

std::size_t reachable_free_cells(const SyntheticWorld& world) {
  const auto& g = world.truth;
  std::vector<std::uint8_t> occ(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) occ[i] = world.is_occupied(i);
  return flood4(occ, g.width(), g.height(), g.cell_of(world.start.x, world.start.y));
}

Scan simulate_scan(const SyntheticWorld& world, const Pose& pose, const SensorModel& sensor, int n_beams,
                   std::uint64_t noise_seed) {
  require(n_beams >= 1, "scan needs at least one beam");
  if (!world.truth.contains(pose.x, pose.y)) fail(ErrorCode::invalid_argument, "scan pose outside the world");
  if (world.is_occupied(world.truth.cell_of(pose.x, pose.y)))
    fail(ErrorCode::invalid_argument, "scan pose inside an obstacle");
  std::mt19937_64 rng(noise_seed);
  std::normal_distribution<double> noise(0.0, sensor.sigma > 0.0 ? sensor.sigma : 1.0);
  Scan scan;
  scan.pose = pose;
  scan.angles.resize(n_beams);
  scan.ranges.resize(n_beams);
  for (int b = 0; b < n_beams; ++b) {
    double angle = pose.theta + 2.0 * std::numbers::pi * b / n_beams;
    double r = world.true_range(pose, angle, sensor.max_range);
    if (r < sensor.max_range && sensor.sigma > 0.0) r = std::clamp(r + noise(rng), 0.0, sensor.max_range);
    scan.angles[b] = angle;
    scan.ranges[b] = r;
  }
  return scan;
}

void integrate_scan(OccupancyGrid2D& map, const Scan& scan, const SensorModel& sensor) {
  for (std::size_t b = 0; b < scan.angles.size(); ++b) {
    RayTrace ray = ray_trace(map, scan.pose, scan.angles[b], sensor.max_range);
    bayes_update(map, ray, scan.ranges[b], sensor);
  }
}

MiAlgorithm parse_algorithm(const std::string& name) {
  if (name == "fsmi") return MiAlgorithm::fsmi;
  if (name == "approx_fsmi") return MiAlgorithm::approx_fsmi;
  if (name == "uniform_fsmi") return MiAlgorithm::uniform_fsmi;
  if (name == "csqmi_approx") return MiAlgorithm::csqmi_approx;
  fail(ErrorCode::invalid_argument, "unknown MI algorithm: " + name);
}

const char* algorithm_name(MiAlgorithm a) {
  switch (a) {
    case MiAlgorithm::fsmi: return "fsmi";
    case MiAlgorithm::approx_fsmi: return "approx_fsmi";
    case MiAlgorithm::uniform_fsmi: return "uniform_fsmi";
    case MiAlgorithm::csqmi_approx: return "csqmi_approx";
  }
  return "?";
}

MiContext::MiContext(const SensorModel& s, double resolution, int d, double clamp_eps)
    : sensor(s), tables(s, clamp_eps), delta(d), uniform_h(gaussian_to_uniform_h(s.sigma, resolution)) {
  require(d >= 1, "truncation must be at least one cell");
}

void sample_beam(const OccupancyGrid2D& map, double x, double y, double angle, double max_range,
                 SampledBeam& out) {
  out.cells.clear();
  out.occupancies.clear();
  const double res = map.resolution();
  const double dx = std::cos(angle), dy = std::sin(angle);
  const auto n = static_cast<int>(max_range / res + 1e-9);
  for (int i = 0; i < n; ++i) {
    double d = (i + 0.5) * res;
    double px = x + d * dx, py = y + d * dy;
    if (!map.contains(px, py)) break;
    std::size_t c = map.cell_of(px, py);
    out.cells.push_back(c);
    out.occupancies.push_back(map.at(c));
  }
}

double beam_mi(MiAlgorithm a, const BeamView& beam, const MiContext& ctx) {
  if (beam.empty()) return 0.0;
  switch (a) {
    case MiAlgorithm::fsmi: return fsmi::fsmi(beam, ctx.tables).mi;
    case MiAlgorithm::approx_fsmi: return approx_fsmi(beam, ctx.tables, ctx.delta).mi;
    case MiAlgorithm::uniform_fsmi: return uniform_fsmi(beam, ctx.tables, ctx.uniform_h).mi;
    case MiAlgorithm::csqmi_approx: return csqmi_approx(beam, ctx.sensor, ctx.delta).mi;
  }
  return 0.0;
}

std::vector<double> mi_surface(const OccupancyGrid2D& map, const MiContext& ctx, std::span<const Pose> poses,
                               MiAlgorithm algorithm, int n_beams) {
  require(n_beams >= 1, "need at least one beam per pose");
  std::vector<double> out;
  out.reserve(poses.size());
  SampledBeam sb;
  for (const auto& p : poses) {
    if (!map.contains(p.x, p.y)) fail(ErrorCode::invalid_argument, "pose outside the map");
    double total = 0.0;
    for (int b = 0; b < n_beams; ++b) {
      sample_beam(map, p.x, p.y, p.theta + 2.0 * std::numbers::pi * b / n_beams, ctx.sensor.max_range, sb);
      if (sb.cells.empty()) continue;
      total += beam_mi(algorithm, BeamView::uniform(sb.occupancies, map.resolution(), map.clamp_eps()), ctx);
    }
    out.push_back(total);
  }
  return out;
}

GridPath DistanceField::path_to(std::size_t goal, const OccupancyGrid2D& map) const {
  if (goal >= dist.size() || !std::isfinite(dist[goal])) fail(ErrorCode::no_candidates, "goal is unreachable");
  GridPath p;
  p.length = dist[goal];
  for (auto c = static_cast<std::int64_t>(goal); c >= 0; c = parent[static_cast<std::size_t>(c)])
    p.cells.push_back(static_cast<std::size_t>(c));
  std::reverse(p.cells.begin(), p.cells.end());
  (void)map;
  return p;
}

DistanceField dijkstra(const OccupancyGrid2D& map, std::size_t start, double traversable) {
  const int w = map.width(), h = map.height();
  const double res = map.resolution(), diag = res * std::numbers::sqrt2;
  DistanceField f;
  f.dist.assign(map.size(), inf);
  f.parent.assign(map.size(), -1);
  auto free = [&](int x, int y) {
    return x >= 0 && y >= 0 && x < w && y < h && map.at(x, y) < traversable;
  };
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  f.dist[start] = 0.0;
  open.push({0.0, start});
  while (!open.empty()) {
    auto [d, i] = open.top();
    open.pop();
    if (d > f.dist[i]) continue;
    int cx = map.cell_x(i), cy = map.cell_y(i);
    for (int oy = -1; oy <= 1; ++oy)
      for (int ox = -1; ox <= 1; ++ox) {
        if (!ox && !oy) continue;
        int nx = cx + ox, ny = cy + oy;
        if (!free(nx, ny)) continue;
        if (ox && oy && !(free(cx + ox, cy) && free(cx, cy + oy))) continue;
        double nd = d + (ox && oy ? diag : res);
        std::size_t j = map.index(nx, ny);
        if (nd < f.dist[j]) {
          f.dist[j] = nd;
          f.parent[j] = static_cast<std::int64_t>(i);
          open.push({nd, j});
        }
      }
  }
  return f;
}

bool is_frontier(const OccupancyGrid2D& map, std::size_t i, const PlanningConfig& cfg) {
  if (map.at(i) >= cfg.traversable) return false;
  int cx = map.cell_x(i), cy = map.cell_y(i);
  const int nx[4] = {cx + 1, cx - 1, cx, cx};
  const int ny[4] = {cy, cy, cy + 1, cy - 1};
  for (int k = 0; k < 4; ++k)
    if (map.in_bounds(nx[k], ny[k]) && std::abs(map.at(nx[k], ny[k]) - 0.5) < cfg.unknown_band) return true;
  return false;
}

std::vector<std::vector<std::size_t>> frontier_clusters(const OccupancyGrid2D& map, const PlanningConfig& cfg) {
  std::vector<std::uint8_t> frontier(map.size(), 0), seen(map.size(), 0);
  for (std::size_t i = 0; i < map.size(); ++i) frontier[i] = is_frontier(map, i, cfg);
  std::vector<std::vector<std::size_t>> clusters;
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (!frontier[i] || seen[i]) continue;
    std::vector<std::size_t> cluster;
    seen[i] = 1;
    stack.push_back(i);
    while (!stack.empty()) {
      std::size_t c = stack.back();
      stack.pop_back();
      cluster.push_back(c);
      int cx = map.cell_x(c), cy = map.cell_y(c);
      for (int oy = -1; oy <= 1; ++oy)
        for (int ox = -1; ox <= 1; ++ox) {
          int nx = cx + ox, ny = cy + oy;
          if (!map.in_bounds(nx, ny)) continue;
          std::size_t j = map.index(nx, ny);
          if (frontier[j] && !seen[j]) {
            seen[j] = 1;
            stack.push_back(j);
          }
        }
    }
    if (cluster.size() < static_cast<std::size_t>(std::max(1, cfg.min_cluster))) continue;
    std::sort(cluster.begin(), cluster.end());
    clusters.push_back(std::move(cluster));
  }
  return clusters;
}

bool HitMarks::independent(std::span<const std::size_t> cells, std::span<const double> pe,
                           double threshold) const {
  for (std::size_t i = 0; i < cells.size(); ++i)
    if (std::min(pe[i], hit_[cells[i]]) > threshold) return false;
  return true;
}

void HitMarks::add(std::span<const std::size_t> cells, std::span<const double> pe) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (hit_[cells[i]] == 0.0) touched_.push_back(cells[i]);
    hit_[cells[i]] += pe[i];
  }
}

void HitMarks::clear() {
  for (auto c : touched_) hit_[c] = 0.0;
  touched_.clear();
}

namespace {

// Poses every `interval` meters along the polyline through the cell centres,
// always ending at the goal.
std::vector<std::pair<double, double>> path_poses(const OccupancyGrid2D& map, const GridPath& path,
                                                  double interval) {
  std::vector<std::pair<double, double>> poses;
  const auto& c = path.cells;
  double next = interval, walked = 0.0;
  for (std::size_t i = 1; i < c.size(); ++i) {
    double x0 = map.center_x(c[i - 1]), y0 = map.center_y(c[i - 1]);
    double x1 = map.center_x(c[i]), y1 = map.center_y(c[i]);
    double seg = std::hypot(x1 - x0, y1 - y0);
    while (next <= walked + seg + 1e-12) {
      double t = (next - walked) / seg;
      poses.emplace_back(x0 + t * (x1 - x0), y0 + t * (y1 - y0));
      next += interval;
    }
    walked += seg;
  }
  double gx = map.center_x(c.back()), gy = map.center_y(c.back());
  if (poses.empty() || std::hypot(poses.back().first - gx, poses.back().second - gy) > 1e-9)
    poses.emplace_back(gx, gy);
  return poses;
}

}  // namespace

double path_information(const OccupancyGrid2D& map, const MiContext& ctx, MiAlgorithm algorithm,
                        const GridPath& path, const PlanningConfig& cfg, MiStats* stats) {
  require(!path.cells.empty(), "path must contain at least one cell");
  require(cfg.path_interval > 0.0 && cfg.planning_beams >= 1, "invalid planning configuration");
  HitMarks marks(map.size());
  const int nb = cfg.planning_beams;
  std::vector<SampledBeam> sampled(static_cast<std::size_t>(nb));
  std::vector<BeamView> views;
  std::vector<HitDistribution> pes;
  std::vector<int> accepted;
  double total = 0.0;
  for (auto [x, y] : path_poses(map, path, cfg.path_interval)) {
    views.clear();
    pes.clear();
    accepted.clear();
    for (int b = 0; b < nb; ++b) {
      auto& sb = sampled[static_cast<std::size_t>(b)];
      sample_beam(map, x, y, 2.0 * std::numbers::pi * b / nb, ctx.sensor.max_range, sb);
      if (sb.cells.empty()) {
        views.emplace_back();
        pes.emplace_back();
        continue;
      }
      views.push_back(BeamView::uniform(sb.occupancies, map.resolution(), map.clamp_eps()));
      pes.push_back(compute_pe(views.back()));
      // p[0] is the max-range event; p[i + 1] belongs to cells[i].
      std::span<const double> pe(pes.back().p.data() + 1, sb.cells.size());
      if (marks.independent(sb.cells, pe, cfg.independence)) accepted.push_back(b);
    }
    auto t0 = std::chrono::steady_clock::now();
    for (int b : accepted) total += beam_mi(algorithm, views[static_cast<std::size_t>(b)], ctx);
    auto t1 = std::chrono::steady_clock::now();
    if (stats) {
      stats->beams += accepted.size();
      stats->nanoseconds += static_cast<std::uint64_t>(
          std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
    }
    // Marks from this pose only constrain later poses.
    for (int b : accepted) {
      const auto& sb = sampled[static_cast<std::size_t>(b)];
      marks.add(sb.cells, std::span<const double>(pes[static_cast<std::size_t>(b)].p.data() + 1, sb.cells.size()));
    }
  }
  return total;
}

namespace {

// Reachable cell of the cluster closest to its centroid; ties to the lowest index.
std::int64_t cluster_goal(const OccupancyGrid2D& map, const std::vector<std::size_t>& cluster,
                          const DistanceField& field, std::size_t start) {
  double mx = 0.0, my = 0.0;
  for (auto c : cluster) {
    mx += map.center_x(c);
    my += map.center_y(c);
  }
  mx /= static_cast<double>(cluster.size());
  my /= static_cast<double>(cluster.size());
  std::int64_t best = -1;
  double best_d = inf;
  for (auto c : cluster) {
    if (c == start || !std::isfinite(field.dist[c])) continue;
    double d = std::hypot(map.center_x(c) - mx, map.center_y(c) - my);
    if (d < best_d) {
      best_d = d;
      best = static_cast<std::int64_t>(c);
    }
  }
  return best;
}

double cluster_distance(const std::vector<std::size_t>& cluster, const DistanceField& field, std::size_t start) {
  double d = inf;
  for (auto c : cluster)
    if (c != start) d = std::min(d, field.dist[c]);
  return d;
}

}  // namespace

PlanResult plan_nearest_frontier(const OccupancyGrid2D& map, std::size_t start, const PlanningConfig& cfg) {
  require(start < map.size(), "start cell outside the map");
  DistanceField field = dijkstra(map, start, cfg.traversable);
  auto clusters = frontier_clusters(map, cfg);
  double best_d = inf;
  std::int64_t goal = -1;
  for (const auto& cl : clusters) {
    double d = cluster_distance(cl, field, start);
    if (d < best_d) {
      std::int64_t g = cluster_goal(map, cl, field, start);
      if (g < 0) continue;
      best_d = d;
      goal = g;
    }
  }
  if (goal < 0) fail(ErrorCode::no_candidates, "no reachable frontier");
  PlanResult r;
  r.goal = static_cast<std::size_t>(goal);
  r.path = field.path_to(r.goal, map);
  return r;
}

std::vector<std::size_t> information_candidates(const OccupancyGrid2D& map, const DistanceField& field,
                                                std::size_t start, const PlanningConfig& cfg) {
  require(cfg.max_candidates >= 1, "need at least one candidate");
  auto clusters = frontier_clusters(map, cfg);
  std::vector<std::pair<double, std::size_t>> goals;
  std::vector<std::size_t> reachable;
  for (const auto& cl : clusters) {
    std::int64_t g = cluster_goal(map, cl, field, start);
    if (g >= 0) goals.emplace_back(field.dist[static_cast<std::size_t>(g)], static_cast<std::size_t>(g));
    for (auto c : cl)
      if (c != start && std::isfinite(field.dist[c])) reachable.push_back(c);
  }
  std::sort(goals.begin(), goals.end());
  const auto cap = static_cast<std::size_t>(cfg.max_candidates);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < goals.size() && out.size() < cap; ++i) out.push_back(goals[i].second);
  std::sort(reachable.begin(), reachable.end());
  if (out.size() < cap && !reachable.empty()) {
    std::size_t room = cap - out.size();
    std::size_t stride = (reachable.size() + room - 1) / room;
    for (std::size_t i = 0; i < reachable.size(); i += stride) out.push_back(reachable[i]);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

PlanResult plan_information_path(const OccupancyGrid2D& map, const MiContext& ctx, std::size_t start,
                                 MiAlgorithm algorithm, const PlanningConfig& cfg, MiStats* stats) {
  require(start < map.size(), "start cell outside the map");
  DistanceField field = dijkstra(map, start, cfg.traversable);
  auto candidates = information_candidates(map, field, start, cfg);
  if (candidates.empty()) fail(ErrorCode::no_candidates, "no reachable candidate goal");
  PlanResult best;
  bool have = false;
  for (auto c : candidates) {
    GridPath path = field.path_to(c, map);
    double mi = path_information(map, ctx, algorithm, path, cfg, stats);
    double ratio = mi / path.length;
    if (!have || ratio > best.ratio) {
      best = {c, std::move(path), mi, ratio};
      have = true;
    }
  }
  return best;
}

const char* stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::entropy_converged: return "entropy_converged";
    case StopReason::no_candidates: return "no_candidates";
    case StopReason::max_steps: return "max_steps";
  }
  return "?";
}

ExplorationLog run_exploration(const SyntheticWorld& world, const ExploreConfig& cfg) {
  cfg.sensor.validate();
  require(cfg.max_steps >= 0, "max_steps must be non-negative");
  require(cfg.scan_beams >= 1, "scan needs at least one beam");
  const auto& truth = world.truth;
  ExplorationLog log;
  log.map = OccupancyGrid2D(truth.width(), truth.height(), truth.resolution(), cfg.prior, cfg.clamp_eps);
  auto& map = log.map;
  std::unique_ptr<MiContext> ctx;
  if (cfg.planner == PlannerKind::information)
    ctx = std::make_unique<MiContext>(cfg.sensor, truth.resolution(), cfg.delta, cfg.clamp_eps);

  Pose pose = world.start;
  double walked = 0.0;
  double prev = entropy(map);
  log.steps.push_back({0, pose.x, pose.y, pose.x, pose.y, 0.0, prev});
  std::uint64_t scans = 0;
  auto scan_here = [&] {
    Scan scan = simulate_scan(world, pose, cfg.sensor, cfg.scan_beams, mix_seed(cfg.noise_seed, ++scans));
    integrate_scan(map, scan, cfg.sensor);
  };
  for (int step = 1; step <= cfg.max_steps; ++step) {
    scan_here();
    double h = entropy(map);
    if (cfg.snapshot) cfg.snapshot(step, map);
    StepRecord rec{step, pose.x, pose.y, pose.x, pose.y, walked, h};
    if (prev - h < cfg.entropy_threshold) {
      log.steps.push_back(rec);
      log.reason = StopReason::entropy_converged;
      return log;
    }
    prev = h;
    std::size_t here = map.cell_of(pose.x, pose.y);
    PlanResult plan;
    try {
      plan = cfg.planner == PlannerKind::frontier
                 ? plan_nearest_frontier(map, here, cfg.planning)
                 : plan_information_path(map, *ctx, here, cfg.algorithm, cfg.planning, &log.mi);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::no_candidates) throw;
      log.steps.push_back(rec);
      log.reason = StopReason::no_candidates;
      return log;
    }
    // Follow the path, stopping short of a cell that is truly occupied. The
    // sensor keeps running: a scan every path_interval meters on the way.
    double since_scan = 0.0;
    for (std::size_t i = 1; i < plan.path.cells.size(); ++i) {
      std::size_t c = plan.path.cells[i];
      if (world.is_occupied(c)) break;
      double nx = map.center_x(c), ny = map.center_y(c);
      double d = std::hypot(nx - pose.x, ny - pose.y);
      walked += d;
      since_scan += d;
      pose.x = nx;
      pose.y = ny;
      if (cfg.scan_while_moving && since_scan >= cfg.planning.path_interval - 1e-9 &&
          i + 1 < plan.path.cells.size()) {
        scan_here();
        since_scan = 0.0;
      }
    }
    rec.x = pose.x;
    rec.y = pose.y;
    rec.goal_x = map.center_x(plan.goal);
    rec.goal_y = map.center_y(plan.goal);
    rec.path_len = walked;
    log.steps.push_back(rec);
  }
  log.reason = StopReason::max_steps;
  return log;
}

void write_log_csv(const ExplorationLog& log, std::ostream& out) {
  out << "step,x,y,goal_x,goal_y,path_len_m,entropy_nats\n";
  char buf[256];
  for (const auto& s : log.steps) {
    std::snprintf(buf, sizeof buf, "%d,%.6f,%.6f,%.6f,%.6f,%.9g,%.9g\n", s.step, s.x, s.y, s.goal_x, s.goal_y,
                  s.path_len, s.entropy);
    out << buf;
  }
  if (!out) fail(ErrorCode::io, "failed to write exploration log");
}

}  // namespace fsmi
