#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fsmi/grid.hpp"
#include "fsmi/mi.hpp"
#include "fsmi/sensor.hpp"

namespace fsmi {

struct WorldConfig {
  double size = 18.0;  // meters, square
  double resolution = 0.1;
  double obstacle_density = 0.03;  // fraction of interior cells covered by blocks
  int room_count = 3;
  int max_retries = 64;
};

// Ground truth. Border cells are occupied and the free space is 4-connected.
struct SyntheticWorld {
  std::uint64_t seed = 0;  // seed actually used after retries
  OccupancyGrid2D truth;   // occupied cells at 1 - eps, free at eps
  Pose start;

  bool is_occupied(std::size_t i) const { return truth.at(i) > 0.5; }
  // Distance to the first occupied cell, or max_range when none is hit.
  double true_range(const Pose& origin, double angle, double max_range) const;
};

SyntheticWorld generate_world(std::uint64_t seed, const WorldConfig& config = {});
// Number of free cells 4-connected to the start cell.
std::size_t reachable_free_cells(const SyntheticWorld& world);

struct Scan {
  Pose pose;
  std::vector<double> angles;
  std::vector<double> ranges;
};

// n_beams equally spaced directions over a full turn. Returns carry N(0, sigma^2)
// noise clipped to [0, max_range]; a beam that hits nothing reads max_range.
Scan simulate_scan(const SyntheticWorld& world, const Pose& pose, const SensorModel& sensor,
                   int n_beams, std::uint64_t noise_seed);
void integrate_scan(OccupancyGrid2D& map, const Scan& scan, const SensorModel& sensor);

enum class MiAlgorithm { fsmi, approx_fsmi, uniform_fsmi, csqmi_approx };
MiAlgorithm parse_algorithm(const std::string& name);
const char* algorithm_name(MiAlgorithm a);

// Everything needed to score beams against a map.
struct MiContext {
  SensorModel sensor;
  MiTables tables;
  int delta = 3;
  int uniform_h = 0;

  MiContext(const SensorModel& s, double resolution, int delta = 3, double clamp_eps = 1e-4);
};

// Beam cells sampled every resolution meters from the origin, so every beam
// has constant cell width. Sampling stops at the grid edge or max range.
struct SampledBeam {
  std::vector<std::size_t> cells;
  std::vector<double> occupancies;
};
void sample_beam(const OccupancyGrid2D& map, double x, double y, double angle, double max_range,
                 SampledBeam& out);

double beam_mi(MiAlgorithm a, const BeamView& beam, const MiContext& ctx);

// Sum over n_beams per-beam values at each pose (no double-count marking).
std::vector<double> mi_surface(const OccupancyGrid2D& map, const MiContext& ctx,
                               std::span<const Pose> poses, MiAlgorithm algorithm, int n_beams);

struct PlanningConfig {
  double traversable = 0.3;    // o below this is believed free
  double unknown_band = 0.05;  // |o - 0.5| below this is unknown
  double path_interval = 0.2;  // meters between MI evaluation poses
  int planning_beams = 60;
  int max_candidates = 24;
  double independence = 0.1;  // beam rejection threshold for the hit marks
  int min_cluster = 3;        // smaller frontier clusters are ignored
};

struct GridPath {
  std::vector<std::size_t> cells;  // start .. goal
  double length = 0.0;
};

// 8-connected Dijkstra over traversable cells, no corner cutting.
struct DistanceField {
  std::vector<double> dist;
  std::vector<std::int64_t> parent;
  GridPath path_to(std::size_t goal, const OccupancyGrid2D& map) const;
};
DistanceField dijkstra(const OccupancyGrid2D& map, std::size_t start, double traversable);

bool is_frontier(const OccupancyGrid2D& map, std::size_t i, const PlanningConfig& cfg);
// 8-connected clusters of frontier cells with at least min_cluster cells, each
// sorted, clusters ordered by first cell.
std::vector<std::vector<std::size_t>> frontier_clusters(const OccupancyGrid2D& map, const PlanningConfig& cfg);

struct PlanResult {
  std::size_t goal = 0;
  GridPath path;
  double mi = 0.0;
  double ratio = 0.0;
};

// Accumulated hit probability per cell, used to drop beams that would count
// cells already credited at an earlier pose of the same path.
class HitMarks {
 public:
  explicit HitMarks(std::size_t cells) : hit_(cells, 0.0) {}
  bool independent(std::span<const std::size_t> cells, std::span<const double> pe, double threshold) const;
  void add(std::span<const std::size_t> cells, std::span<const double> pe);
  void clear();

 private:
  std::vector<double> hit_;
  std::vector<std::size_t> touched_;
};

struct MiStats {
  std::uint64_t beams = 0;
  std::uint64_t nanoseconds = 0;
};

// MI of the poses along a path (every path_interval meters plus the goal).
double path_information(const OccupancyGrid2D& map, const MiContext& ctx, MiAlgorithm algorithm,
                        const GridPath& path, const PlanningConfig& cfg, MiStats* stats = nullptr);

// Both planners throw Error(no_candidates) when nothing is reachable.
PlanResult plan_nearest_frontier(const OccupancyGrid2D& map, std::size_t start, const PlanningConfig& cfg);
PlanResult plan_information_path(const OccupancyGrid2D& map, const MiContext& ctx, std::size_t start,
                                 MiAlgorithm algorithm, const PlanningConfig& cfg,
                                 MiStats* stats = nullptr);
// Candidate goals scored by the information planner.
std::vector<std::size_t> information_candidates(const OccupancyGrid2D& map, const DistanceField& field,
                                                std::size_t start, const PlanningConfig& cfg);

enum class PlannerKind { frontier, information };
enum class StopReason { entropy_converged, no_candidates, max_steps };
const char* stop_reason_name(StopReason r);

struct ExploreConfig {
  SensorModel sensor = SensorModel::make(0.05, 3.0, 5.0);
  int scan_beams = 180;
  PlannerKind planner = PlannerKind::information;
  MiAlgorithm algorithm = MiAlgorithm::approx_fsmi;
  int delta = 3;
  PlanningConfig planning;
  double entropy_threshold = 0.5;  // nats per step
  int max_steps = 200;
  std::uint64_t noise_seed = 1;
  double prior = 0.5;
  double clamp_eps = 1e-4;
  bool scan_while_moving = true;  // scan every planning.path_interval along the path
  // Called with the map after each step's scan when set.
  std::function<void(int, const OccupancyGrid2D&)> snapshot;
};

struct StepRecord {
  int step = 0;
  double x = 0.0, y = 0.0;
  double goal_x = 0.0, goal_y = 0.0;
  double path_len = 0.0;  // cumulative meters
  double entropy = 0.0;   // nats, after this step's scan
};

struct ExplorationLog {
  std::vector<StepRecord> steps;
  StopReason reason = StopReason::max_steps;
  MiStats mi;
  OccupancyGrid2D map;

  double path_length() const { return steps.empty() ? 0.0 : steps.back().path_len; }
  double final_entropy() const { return steps.empty() ? 0.0 : steps.back().entropy; }
};

ExplorationLog run_exploration(const SyntheticWorld& world, const ExploreConfig& config);
void write_log_csv(const ExplorationLog& log, std::ostream& out);

}  // namespace fsmi
