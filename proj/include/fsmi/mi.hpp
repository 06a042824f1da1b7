#pragma once

#include <chrono>
#include <cstdint>
#include <span>
#include <vector>

#include "fsmi/grid.hpp"
#include "fsmi/sensor.hpp"

namespace fsmi {

// Cells along one beam. Index c = 0..n-1 is the paper's cell c+1. A max-range
// return is modelled as a virtual cell [l_{n+1}, l_{n+1} + mean width].
class BeamView {
 public:
  BeamView() = default;
  BeamView(std::span<const double> occupancies, std::span<const double> boundaries,
           double clamp_eps = 1e-4);

  static BeamView uniform(std::span<const double> occupancies, double width, double clamp_eps = 1e-4);
  static BeamView from_ray(const RayTrace& ray, double clamp_eps = 1e-4);

  std::size_t size() const { return occ_.size(); }
  bool empty() const { return occ_.empty(); }

  std::span<const double> occupancies() const { return occ_; }
  std::span<const double> log_odds() const { return log_odds_; }
  std::span<const double> boundaries() const { return bounds_; }
  double occupancy(std::size_t c) const { return occ_[c]; }
  double odds(std::size_t c) const { return occ_[c] / (1.0 - occ_[c]); }
  double center(std::size_t c) const { return 0.5 * (bounds_[c] + bounds_[c + 1]); }
  double width(std::size_t c) const { return bounds_[c + 1] - bounds_[c]; }
  double mean_width() const { return mean_width_; }
  double end() const { return bounds_.back(); }
  // mu_0: centre of the virtual max-range cell.
  double virtual_center() const { return end() + 0.5 * mean_width_; }
  // True when every cell, including the first and last, has the same width.
  bool constant_width() const { return constant_width_; }
  // Constant width apart from a shorter first or last cell.
  bool uniform_interior() const { return uniform_interior_; }

 private:
  std::vector<double> occ_;
  std::vector<double> log_odds_;
  std::vector<double> bounds_;
  double mean_width_ = 0.0;
  bool constant_width_ = false;
  bool uniform_interior_ = false;
};

// p[0] = P(e_0), p[j] = P(e_j) for j = 1..n.
struct HitDistribution {
  std::vector<double> p;
};

struct MiBreakdown {
  double mi = 0.0;
  std::uint64_t multiplications = 0;
  std::chrono::nanoseconds elapsed{0};
};

// cdf: G is the noise mass inside cell k. pdf: G is the density at the cell
// centre times the cell width, the convention of the compressed-domain sums.
enum class Kernel { cdf, pdf };

struct EvalOptions {
  Kernel kernel = Kernel::cdf;
  bool count = false;  // fill MiBreakdown::multiplications
  bool timed = false;  // fill MiBreakdown::elapsed
};

enum class SmiEvaluation { per_cell, shared_prior };

HitDistribution compute_pe(const BeamView& beam);
// C[c] is the paper's C_{c+1}.
std::vector<double> compute_ck(const BeamView& beam, const FTable& table);

double smi_reference(const BeamView& beam, const SensorModel& sensor, double step,
                     SmiEvaluation evaluation = SmiEvaluation::per_cell);

MiBreakdown fsmi(const BeamView& beam, const MiTables& tables, EvalOptions opt = {});
MiBreakdown approx_fsmi(const BeamView& beam, const MiTables& tables, int delta, EvalOptions opt = {});
MiBreakdown uniform_fsmi(const BeamView& beam, const MiTables& tables, int h, EvalOptions opt = {});
MiBreakdown csqmi_exact(const BeamView& beam, const SensorModel& sensor, EvalOptions opt = {});
MiBreakdown csqmi_approx(const BeamView& beam, const SensorModel& sensor, int delta, EvalOptions opt = {});

enum class CountedOp { approx_fsmi, csqmi_approx };
std::uint64_t count_multiplications(CountedOp op, const BeamView& beam, const MiTables& tables, int delta);

}  // namespace fsmi
