#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace fsmi {

enum class NoiseKind { gaussian, truncated_gaussian, uniform };

struct SensorModel {
  double sigma = 0.05;
  double delta_occ = 1.5;
  double delta_emp = 1.0 / 1.5;
  double max_range = 10.0;
  NoiseKind noise = NoiseKind::gaussian;
  int truncation = 3;  // cells, used by truncated_gaussian
  int uniform_h = 0;   // cells, used by uniform

  // Builds a validated model with delta_emp = 1/delta_occ.
  static SensorModel make(double sigma, double delta_occ, double max_range,
                          NoiseKind noise = NoiseKind::gaussian, int truncation = 3,
                          int uniform_h = 0);
  void validate() const;
};

// f(delta, r) = ln((r+1)/(r+1/delta)) - ln(delta)/(r*delta+1), in nats.
double f_value(double delta, double r);

// Standard normal CDF sampled on [lo, hi] (sigma units), linear interpolation.
class PhiTable {
 public:
  explicit PhiTable(double sigma, double half_width = 6.0, double step = 1e-3);

  // u in sigma units.
  double cdf(double u) const { return interpolate(u * inv_step_ + offset_); }
  // d in meters; the sigma scaling is folded into the index computation.
  double cdf_distance(double d) const { return interpolate(d * inv_step_m_ + offset_); }

  double sigma() const { return sigma_; }
  double lo() const { return -half_width_; }
  double hi() const { return half_width_; }
  double step() const { return step_; }
  const std::vector<double>& values() const { return values_; }

 private:
  double interpolate(double pos) const {
    if (pos <= 0.0) return 0.0;
    if (pos >= last_) return 1.0;
    auto i = static_cast<std::size_t>(pos);
    double t = pos - static_cast<double>(i);
    return values_[i] + t * (values_[i + 1] - values_[i]);
  }

  double sigma_;
  double half_width_;
  double step_;
  double inv_step_;
  double inv_step_m_;
  double offset_;
  double last_;
  std::vector<double> values_;
};

enum class DeltaKind { occ, emp };

// f(delta_occ, r) sampled on a symmetric log-odds axis. Queries for delta_emp
// read the mirrored sample, using f(delta_emp, r) = f(delta_occ, 1/r).
class FTable {
 public:
  explicit FTable(double delta_occ, double clamp_eps = 1e-4, std::size_t samples = 65536);

  std::size_t index(double log_odds) const {
    double pos = log_odds * inv_h_ + center_;
    if (!(pos > 0.0)) return 0;
    if (pos >= last_) return samples_ - 1;
    return static_cast<std::size_t>(pos + 0.5);
  }
  double occ(double log_odds) const { return occ_at(index(log_odds)); }
  double emp(double log_odds) const { return emp_at(index(log_odds)); }
  // Entry i holds f(delta_occ, .) at lattice i and at the mirrored lattice
  // point, so both queries for one cell touch a single cache line.
  double occ_at(std::size_t i) const { return values_[2 * i]; }
  double emp_at(std::size_t i) const { return values_[2 * i + 1]; }
  double lookup(DeltaKind kind, double r) const {
    double l = std::log(r);
    return kind == DeltaKind::occ ? occ(l) : emp(l);
  }

  double lattice(std::size_t i) const { return (static_cast<double>(i) - center_) * h_; }
  std::size_t size() const { return samples_; }
  double delta_occ() const { return delta_occ_; }
  double max_log_odds() const { return max_log_odds_; }

 private:
  double delta_occ_;
  std::size_t samples_;
  double max_log_odds_;
  double h_;
  double inv_h_;
  double center_;
  double last_;
  std::vector<double> values_;
};

// H = round(sqrt(3) * sigma/cell_width - 1/2), clamped at 0.
int gaussian_to_uniform_h(double sigma, double cell_width);

struct MiTables {
  SensorModel sensor;
  double clamp_eps;
  PhiTable phi;
  FTable f;

  explicit MiTables(const SensorModel& s, double clamp_eps = 1e-4);
};

}  // namespace fsmi
