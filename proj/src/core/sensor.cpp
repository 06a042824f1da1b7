#include "fsmi/sensor.hpp"

#include <cmath>
#include <string>

#include "fsmi/error.hpp"

namespace fsmi {

SensorModel SensorModel::make(double sigma, double delta_occ, double max_range, NoiseKind noise,
                              int truncation, int uniform_h) {
  SensorModel s;
  s.sigma = sigma;
  s.delta_occ = delta_occ;
  s.delta_emp = 1.0 / delta_occ;
  s.max_range = max_range;
  s.noise = noise;
  s.truncation = truncation;
  s.uniform_h = uniform_h;
  s.validate();
  return s;
}

void SensorModel::validate() const {
  require(sigma > 0.0, "sensor sigma must be positive");
  require(max_range > 0.0, "sensor max_range must be positive");
  require(delta_emp > 0.0, "delta_emp must be positive");
  // delta_occ = delta_emp = 1 is allowed: the neutral model carries no information.
  require(delta_occ >= 1.0 && delta_emp <= 1.0, "expected delta_occ >= 1 >= delta_emp");
  require(std::abs(delta_occ * delta_emp - 1.0) < 1e-12, "delta_emp must equal 1/delta_occ");
  require(truncation >= 1, "truncation must be at least one cell");
  require(uniform_h >= 0, "uniform half-width must be non-negative");
}

double f_value(double delta, double r) {
  require(delta > 0.0 && r > 0.0, "f_value needs delta > 0 and r > 0");
  return std::log((r + 1.0) / (r + 1.0 / delta)) - std::log(delta) / (r * delta + 1.0);
}

PhiTable::PhiTable(double sigma, double half_width, double step)
    : sigma_(sigma), half_width_(half_width), step_(step) {
  require(sigma > 0.0, "PhiTable sigma must be positive");
  require(half_width > 0.0 && step > 0.0, "PhiTable domain must be non-empty");
  auto half = static_cast<std::size_t>(std::llround(half_width / step));
  std::size_t n = 2 * half + 1;
  values_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double u = (static_cast<double>(i) - static_cast<double>(half)) * step;
    values_[i] = 0.5 * std::erfc(-u / std::sqrt(2.0));
  }
  inv_step_ = 1.0 / step;
  inv_step_m_ = 1.0 / (step * sigma);
  offset_ = static_cast<double>(half);
  last_ = static_cast<double>(n - 1);
}

FTable::FTable(double delta_occ, double clamp_eps, std::size_t samples)
    : delta_occ_(delta_occ), samples_(samples) {
  require(delta_occ > 0.0, "FTable delta_occ must be positive");
  require(clamp_eps > 0.0 && clamp_eps < 0.5, "clamp_eps must lie in (0, 0.5)");
  require(samples >= 2, "FTable needs at least two samples");
  max_log_odds_ = std::log((1.0 - clamp_eps) / clamp_eps);
  center_ = 0.5 * static_cast<double>(samples - 1);
  h_ = max_log_odds_ / center_;
  inv_h_ = 1.0 / h_;
  last_ = static_cast<double>(samples - 1);
  std::vector<double> occ(samples);
  for (std::size_t i = 0; i < samples; ++i) occ[i] = f_value(delta_occ, std::exp(lattice(i)));
  values_.resize(2 * samples);
  for (std::size_t i = 0; i < samples; ++i) {
    values_[2 * i] = occ[i];
    values_[2 * i + 1] = occ[samples - 1 - i];
  }
}

int gaussian_to_uniform_h(double sigma, double cell_width) {
  require(sigma > 0.0 && cell_width > 0.0, "sigma and cell width must be positive");
  double h = std::round(std::sqrt(3.0) * sigma / cell_width - 0.5);
  return h < 0.0 ? 0 : static_cast<int>(h);
}

MiTables::MiTables(const SensorModel& s, double eps)
    : sensor(s), clamp_eps(eps), phi(s.sigma), f(s.delta_occ, eps) {
  s.validate();
}

}  // namespace fsmi
