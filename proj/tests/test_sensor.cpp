#include <doctest.h>

#include <cmath>
#include <random>

#include "fsmi/error.hpp"
#include "fsmi/sensor.hpp"
#include "oracle.hpp"

using namespace fsmi;

TEST_CASE("f_value closed form") {
  CHECK(std::abs(f_value(1.0, 0.3)) < 1e-15);
  CHECK(std::abs(f_value(1.0, 7.0)) < 1e-15);
  CHECK(f_value(1.5, 1.0) == doctest::Approx(std::log(1.2) - std::log(1.5) / 2.5).epsilon(1e-14));
  CHECK(f_value(1.5, 1.0) == doctest::Approx(0.02013).epsilon(1e-3));
  CHECK(f_value(2.0 / 3.0, 2.0) == doctest::Approx(f_value(1.5, 0.5)).epsilon(1e-13));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-8.0, 8.0);
  for (int i = 0; i < 1000; ++i) {
    double r = std::exp(u(rng));
    CHECK(f_value(1.5, r) > 0.0);
    CHECK(f_value(1.5, r) == doctest::Approx(oracle::f(1.5, r)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(f_value(1.5, 0.0), Error);
  CHECK_THROWS_AS(f_value(-1.0, 1.0), Error);
}

TEST_CASE("sensor model validation") {
  auto s = SensorModel::make(0.05, 1.5, 10.0);
  CHECK(s.delta_emp == doctest::Approx(1.0 / 1.5));
  CHECK_THROWS_AS(SensorModel::make(0.0, 1.5, 10.0), Error);
  CHECK_THROWS_AS(SensorModel::make(0.05, 0.5, 10.0), Error);
  CHECK_THROWS_AS(SensorModel::make(0.05, 1.5, -1.0), Error);
  CHECK_THROWS_AS(SensorModel::make(0.05, 1.5, 10.0, NoiseKind::truncated_gaussian, 0), Error);
  CHECK_THROWS_AS(SensorModel::make(0.05, 1.5, 10.0, NoiseKind::uniform, 3, -1), Error);
}

TEST_CASE("phi table") {
  PhiTable phi(0.05);
  CHECK(phi.cdf(0.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(phi.cdf(100.0) == 1.0);
  CHECK(phi.cdf(-100.0) == 0.0);
  CHECK(std::abs(phi.cdf(1.0) - 0.841345) < 1e-6);
  // Symmetry and monotonicity at sample points.
  const auto& v = phi.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    CHECK(std::abs(v[i] + v[v.size() - 1 - i] - 1.0) < 1e-9);
    if (i > 0) CHECK(v[i] >= v[i - 1]);
  }
  // Interpolation error against erfc.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  double worst = 0.0;
  for (int i = 0; i < 100000; ++i) {
    double x = u(rng);
    worst = std::max(worst, std::abs(phi.cdf(x) - oracle::normal_cdf(x)));
  }
  CHECK(worst < 1e-7);
  // Distances in meters scale by sigma.
  CHECK(phi.cdf_distance(0.05) == doctest::Approx(phi.cdf(1.0)).epsilon(1e-12));
}

TEST_CASE("f table lookup") {
  const double eps = 1e-4;
  FTable t(1.5, eps);
  // On-lattice samples equal the closed form; the mirrored sample gives delta_emp.
  for (std::size_t i = 0; i < t.size(); i += 997) {
    double r = std::exp(t.lattice(i));
    CHECK(t.occ_at(i) == doctest::Approx(f_value(1.5, r)).epsilon(1e-12));
    CHECK(t.emp_at(i) == doctest::Approx(f_value(1.0 / 1.5, r)).epsilon(1e-9).scale(1e-12));
  }
  // Reciprocal identity.
  std::mt19937_64 rng(9);
  double lim = std::log((1.0 - eps) / eps);
  std::uniform_real_distribution<double> u(-lim, lim);
  double worst = 0.0;
  for (int i = 0; i < 100000; ++i) {
    double r = std::exp(u(rng));
    CHECK(t.lookup(DeltaKind::emp, r) == t.lookup(DeltaKind::occ, 1.0 / r));
    worst = std::max(worst, std::abs(t.lookup(DeltaKind::occ, r) - f_value(1.5, r)));
  }
  // Nearest-sample error is at most half a step times max |df/dlog r|, which is
  // below 0.1 for delta_occ = 1.5; measured worst case is about 1.5e-6.
  CHECK(worst < 5e-6);
  // Out of domain saturates.
  CHECK(t.lookup(DeltaKind::occ, 1e12) == t.occ_at(t.size() - 1));
  CHECK(t.lookup(DeltaKind::occ, 1e-12) == t.occ_at(0));
}

TEST_CASE("gaussian to uniform half-width") {
  CHECK(gaussian_to_uniform_h(0.05, 0.1) == 0);
  CHECK(gaussian_to_uniform_h(0.2, 0.1) == 3);
  CHECK(gaussian_to_uniform_h(1e-6, 0.1) == 0);
}
