#include <doctest.h>

#include <cmath>
#include <random>

#include "fsmi/error.hpp"
#include "fsmi/grid.hpp"
#include "fsmi/mi.hpp"
#include "oracle.hpp"

using namespace fsmi;

namespace {

std::vector<double> random_occ(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> o(n);
  for (auto& v : o) v = u(rng);
  return o;
}

oracle::FFunc table_f(const MiTables& t) {
  return [&t](bool occ, double r) { return t.f.lookup(occ ? DeltaKind::occ : DeltaKind::emp, r); };
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

const SensorModel paper_sensor = SensorModel::make(0.05, 1.5, 10.0);

}  // namespace

TEST_CASE("hit probabilities") {
  std::vector<double> two{0.5, 0.5};
  auto pe = compute_pe(BeamView::uniform(two, 0.1));
  CHECK(pe.p[1] == doctest::Approx(0.5));
  CHECK(pe.p[2] == doctest::Approx(0.25));
  CHECK(pe.p[0] == doctest::Approx(0.25));
  std::vector<double> one{0.9};
  auto p1 = compute_pe(BeamView::uniform(one, 0.1));
  CHECK(p1.p[1] == doctest::Approx(0.9));
  CHECK(p1.p[0] == doctest::Approx(0.1));

  std::mt19937_64 rng(1);
  auto o = random_occ(rng, 50);
  auto beam = BeamView::uniform(o, 0.1);
  auto got = compute_pe(beam);
  auto want = oracle::hit_probabilities(std::vector<double>(beam.occupancies().begin(), beam.occupancies().end()));
  double sum = 0.0;
  for (std::size_t j = 0; j <= 50; ++j) {
    CHECK(got.p[j] == doctest::Approx(want[j]).epsilon(1e-12).scale(1e-300));
    CHECK(got.p[j] >= 0.0);
    sum += got.p[j];
  }
  CHECK(std::abs(sum - 1.0) < 1e-12);
}

TEST_CASE("C values") {
  MiTables t(paper_sensor);
  std::vector<double> one{0.3};
  auto c1 = compute_ck(BeamView::uniform(one, 0.1), t.f);
  CHECK(c1[0] == doctest::Approx(t.f.lookup(DeltaKind::occ, 0.3 / 0.7)));

  MiTables neutral(SensorModel::make(0.05, 1.0, 10.0));
  std::mt19937_64 rng(2);
  auto o = random_occ(rng, 20);
  for (double c : compute_ck(BeamView::uniform(o, 0.1), neutral.f)) CHECK(c == 0.0);

  auto beam = BeamView::uniform(o, 0.1);
  auto got = compute_ck(beam, t.f);
  auto want = oracle::c_values(std::vector<double>(beam.occupancies().begin(), beam.occupancies().end()), table_f(t));
  for (std::size_t k = 0; k < 20; ++k) CHECK(got[k] == doctest::Approx(want[k]).epsilon(1e-12));
}

TEST_CASE("smi reference") {
  std::mt19937_64 rng(3);
  auto o = random_occ(rng, 100);
  auto beam = BeamView::uniform(o, 0.1);
  auto neutral = SensorModel::make(0.05, 1.0, 10.0);
  CHECK(smi_reference(beam, neutral, 0.01) == 0.0);
  CHECK_THROWS_AS(smi_reference(beam, paper_sensor, 0.0), Error);

  // The two evaluators compute the same Riemann sum.
  for (double step : {0.01, 0.003}) {
    double a = smi_reference(beam, paper_sensor, step, SmiEvaluation::per_cell);
    double b = smi_reference(beam, paper_sensor, step, SmiEvaluation::shared_prior);
    CHECK(rel(a, b) < 1e-10);
  }
  double fine = smi_reference(beam, paper_sensor, 1e-5, SmiEvaluation::shared_prior);
  double mid = smi_reference(beam, paper_sensor, 1e-4, SmiEvaluation::shared_prior);
  CHECK(rel(mid, fine) < 1e-4);

  // Simpson quadrature of the same integral with the exact f.
  auto ob = oracle::uniform_beam(o, 0.1);
  auto c = oracle::c_values(ob.o, oracle::exact_f(1.5));
  double simpson = oracle::smi_integral(ob, 0.05, c, 64);
  CHECK(rel(fine, simpson) < 1e-6);
}

TEST_CASE("fsmi equals the literal double sum") {
  MiTables t(paper_sensor);
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    auto o = random_occ(rng, 60);
    auto beam = BeamView::uniform(o, 0.1);
    auto ob = oracle::uniform_beam(o, 0.1);
    auto c = oracle::c_values(ob.o, table_f(t));
    double cdf = oracle::fsmi_sum(ob, 0.05, c, oracle::Kernel::cdf, 1000);
    double pdf = oracle::fsmi_sum(ob, 0.05, c, oracle::Kernel::pdf, 1000);
    CHECK(rel(fsmi::fsmi(beam, t).mi, cdf) < 1e-6);  // Phi table interpolation
    EvalOptions po;
    po.kernel = Kernel::pdf;
    CHECK(rel(fsmi::fsmi(beam, t, po).mi, pdf) < 1e-12);
    for (int d : {1, 3, 5}) {
      double cdf_d = oracle::fsmi_sum(ob, 0.05, c, oracle::Kernel::cdf, static_cast<std::size_t>(d));
      double pdf_d = oracle::fsmi_sum(ob, 0.05, c, oracle::Kernel::pdf, static_cast<std::size_t>(d));
      CHECK(rel(approx_fsmi(beam, t, d).mi, cdf_d) < 1e-6);
      CHECK(rel(approx_fsmi(beam, t, d, po).mi, pdf_d) < 1e-12);
    }
  }
}

TEST_CASE("fsmi on ray-traced beams with partial cells") {
  MiTables t(paper_sensor);
  auto g = new_grid(60, 60, 0.1, 0.5);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t i = 0; i < g.size(); ++i) g.set(i, u(rng));
  auto ray = ray_trace(g, {3.03, 2.97, 0.0}, 0.7, 2.5);
  auto beam = BeamView::from_ray(ray);
  CHECK_FALSE(beam.constant_width());
  oracle::Beam ob;
  for (double v : ray.occupancies) ob.o.push_back(std::clamp(v, 1e-4, 1.0 - 1e-4));
  ob.bounds = ray.boundaries;
  auto c = oracle::c_values(ob.o, table_f(t));
  CHECK(rel(fsmi::fsmi(beam, t).mi, oracle::fsmi_sum(ob, 0.05, c, oracle::Kernel::cdf, 1000)) < 1e-6);
  CHECK(rel(approx_fsmi(beam, t, 3).mi, oracle::fsmi_sum(ob, 0.05, c, oracle::Kernel::cdf, 3)) < 1e-6);
  CHECK_THROWS_AS(uniform_fsmi(beam, t, 1), Error);
}

TEST_CASE("fsmi accuracy against the fine reference") {
  MiTables t(paper_sensor);
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 3; ++trial) {
    auto beam = BeamView::uniform(random_occ(rng, 100), 0.1);
    double truth = smi_reference(beam, paper_sensor, 1e-5, SmiEvaluation::shared_prior);
    CHECK(rel(fsmi::fsmi(beam, t).mi, truth) < 1e-3);
    CHECK(rel(approx_fsmi(beam, t, 3).mi, fsmi::fsmi(beam, t).mi) < 1e-2);
  }
}

TEST_CASE("truncation limits and neutral model") {
  MiTables t(paper_sensor);
  std::mt19937_64 rng(7);
  auto beam = BeamView::uniform(random_occ(rng, 30), 0.1);
  double exact = fsmi::fsmi(beam, t).mi;
  CHECK(rel(approx_fsmi(beam, t, 30).mi, exact) < 1e-12);
  CHECK(rel(approx_fsmi(beam, t, 100).mi, exact) < 1e-12);
  double prev_err = 1e300;
  for (int d = 1; d <= 6; ++d) {
    double err = std::abs(approx_fsmi(beam, t, d).mi - exact);
    CHECK(err <= prev_err * (1.0 + 1e-9));
    prev_err = err;
  }
  CHECK_THROWS_AS(approx_fsmi(beam, t, 0), Error);

  MiTables neutral(SensorModel::make(0.05, 1.0, 10.0));
  CHECK(fsmi::fsmi(beam, neutral).mi == 0.0);
  CHECK(approx_fsmi(beam, neutral, 3).mi == 0.0);
  CHECK(uniform_fsmi(beam, neutral, 2).mi == 0.0);

  CHECK(fsmi::fsmi(beam, t).mi == fsmi::fsmi(beam, t).mi);
  CHECK(fsmi::fsmi(beam, t).mi >= -1e-9);
}

TEST_CASE("uniform fsmi equals the clamped double sum") {
  MiTables t(paper_sensor);
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    auto o = random_occ(rng, 40);
    auto beam = BeamView::uniform(o, 0.1);
    auto ob = oracle::uniform_beam(o, 0.1);
    auto c = oracle::c_values(ob.o, table_f(t));
    for (int h = 0; h <= 5; ++h) CHECK(rel(uniform_fsmi(beam, t, h).mi, oracle::uniform_sum(ob.o, c, h)) < 1e-12);
    // H = 0 keeps only the diagonal.
    auto pe = oracle::hit_probabilities(ob.o);
    double diag = 0.0;
    for (std::size_t j = 1; j <= 40; ++j) diag += pe[j] * c[j - 1];
    CHECK(rel(uniform_fsmi(beam, t, 0).mi, diag) < 1e-12);
  }
  CHECK_THROWS_AS(uniform_fsmi(BeamView::uniform(random_occ(rng, 5), 0.1), t, -1), Error);
}

TEST_CASE("csqmi against the divergence definition") {
  std::mt19937_64 rng(9);
  for (std::size_t n = 1; n <= 5; ++n) {
    auto o = random_occ(rng, n);
    auto beam = BeamView::uniform(o, 0.1);
    auto ob = oracle::uniform_beam(o, 0.1);
    double want = oracle::csqmi_bruteforce(ob, 0.05, 2e-5);
    CHECK(rel(csqmi_exact(beam, paper_sensor).mi, want) < 1e-6);
  }
}

TEST_CASE("csqmi properties") {
  std::mt19937_64 rng(10);
  auto o = random_occ(rng, 25);
  auto beam = BeamView::uniform(o, 0.1);
  double exact = csqmi_exact(beam, paper_sensor).mi;
  CHECK(rel(csqmi_approx(beam, paper_sensor, 25).mi, exact) < 1e-12);
  CHECK(rel(csqmi_approx(beam, paper_sensor, 3).mi, exact) < 1e-2);
  // Independent of delta_occ.
  CHECK(csqmi_exact(beam, SensorModel::make(0.05, 3.0, 10.0)).mi == exact);
  // Translation invariant.
  std::vector<double> shifted(26);
  for (std::size_t i = 0; i <= 25; ++i) shifted[i] = 1.7 + 0.1 * static_cast<double>(i);
  CHECK(rel(csqmi_exact(BeamView(o, shifted), paper_sensor).mi, exact) < 1e-9);
  // The general (non-constant width) path agrees with the folded one.
  auto bounds = std::vector<double>(beam.boundaries().begin(), beam.boundaries().end());
  bounds.back() -= 0.03;  // partial last cell
  BeamView partial(o, bounds);
  CHECK_FALSE(partial.constant_width());
  CHECK(csqmi_approx(partial, paper_sensor, 3).mi > 0.0);
  // Deterministic empty beam carries no information.
  std::vector<double> empty(25, 0.0);
  CHECK(std::abs(csqmi_exact(BeamView::uniform(empty, 0.1), paper_sensor).mi) < 1e-6);
}

TEST_CASE("multiplication counts") {
  MiTables t(paper_sensor);
  std::mt19937_64 rng(11);
  auto beam = BeamView::uniform(random_occ(rng, 256), 0.1);
  auto a = count_multiplications(CountedOp::approx_fsmi, beam, t, 3);
  auto c = count_multiplications(CountedOp::csqmi_approx, beam, t, 3);
  CHECK(a <= (3 + 3) * 256 + 64);
  CHECK(c <= (2 * 3 + 9) * 256 + 64);
  CHECK(a > 0);
  CHECK(count_multiplications(CountedOp::approx_fsmi, BeamView{}, t, 3) == 0);
}
