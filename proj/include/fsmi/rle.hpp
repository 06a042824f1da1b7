#pragma once

#include <algorithm>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "fsmi/mi.hpp"
#include "fsmi/sensor.hpp"

namespace fsmi {

// Occupancies live on the lattice level/levels, level in [1, levels-1] for the
// default clamp. x-bar = 1 - o has lattice index levels - level.
struct RleGroup {
  int level = 0;
  std::uint32_t length = 0;
};

class RleSequence {
 public:
  RleSequence() = default;
  // canonical = true rejects equal adjacent levels.
  RleSequence(std::vector<RleGroup> groups, double w0, int levels = 128, bool canonical = true,
              double clamp_eps = 1e-4);

  static RleSequence compress(std::span<const double> occupancies, double w0, int levels = 128,
                              double clamp_eps = 1e-4);
  std::vector<double> decompress() const;
  // Homogeneous runs longer than max_length become equal-level sub-runs.
  RleSequence split_long_runs(std::size_t max_length) const;

  std::size_t size() const { return groups_.size(); }
  std::size_t cells() const { return n_; }
  const std::vector<RleGroup>& groups() const { return groups_; }
  std::size_t start(std::size_t u) const { return starts_[u]; }
  std::size_t length(std::size_t u) const { return groups_[u].length; }
  int level(std::size_t u) const { return groups_[u].level; }
  // Lattice index of x-bar for group u.
  int x_index(std::size_t u) const { return levels_ - groups_[u].level; }
  double occupancy(std::size_t u) const { return static_cast<double>(groups_[u].level) / levels_; }
  double log_odds(std::size_t u) const { return log_odds_[u]; }
  double w0() const { return w0_; }
  int levels() const { return levels_; }
  double o_res() const { return 1.0 / levels_; }
  std::size_t max_length() const;

 private:
  std::vector<RleGroup> groups_;
  std::vector<std::size_t> starts_;
  std::vector<double> log_odds_;
  std::size_t n_ = 0;
  double w0_ = 0.0;
  int levels_ = 128;
};

// Text fixture format: "w0 <meters>" header, then one "o L" line per group.
void write_rle(const RleSequence& seq, std::ostream& out);
RleSequence read_rle(std::istream& in, int levels = 128);

std::vector<double> pe_u(const RleSequence& seq);
std::vector<double> de_v(const RleSequence& seq, const FTable& f);

// Literal double sums; 0^0 = 1.
double alpha_direct(double x, int lu, int lv, double sigma_prime);
double beta_direct(double x, int lu, int lv, double sigma_prime);
// Shifted sums A and B, sum_j sum_k x^j [k] exp(-(j+t-k)^2 / 2 sigma'^2).
double a_direct(double x, int lu, int lv, int t, double sigma_prime);
double b_direct(double x, int lu, int lv, int t, double sigma_prime);

struct RleTableConfig {
  int levels = 128;
  double sigma_prime = 0.5;
  int l_bound = 6;     // alpha/beta side length
  int l_max = 4096;    // theta/gamma and uniform prefix length
  bool uniform = false;  // build the window prefix sums used by uniform_fsmi_rle
};

class RleTables {
 public:
  explicit RleTables(const RleTableConfig& config);

  const RleTableConfig& config() const { return cfg_; }
  double x(int xi) const { return static_cast<double>(xi) / cfg_.levels; }

  double alpha(int xi, int lu, int lv) const { return alpha_[ab_index(xi, lu, lv)]; }
  double beta(int xi, int lu, int lv) const { return beta_[ab_index(xi, lu, lv)]; }
  double theta(int xi, int l) const { return theta_[tg_index(xi, l)]; }
  double gamma(int xi, int l) const { return gamma_[tg_index(xi, l)]; }
  // x^m for 0 <= m <= l_max.
  double power(int xi, int m) const { return power_[tg_index(xi, m)]; }
  // x^-t for 1 <= t <= l_bound; infinite when it overflows.
  double inv_power(int xi, int t) const {
    return inv_power_[static_cast<std::size_t>(xi) * (cfg_.l_bound + 1) + t];
  }
  // sum_{a <= d <= b} g(d) and sum d g(d), g(d) = exp(-d^2 / 2 sigma'^2).
  // Offsets past the table read the saturated prefix (g is zero there).
  double window0(long a, long b) const {
    if (a > b) return 0.0;
    if (a >= 0) return p0(b + 1) - p0(a);
    if (b <= 0) return p0(-a + 1) - p0(-b);
    return p0(b + 1) + p0(-a + 1) - s0_[1];
  }
  double window1(long a, long b) const {
    if (a > b) return 0.0;
    if (a >= 0) return p1(b + 1) - p1(a);
    if (b <= 0) return p1(-b) - p1(-a + 1);
    return p1(b + 1) - p1(-a + 1);
  }
  // sum_{i < len} i^m x^i, m = 0, 1, 2.
  double geo(int m, int xi, int len) const;

 private:
  std::size_t ab_index(int xi, int lu, int lv) const {
    auto side = static_cast<std::size_t>(cfg_.l_bound + 1);
    return (static_cast<std::size_t>(xi) * side + lu) * side + lv;
  }
  std::size_t tg_index(int xi, int l) const {
    return static_cast<std::size_t>(xi) * static_cast<std::size_t>(cfg_.l_max + 1) + l;
  }
  double p0(long m) const { return s0_[std::min(static_cast<std::size_t>(m), s0_.size() - 1)]; }
  double p1(long m) const { return s1_[std::min(static_cast<std::size_t>(m), s1_.size() - 1)]; }

  RleTableConfig cfg_;
  std::vector<double> alpha_, beta_, theta_, gamma_, power_, inv_power_;
  std::vector<double> s0_, s1_;  // prefix sums of g(d), d*g(d) over d >= 0
  std::vector<double> geo_[3];
};

// Three-case reductions by the sign of t.
double a_term(int xi, int lu, int lv, long t, const RleTables& tables);
double b_term(int xi, int lu, int lv, long t, const RleTables& tables);

// Cells of two disjoint groups (or one group with itself) that interact under
// a kernel truncated to |j - k| <= delta. empty when no pair survives.
// Groups must not overlap.
struct TruncatedPair {
  long su = 0, lu = 0, sv = 0, lv = 0;
  bool empty = false;
};
inline TruncatedPair truncate_pair(long su, long lu, long sv, long lv, long delta) {
  TruncatedPair p{su, lu, sv, lv, false};
  if (su < sv) {
    p.empty = sv - (su + lu - 1) > delta;
    p.su = std::max(su, sv - delta);
    p.lu = su + lu - p.su;
    p.lv = std::min(lv, su + lu + delta - sv);
  } else if (su > sv) {
    p.empty = su - (sv + lv - 1) > delta;
    p.sv = std::max(sv, su - delta);
    p.lv = sv + lv - p.sv;
    p.lu = std::min(lu, sv + lv + delta - su);
  }
  if (p.empty) p.lu = p.lv = 0;
  return p;
}

MiBreakdown fsmi_rle(const RleSequence& seq, const MiTables& mi, const RleTables& tables,
                     EvalOptions opt = {});
MiBreakdown approx_fsmi_rle(const RleSequence& seq, const MiTables& mi, int delta,
                            const RleTables& tables, EvalOptions opt = {});
MiBreakdown uniform_fsmi_rle(const RleSequence& seq, const MiTables& mi, int h,
                             const RleTables& tables, EvalOptions opt = {});

// Integral approximation of A via erfc.
double analytic_a_approx(double x, int lu, int lv, int t, double sigma_prime);

}  // namespace fsmi
