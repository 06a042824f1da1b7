#include "fsmi/rle.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "fsmi/error.hpp"

namespace fsmi {

namespace {

constexpr double inv_sqrt_2pi = 0.3989422804014327;

int min_level(int levels, double eps) { return static_cast<int>(std::ceil(eps * levels - 1e-9)); }
int max_level(int levels, double eps) { return static_cast<int>(std::floor((1.0 - eps) * levels + 1e-9)); }

double gauss(double d, double sp) { return std::exp(-d * d / (2.0 * sp * sp)); }

double ipow(double x, int j) { return j == 0 ? 1.0 : std::pow(x, j); }

}  // namespace

RleSequence::RleSequence(std::vector<RleGroup> groups, double w0, int levels, bool canonical,
                         double clamp_eps)
    : groups_(std::move(groups)), w0_(w0), levels_(levels) {
  require(!groups_.empty(), "RLE sequence needs at least one group");
  require(w0 > 0.0, "virtual cell width must be positive");
  require(levels >= 2, "lattice needs at least two levels");
  int lo = std::max(1, min_level(levels, clamp_eps));
  int hi = std::min(levels - 1, max_level(levels, clamp_eps));
  starts_.resize(groups_.size());
  log_odds_.resize(groups_.size());
  for (std::size_t u = 0; u < groups_.size(); ++u) {
    const auto& g = groups_[u];
    require(g.length >= 1, "RLE group length must be positive");
    require(g.level >= lo && g.level <= hi, "RLE occupancy outside the clamped lattice");
    if (canonical && u > 0) require(g.level != groups_[u - 1].level, "adjacent RLE groups must differ");
    starts_[u] = n_;
    n_ += g.length;
    double o = occupancy(u);
    log_odds_[u] = std::log(o / (1.0 - o));
  }
}

RleSequence RleSequence::compress(std::span<const double> occupancies, double w0, int levels,
                                  double clamp_eps) {
  require(!occupancies.empty(), "cannot compress an empty occupancy sequence");
  int lo = std::max(1, min_level(levels, clamp_eps));
  int hi = std::min(levels - 1, max_level(levels, clamp_eps));
  std::vector<RleGroup> groups;
  for (double o : occupancies) {
    int level = std::clamp(static_cast<int>(std::lround(o * levels)), lo, hi);
    if (!groups.empty() && groups.back().level == level)
      ++groups.back().length;
    else
      groups.push_back({level, 1});
  }
  return RleSequence(std::move(groups), w0, levels, true, clamp_eps);
}

std::vector<double> RleSequence::decompress() const {
  std::vector<double> out;
  out.reserve(n_);
  for (std::size_t u = 0; u < groups_.size(); ++u) out.insert(out.end(), groups_[u].length, occupancy(u));
  return out;
}

std::size_t RleSequence::max_length() const {
  std::size_t m = 0;
  for (const auto& g : groups_) m = std::max<std::size_t>(m, g.length);
  return m;
}

RleSequence RleSequence::split_long_runs(std::size_t max_length) const {
  require(max_length >= 1, "split length must be positive");
  std::vector<RleGroup> out;
  for (const auto& g : groups_) {
    std::size_t pieces = (g.length + max_length - 1) / max_length;
    std::size_t base = g.length / pieces, extra = g.length % pieces;
    for (std::size_t i = 0; i < pieces; ++i)
      out.push_back({g.level, static_cast<std::uint32_t>(base + (i < extra ? 1 : 0))});
  }
  return RleSequence(std::move(out), w0_, levels_, false);
}

void write_rle(const RleSequence& seq, std::ostream& out) {
  out << "w0 " << std::setprecision(17) << seq.w0() << '\n';
  for (std::size_t u = 0; u < seq.size(); ++u) out << seq.occupancy(u) << ' ' << seq.length(u) << '\n';
  if (!out) fail(ErrorCode::io, "failed to write RLE sequence");
}

RleSequence read_rle(std::istream& in, int levels) {
  std::string line, key;
  double w0 = 0.0;
  if (!std::getline(in, line)) fail(ErrorCode::parse, "missing RLE header");
  {
    std::istringstream hs(line);
    if (!(hs >> key >> w0) || key != "w0") fail(ErrorCode::parse, "RLE header must be 'w0 <meters>'");
  }
  std::vector<RleGroup> groups;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    double o = 0.0;
    long long len = 0;
    if (!(ls >> o >> len) || len < 1) fail(ErrorCode::parse, "bad RLE group line: " + line);
    auto level = static_cast<int>(std::lround(o * levels));
    if (std::abs(o * levels - level) > 1e-6) fail(ErrorCode::parse, "occupancy not on the lattice: " + line);
    groups.push_back({level, static_cast<std::uint32_t>(len)});
  }
  try {
    return RleSequence(std::move(groups), w0, levels);
  } catch (const Error& e) {
    fail(ErrorCode::parse, e.what());
  }
}

std::vector<double> pe_u(const RleSequence& seq) {
  std::vector<double> pe(seq.size());
  double p = 1.0;
  for (std::size_t u = 0; u < seq.size(); ++u) {
    pe[u] = p;
    p *= ipow(1.0 - seq.occupancy(u), static_cast<int>(seq.length(u)));
  }
  return pe;
}

std::vector<double> de_v(const RleSequence& seq, const FTable& f) {
  std::vector<double> de(seq.size());
  double d = 0.0;
  for (std::size_t v = 0; v < seq.size(); ++v) {
    de[v] = d;
    d += static_cast<double>(seq.length(v)) * f.emp(seq.log_odds(v));
  }
  return de;
}

double alpha_direct(double x, int lu, int lv, double sp) { return a_direct(x, lu, lv, 0, sp); }
double beta_direct(double x, int lu, int lv, double sp) { return b_direct(x, lu, lv, 0, sp); }

double a_direct(double x, int lu, int lv, int t, double sp) {
  double s = 0.0;
  for (int j = 0; j < lu; ++j) {
    double xj = ipow(x, j);
    for (int k = 0; k < lv; ++k) s += xj * gauss(j + t - k, sp);
  }
  return s;
}

double b_direct(double x, int lu, int lv, int t, double sp) {
  double s = 0.0;
  for (int j = 0; j < lu; ++j) {
    double xj = ipow(x, j);
    for (int k = 0; k < lv; ++k) s += xj * k * gauss(j + t - k, sp);
  }
  return s;
}

RleTables::RleTables(const RleTableConfig& config) : cfg_(config) {
  require(cfg_.levels >= 2, "lattice needs at least two levels");
  require(cfg_.sigma_prime > 0.0, "sigma' must be positive");
  require(cfg_.l_bound >= 1, "L_bound must be at least 1");
  require(cfg_.l_max >= cfg_.l_bound, "L_max must be at least L_bound");
  const int lb = cfg_.l_bound, lm = cfg_.l_max, nx = cfg_.levels + 1;
  const double sp = cfg_.sigma_prime;

  const int gmax = lb + lm + 2;
  std::vector<double> g(static_cast<std::size_t>(gmax) + 1);
  int g_last = 0;  // last d with g(d) > 0
  for (int d = 0; d <= gmax; ++d) {
    g[d] = gauss(d, sp);
    if (g[d] > 0.0) g_last = d;
  }
  s0_.assign(static_cast<std::size_t>(gmax) + 2, 0.0);
  s1_.assign(static_cast<std::size_t>(gmax) + 2, 0.0);
  for (int d = 0; d <= gmax; ++d) {
    s0_[d + 1] = s0_[d] + g[d];
    s1_[d + 1] = s1_[d] + d * g[d];
  }

  const auto tg = static_cast<std::size_t>(lm + 1);
  power_.resize(nx * tg);
  for (int xi = 0; xi < nx; ++xi)
    for (int m = 0; m <= lm; ++m) power_[tg_index(xi, m)] = ipow(x(xi), m);

  inv_power_.assign(static_cast<std::size_t>(nx) * (lb + 1), 0.0);
  for (int xi = 0; xi < nx; ++xi) {
    double lx = xi == 0 ? -std::numeric_limits<double>::infinity() : std::log(x(xi));
    for (int t = 1; t <= lb; ++t) {
      double e = -t * lx;
      inv_power_[static_cast<std::size_t>(xi) * (lb + 1) + t] =
          e > 709.0 ? std::numeric_limits<double>::infinity() : std::exp(e);
    }
  }

  const auto side = static_cast<std::size_t>(lb + 1);
  alpha_.assign(nx * side * side, 0.0);
  beta_.assign(nx * side * side, 0.0);
  for (int xi = 0; xi < nx; ++xi) {
    for (int lu = 1; lu <= lb; ++lu) {
      double xp = power(xi, lu - 1);
      for (int lv = 1; lv <= lb; ++lv) {
        double corner = xp * g[std::abs(lu - lv)];
        alpha_[ab_index(xi, lu, lv)] = alpha(xi, lu, lv - 1) + alpha(xi, lu - 1, lv) -
                                       alpha(xi, lu - 1, lv - 1) + corner;
        beta_[ab_index(xi, lu, lv)] = beta(xi, lu, lv - 1) + beta(xi, lu - 1, lv) -
                                      beta(xi, lu - 1, lv - 1) + corner * (lv - 1);
      }
    }
  }

  theta_.assign(nx * tg, 0.0);
  gamma_.assign(nx * tg, 0.0);
  for (int xi = 0; xi < nx; ++xi) {
    for (int l = 1; l <= lb; ++l) {
      theta_[tg_index(xi, l)] = alpha(xi, l, l);
      gamma_[tg_index(xi, l)] = beta(xi, l, l);
    }
    for (int l = lb + 1; l <= lm; ++l) {
      // New last row and column of the l x l block.
      double top = power(xi, l - 1);
      double th = top * g[0];
      double ga = top * (l - 1) * g[0];
      int reach = std::min(l - 1, g_last);
      for (int d = 1; d <= reach; ++d) {
        double side_pow = power(xi, l - 1 - d);
        th += (top + side_pow) * g[d];
        ga += (top * (l - 1 - d) + side_pow * (l - 1)) * g[d];
      }
      theta_[tg_index(xi, l)] = theta(xi, l - 1) + th;
      gamma_[tg_index(xi, l)] = gamma(xi, l - 1) + ga;
    }
  }

  if (cfg_.uniform) {
    const auto gs = static_cast<std::size_t>(lm + 2);
    for (auto& t : geo_) t.assign(nx * gs, 0.0);
    for (int xi = 0; xi < nx; ++xi) {
      std::size_t base = static_cast<std::size_t>(xi) * gs;
      for (int i = 0; i <= lm; ++i) {
        double xp = power(xi, i);
        geo_[0][base + i + 1] = geo_[0][base + i] + xp;
        geo_[1][base + i + 1] = geo_[1][base + i] + i * xp;
        geo_[2][base + i + 1] = geo_[2][base + i] + static_cast<double>(i) * i * xp;
      }
    }
  }
}

double RleTables::geo(int m, int xi, int len) const {
  if (!cfg_.uniform) fail(ErrorCode::invalid_argument, "uniform prefix tables were not built");
  if (len < 0 || len > cfg_.l_max + 1) fail(ErrorCode::out_of_range, "geometric prefix beyond table");
  return geo_[m][static_cast<std::size_t>(xi) * static_cast<std::size_t>(cfg_.l_max + 2) + len];
}

namespace {

void check_ab(const RleTables& t, long lu, long lv) {
  if (lu > t.config().l_bound || lv > t.config().l_bound)
    fail(ErrorCode::out_of_range, "alpha/beta table too small for this group pair");
}

double shift_factor(int xi, long t, const RleTables& tables) {
  double s = tables.inv_power(xi, static_cast<int>(t));
  if (!std::isfinite(s)) fail(ErrorCode::numerical_range, "x^-t overflows for this group pair");
  return s;
}

}  // namespace

namespace {

struct AB {
  double a, b;
};

// A and B for one group pair without bounds checks: the caller guarantees
// lu + t and lv - t fit the alpha/beta tables and x^-t is finite.
inline AB ab_unchecked(int xi, int lu, int lv, long t, const RleTables& tab) {
  // One row: only x^0 appears, a plain window of the kernel.
  if (lu == 1) {
    double w0 = tab.window0(t - lv + 1, t);
    return {w0, static_cast<double>(t) * w0 - tab.window1(t - lv + 1, t)};
  }
  if (t == 0) return {tab.alpha(xi, lu, lv), tab.beta(xi, lu, lv)};
  const int ti = static_cast<int>(t);
  if (t > 0) {
    double s = tab.inv_power(xi, ti);
    return {s * (tab.alpha(xi, lu + ti, lv) - tab.alpha(xi, ti, lv)),
            s * (tab.beta(xi, lu + ti, lv) - tab.beta(xi, ti, lv))};
  }
  double a = tab.alpha(xi, lu, lv - ti) - tab.alpha(xi, lu, -ti);
  return {a, tab.beta(xi, lu, lv - ti) - tab.beta(xi, lu, -ti) + static_cast<double>(t) * a};
}

AB ab_checked(int xi, int lu, int lv, long t, const RleTables& tables) {
  if (lu != 1 && t != 0) {
    if (t > 0) {
      check_ab(tables, lu + t, lv);
      shift_factor(xi, t, tables);
    } else {
      check_ab(tables, lu, lv - t);
    }
  } else if (lu != 1) {
    check_ab(tables, lu, lv);
  }
  return ab_unchecked(xi, lu, lv, t, tables);
}

}  // namespace

double a_term(int xi, int lu, int lv, long t, const RleTables& tables) {
  return ab_checked(xi, lu, lv, t, tables).a;
}

double b_term(int xi, int lu, int lv, long t, const RleTables& tables) {
  return ab_checked(xi, lu, lv, t, tables).b;
}

namespace {

struct GroupData {
  std::vector<long> start, len;
  std::vector<int> xi;
  std::vector<double> occ, pe, de, fo, fe;
  double pe_end = 0.0;  // P(e_0)
  long n = 0;
};

GroupData& prepare(const RleSequence& seq, const MiTables& mi, const RleTables& tables, bool need_power) {
  thread_local GroupData d;
  const std::size_t nr = seq.size();
  d.start.resize(nr);
  d.len.resize(nr);
  d.xi.resize(nr);
  d.occ.resize(nr);
  d.pe.resize(nr);
  d.de.resize(nr);
  d.fo.resize(nr);
  d.fe.resize(nr);
  double p = 1.0, de = 0.0;
  for (std::size_t u = 0; u < nr; ++u) {
    long len = static_cast<long>(seq.length(u));
    int xi = seq.x_index(u);
    std::size_t fi = mi.f.index(seq.log_odds(u));
    d.start[u] = static_cast<long>(seq.start(u));
    d.len[u] = len;
    d.xi[u] = xi;
    d.occ[u] = seq.occupancy(u);
    d.pe[u] = p;
    d.de[u] = de;
    d.fo[u] = mi.f.occ_at(fi);
    d.fe[u] = mi.f.emp_at(fi);
    p *= need_power ? tables.power(xi, static_cast<int>(len)) : ipow(tables.x(xi), static_cast<int>(len));
    de += static_cast<double>(len) * d.fe[u];
  }
  d.pe_end = p;
  d.n = static_cast<long>(seq.cells());
  return d;
}

void check_compatible(const RleSequence& seq, const MiTables& mi, const RleTables& tables) {
  require(seq.levels() == tables.config().levels, "RLE lattice does not match the tables");
  double sp = mi.sensor.sigma / seq.w0();
  require(std::abs(sp - tables.config().sigma_prime) <= 1e-9 * sp, "sigma/w0 does not match the tables");
}

template <class F>
MiBreakdown timed_eval(const EvalOptions& opt, F body) {
  MiBreakdown out;
  auto t0 = opt.timed ? std::chrono::steady_clock::now() : std::chrono::steady_clock::time_point{};
  out.mi = body();
  if (opt.timed) out.elapsed = std::chrono::steady_clock::now() - t0;
  return out;
}

}  // namespace

MiBreakdown fsmi_rle(const RleSequence& seq, const MiTables& mi, const RleTables& tables, EvalOptions opt) {
  check_compatible(seq, mi, tables);
  require(seq.max_length() <= static_cast<std::size_t>(tables.config().l_max), "group longer than L_max");
  return timed_eval(opt, [&] {
    auto& d = prepare(seq, mi, tables, true);
    const std::size_t nr = seq.size();
    double total = 0.0;
    for (std::size_t u = 0; u < nr; ++u) {
      double wu = d.pe[u] * d.occ[u];
      int lu = static_cast<int>(d.len[u]);
      for (std::size_t v = 0; v < nr; ++v) {
        auto ab = ab_checked(d.xi[u], lu, static_cast<int>(d.len[v]), d.start[u] - d.start[v], tables);
        total += wu * ((d.de[v] + d.fo[v]) * ab.a + d.fe[v] * ab.b);
      }
    }
    // Max-range return: a one-cell hit group just past the last cell.
    for (std::size_t v = 0; v < nr; ++v) {
      auto ab = ab_checked(0, 1, static_cast<int>(d.len[v]), d.n - d.start[v], tables);
      total += d.pe_end * ((d.de[v] + d.fo[v]) * ab.a + d.fe[v] * ab.b);
    }
    return total * inv_sqrt_2pi / tables.config().sigma_prime;
  });
}

namespace {

template <bool Checked>
double approx_rle_sum(const GroupData& d, long delta, const RleTables& tables) {
  auto ab = [&](int xi, long lu, long lv, long t) {
    if constexpr (Checked)
      return ab_checked(xi, static_cast<int>(lu), static_cast<int>(lv), t, tables);
    else
      return ab_unchecked(xi, static_cast<int>(lu), static_cast<int>(lv), t, tables);
  };
  const long nr = static_cast<long>(d.start.size());
  double total = 0.0;
  for (long u = 0; u < nr; ++u) {
    const long su = d.start[u], lu = d.len[u];
    const int xi = d.xi[u];
    const double wu = d.pe[u] * d.occ[u];
    // Same group.
    total += wu * ((d.de[u] + d.fo[u]) * tables.theta(xi, static_cast<int>(lu)) +
                   d.fe[u] * tables.gamma(xi, static_cast<int>(lu)));
    // Later groups v: only the tail of u and the head of v interact.
    for (long v = u + 1; v < nr && d.start[v] < su + lu + delta; ++v) {
      const auto tp = truncate_pair(su, lu, d.start[v], d.len[v], delta);
      const auto r = ab(xi, tp.lu, tp.lv, tp.su - tp.sv);
      const double w = wu * tables.power(xi, static_cast<int>(tp.su - su));
      total += w * ((d.de[v] + d.fo[v]) * r.a + d.fe[v] * r.b);
    }
    // Earlier groups v: the head of u and the tail of v.
    for (long v = u - 1; v >= 0 && su < d.start[v] + d.len[v] + delta; --v) {
      const long sv = d.start[v];
      const auto tp = truncate_pair(su, lu, sv, d.len[v], delta);
      const auto r = ab(xi, tp.lu, tp.lv, su - tp.sv);
      const double de = d.de[v] + static_cast<double>(tp.sv - sv) * d.fe[v];
      total += wu * ((de + d.fo[v]) * r.a + d.fe[v] * r.b);
    }
  }
  // Max-range return at position n.
  for (long v = nr - 1; v >= 0 && d.n < d.start[v] + d.len[v] + delta; --v) {
    const long sv = d.start[v];
    const auto tp = truncate_pair(d.n, 1, sv, d.len[v], delta);
    const auto r = ab(0, 1, tp.lv, d.n - tp.sv);
    const double de = d.de[v] + static_cast<double>(tp.sv - sv) * d.fe[v];
    total += d.pe_end * ((de + d.fo[v]) * r.a + d.fe[v] * r.b);
  }
  return total * inv_sqrt_2pi / tables.config().sigma_prime;
}

}  // namespace

MiBreakdown approx_fsmi_rle(const RleSequence& input, const MiTables& mi, int delta,
                            const RleTables& tables, EvalOptions opt) {
  require(delta >= 1, "truncation must be at least one cell");
  check_compatible(input, mi, tables);
  const auto l_max = static_cast<std::size_t>(tables.config().l_max);
  RleSequence split;
  const RleSequence* seqp = &input;
  if (input.max_length() > l_max) {
    split = input.split_long_runs(l_max);
    seqp = &split;
  }
  const RleSequence& seq = *seqp;
  // Truncated pairs satisfy L' + |t| <= 2 delta, so tables at least that wide
  // with a finite x^-(2 delta) need no per-pair checks.
  const int lb = tables.config().l_bound;
  const bool fits = lb >= 2 * delta && std::isfinite(tables.inv_power(1, 2 * delta));
  return timed_eval(opt, [&] {
    auto& d = prepare(seq, mi, tables, true);
    return fits ? approx_rle_sum<false>(d, delta, tables) : approx_rle_sum<true>(d, delta, tables);
  });
}

namespace {

// F = sum_j sum_k x^j [|j+t-k| <= h], G the same with a factor k, for
// j < lu, k < lv. For fixed j the k window is an interval whose ends move
// linearly in j, so the j range splits into at most three linear pieces.
void uniform_fg(int xi, long lu, long lv, long t, long h, const RleTables& tab, double& f, double& g) {
  f = 0.0;
  g = 0.0;
  long j_lo = std::max(0L, -t - h);
  long j_hi = std::min(lu - 1, lv - 1 - t + h);
  if (j_lo > j_hi) return;
  long b1 = h - t;           // from here on lo(j) = j + t - h
  long b2 = lv - 1 - t - h;  // up to here hi(j) = j + t + h
  long cuts[4] = {j_lo, j_hi + 1, std::clamp(b1, j_lo, j_hi + 1), std::clamp(b2 + 1, j_lo, j_hi + 1)};
  std::sort(cuts, cuts + 4);
  for (int i = 0; i < 3; ++i) {
    long p = cuts[i], q = cuts[i + 1] - 1;
    if (p > q) continue;
    long s_lo = p >= b1 ? 1 : 0;
    long s_hi = p <= b2 ? 1 : 0;
    long lo_p = s_lo ? p + t - h : 0;
    long hi_p = s_hi ? p + t + h : lv - 1;
    double c0 = static_cast<double>(hi_p - lo_p + 1);
    double c1 = static_cast<double>(s_hi - s_lo);
    double m0 = static_cast<double>(lo_p + hi_p);
    double m1 = static_cast<double>(s_lo + s_hi);
    int len = static_cast<int>(q - p + 1);
    double xp = tab.power(xi, static_cast<int>(p));
    double g0 = tab.geo(0, xi, len), g1 = tab.geo(1, xi, len), g2 = tab.geo(2, xi, len);
    f += xp * (c0 * g0 + c1 * g1);
    g += 0.5 * xp * (c0 * m0 * g0 + (c0 * m1 + c1 * m0) * g1 + c1 * m1 * g2);
  }
}

}  // namespace

MiBreakdown uniform_fsmi_rle(const RleSequence& input, const MiTables& mi, int h, const RleTables& tables,
                             EvalOptions opt) {
  require(h >= 0, "uniform half-width must be non-negative");
  require(input.levels() == tables.config().levels, "RLE lattice does not match the tables");
  const auto l_max = static_cast<std::size_t>(tables.config().l_max);
  RleSequence split;
  const RleSequence* seqp = &input;
  if (input.max_length() > l_max) {
    split = input.split_long_runs(l_max);
    seqp = &split;
  }
  const RleSequence& seq = *seqp;
  return timed_eval(opt, [&] {
    auto& d = prepare(seq, mi, tables, true);
    const long nr = static_cast<long>(seq.size());
    const long hl = h;
    double total = 0.0;
    for (long u = 0; u < nr; ++u) {
      const long su = d.start[u], lu = d.len[u];
      const double wu = d.pe[u] * d.occ[u];
      long v0 = u;
      while (v0 > 0 && d.start[v0 - 1] + d.len[v0 - 1] - 1 >= su - hl) --v0;
      for (long v = v0; v < nr && d.start[v] <= su + lu - 1 + hl; ++v) {
        double f, g;
        uniform_fg(d.xi[u], lu, d.len[v], su - d.start[v], hl, tables, f, g);
        total += wu * ((d.de[v] + d.fo[v]) * f + d.fe[v] * g);
      }
    }
    // Max-range return: the window covers the first min(n, h) cells.
    long reach = std::min(d.n, hl);
    double head = 0.0;
    for (long v = 0; v < nr && d.start[v] < reach; ++v) {
      double m = static_cast<double>(std::min(d.len[v], reach - d.start[v]));
      head += m * (d.de[v] + d.fo[v]) + d.fe[v] * m * (m - 1.0) * 0.5;
    }
    total += d.pe_end * head;
    return total / static_cast<double>(2 * h + 1);
  });
}

namespace {

// Phi(b) - Phi(a) for a <= b, from the tail that keeps precision.
double phi_diff(double a, double b) {
  constexpr double r = std::numbers::sqrt2;
  if (a >= 0.0) return 0.5 * (std::erfc(a / r) - std::erfc(b / r));
  if (b <= 0.0) return 0.5 * (std::erfc(-b / r) - std::erfc(-a / r));
  return 1.0 - 0.5 * std::erfc(b / r) - 0.5 * std::erfc(-a / r);
}

}  // namespace

double analytic_a_approx(double x, int lu, int lv, int t, double sp) {
  require(x > 0.0 && x < 1.0, "analytic approximation needs 0 < x < 1");
  require(sp > 0.0, "sigma' must be positive");
  require(lu >= 1 && lv >= 1, "group lengths must be positive");
  // Integral of x^j exp(-(j+t-k)^2 / 2 sp^2) over [-1/2, lu-1/2] x [-1/2, lv-1/2].
  // With d = j + t - k the j range at fixed d is [jlo(d), jhi(d)], so the
  // integral is (1/lambda) * int g(d) (x^jlo(d) - x^jhi(d)) dd. Each bound is
  // constant or linear in d, giving erfc terms without the large cancelling
  // corner terms of the direct antiderivative.
  const double lambda = -std::log(x);
  const double j0 = -0.5, j1 = lu - 0.5, k0 = -0.5, k1 = lv - 0.5;
  const double root = sp * std::sqrt(2.0 * std::numbers::pi);
  // int_a^b g(d) exp(-lambda (slope d + offset)) dd, slope 0 or 1.
  auto piece = [&](int slope, double offset, double a, double b) {
    double shift = slope * lambda * sp * sp;
    double pd = phi_diff((a + shift) / sp, (b + shift) / sp);
    if (pd <= 0.0) return 0.0;
    return root * std::exp(-lambda * offset + 0.5 * slope * lambda * shift + std::log(pd));
  };
  const double lo = j0 + t - k1, hi = j1 + t - k0;
  double cuts[4] = {lo, hi, std::clamp(j0 + t - k0, lo, hi), std::clamp(j1 + t - k1, lo, hi)};
  std::sort(cuts, cuts + 4);
  double total = 0.0;
  for (int i = 0; i < 3; ++i) {
    double a = cuts[i], b = cuts[i + 1];
    if (!(b > a)) continue;
    double m = 0.5 * (a + b);
    bool lo_linear = m - t + k0 > j0;
    bool hi_linear = m - t + k1 < j1;
    total += lo_linear ? piece(1, k0 - t, a, b) : piece(0, j0, a, b);
    total -= hi_linear ? piece(1, k1 - t, a, b) : piece(0, j1, a, b);
  }
  return total / lambda;
}

}  // namespace fsmi
