#include "fsmi/mi.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fsmi/error.hpp"

namespace fsmi {

namespace {

constexpr double inv_sqrt_2pi = 0.3989422804014327;

struct NoCount {
  void add(std::uint64_t) {}
  std::uint64_t value() const { return 0; }
};

struct Count {
  std::uint64_t n = 0;
  void add(std::uint64_t k) { n += k; }
  std::uint64_t value() const { return n; }
};

std::vector<double>& scratch(int slot, std::size_t size) {
  thread_local std::vector<double> bufs[4];
  auto& b = bufs[slot];
  b.assign(size, 0.0);
  return b;
}

template <class F>
MiBreakdown evaluate(const EvalOptions& opt, F body) {
  MiBreakdown out;
  auto t0 = opt.timed ? std::chrono::steady_clock::now() : std::chrono::steady_clock::time_point{};
  if (opt.count) {
    Count c;
    out.mi = body(c);
    out.multiplications = c.value();
  } else {
    NoCount c;
    out.mi = body(c);
  }
  if (opt.timed) out.elapsed = std::chrono::steady_clock::now() - t0;
  return out;
}

void require_beam(const BeamView& beam) {
  if (beam.empty()) fail(ErrorCode::invalid_argument, "beam has no cells");
}

// P(e_j) into pe[0..n], pe[0] = P(e_0).
template <class Counter>
void fill_pe(const BeamView& beam, std::vector<double>& pe, Counter& cnt) {
  const auto occ = beam.occupancies();
  double empty = 1.0;
  for (std::size_t c = 0; c < occ.size(); ++c) {
    double p = empty * occ[c];
    pe[c + 1] = p;
    empty -= p;
  }
  cnt.add(occ.size());
  pe[0] = empty;
}

// C values written to out[offset + c].
void fill_ck(const BeamView& beam, const FTable& f, std::vector<double>& out, std::size_t offset) {
  const auto lo = beam.log_odds();
  double q = 0.0;
  for (std::size_t c = 0; c < lo.size(); ++c) {
    std::size_t i = f.index(lo[c]);
    out[offset + c] = q + f.occ_at(i);
    q += f.emp_at(i);
  }
}

double hit_center(const BeamView& beam, std::size_t j) {
  return j == 0 ? beam.virtual_center() : beam.center(j - 1);
}

}  // namespace

BeamView::BeamView(std::span<const double> occupancies, std::span<const double> boundaries,
                   double clamp_eps) {
  require(!occupancies.empty(), "beam needs at least one cell");
  require(boundaries.size() == occupancies.size() + 1, "beam needs n+1 boundaries");
  for (std::size_t i = 0; i + 1 < boundaries.size(); ++i)
    require(boundaries[i + 1] > boundaries[i], "beam boundaries must be strictly increasing");
  std::size_t n = occupancies.size();
  occ_.resize(n);
  log_odds_.resize(n);
  for (std::size_t c = 0; c < n; ++c) {
    double o = std::clamp(occupancies[c], clamp_eps, 1.0 - clamp_eps);
    occ_[c] = o;
    log_odds_[c] = std::log(o / (1.0 - o));
  }
  bounds_.assign(boundaries.begin(), boundaries.end());
  mean_width_ = (bounds_.back() - bounds_.front()) / static_cast<double>(n);
  double w0 = width(0);
  constant_width_ = true;
  for (std::size_t c = 1; c < n; ++c)
    if (std::abs(width(c) - w0) > 1e-9 * w0) constant_width_ = false;
  uniform_interior_ = true;
  if (n > 2) {
    double w = width(1);
    for (std::size_t c = 2; c + 1 < n; ++c)
      if (std::abs(width(c) - w) > 1e-9 * w) uniform_interior_ = false;
    // The first and last cells may be partial; they are treated as full width.
    if (width(0) > w * (1.0 + 1e-9) || width(n - 1) > w * (1.0 + 1e-9)) uniform_interior_ = false;
  }
}

BeamView BeamView::uniform(std::span<const double> occupancies, double width, double clamp_eps) {
  require(width > 0.0, "cell width must be positive");
  std::vector<double> b(occupancies.size() + 1);
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = static_cast<double>(i) * width;
  return BeamView(occupancies, b, clamp_eps);
}

BeamView BeamView::from_ray(const RayTrace& ray, double clamp_eps) {
  return BeamView(ray.occupancies, ray.boundaries, clamp_eps);
}

HitDistribution compute_pe(const BeamView& beam) {
  require_beam(beam);
  HitDistribution h;
  h.p.resize(beam.size() + 1);
  NoCount c;
  fill_pe(beam, h.p, c);
  return h;
}

std::vector<double> compute_ck(const BeamView& beam, const FTable& table) {
  require_beam(beam);
  std::vector<double> c(beam.size());
  fill_ck(beam, table, c, 0);
  return c;
}

double smi_reference(const BeamView& beam, const SensorModel& sensor, double step,
                     SmiEvaluation evaluation) {
  require_beam(beam);
  require(step > 0.0, "integration step must be positive");
  const std::size_t n = beam.size();
  const double sigma = sensor.sigma;
  const double norm = inv_sqrt_2pi / sigma;
  const double end = beam.end();
  const auto b = beam.boundaries();
  const double z_max = end + beam.mean_width() + 6.0 * sigma;
  const auto samples = static_cast<std::size_t>(std::ceil(z_max / step));
  HitDistribution pe = compute_pe(beam);
  std::vector<double> mu(n + 1);
  for (std::size_t j = 0; j <= n; ++j) mu[j] = hit_center(beam, j);

  if (evaluation == SmiEvaluation::per_cell) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double r = beam.odds(i);
      double integral = 0.0;
      auto first = static_cast<std::size_t>(std::max(0.0, std::floor(b[i] / step - 0.5)));
      for (std::size_t k = first; k < samples; ++k) {
        double z = (static_cast<double>(k) + 0.5) * step;
        // Below the cell delta is 1 and f vanishes; past l_{n+1} nothing is read.
        if (z < b[i]) continue;
        if (z >= end) break;
        double delta = z < b[i + 1] ? sensor.delta_occ : sensor.delta_emp;
        double pz = 0.0;
        for (std::size_t j = 0; j <= n; ++j) {
          double u = (z - mu[j]) / sigma;
          pz += pe.p[j] * norm * std::exp(-0.5 * u * u);
        }
        integral += pz * f_value(delta, r);
      }
      total += integral * step;
    }
    return total;
  }

  // F(z) is constant inside each cell.
  std::vector<double> cell_f(n);
  for (std::size_t c = 0; c < n; ++c) {
    double acc = f_value(sensor.delta_occ, beam.odds(c));
    for (std::size_t i = 0; i < c; ++i) acc += f_value(sensor.delta_emp, beam.odds(i));
    cell_f[c] = acc;
  }
  // Hit centres in increasing order: cells, then the virtual cell.
  std::vector<double> centers(mu.begin() + 1, mu.end());
  std::vector<double> weights(pe.p.begin() + 1, pe.p.end());
  centers.push_back(mu[0]);
  weights.push_back(pe.p[0]);
  const double window = 10.0 * sigma;
  std::size_t lo = 0, hi = 0, cell = 0;
  double total = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    double z = (static_cast<double>(k) + 0.5) * step;
    if (z >= end) break;
    while (z >= b[cell + 1]) ++cell;
    while (lo < centers.size() && centers[lo] < z - window) ++lo;
    while (hi < centers.size() && centers[hi] <= z + window) ++hi;
    double pz = 0.0;
    for (std::size_t j = lo; j < hi; ++j) {
      double u = (z - centers[j]) / sigma;
      pz += weights[j] * std::exp(-0.5 * u * u);
    }
    total += pz * cell_f[cell];
  }
  return total * norm * step;
}

namespace {

template <class Counter>
double fsmi_impl(const BeamView& beam, const MiTables& t, Kernel kernel, std::size_t reach,
                 Counter& cnt) {
  const std::size_t n = beam.size();
  const auto b = beam.boundaries();
  const double sigma = t.sensor.sigma;
  auto& pe = scratch(0, n + 1);
  auto& ck = scratch(1, n);
  fill_pe(beam, pe, cnt);
  fill_ck(beam, t.f, ck, 0);

  double total = 0.0;
  for (std::size_t j = 0; j <= n; ++j) {
    // Position of the hit cell on the beam; the virtual cell sits after cell n-1.
    std::size_t p = j == 0 ? n : j - 1;
    std::size_t lo = p > reach ? p - reach : 0;
    std::size_t hi = std::min(n - 1, p + reach);
    double mu = hit_center(beam, j);
    double s = 0.0;
    if (kernel == Kernel::cdf) {
      double prev = t.phi.cdf_distance(b[lo] - mu);
      for (std::size_t c = lo; c <= hi; ++c) {
        double cur = t.phi.cdf_distance(b[c + 1] - mu);
        s += ck[c] * (cur - prev);
        prev = cur;
      }
    } else {
      for (std::size_t c = lo; c <= hi; ++c) {
        double u = (beam.center(c) - mu) / sigma;
        s += ck[c] * (beam.width(c) / sigma * inv_sqrt_2pi * std::exp(-0.5 * u * u));
      }
    }
    cnt.add(hi - lo + 2);
    total += pe[j] * s;
  }
  return total;
}

// Constant-width beams: G depends only on the offset d = |k - j|, so the
// window sum folds symmetric pairs, G_d (C_{j+d} + C_{j-d}).
template <class Counter>
double approx_fsmi_symmetric(const BeamView& beam, const MiTables& t, std::size_t reach,
                             Counter& cnt) {
  const std::size_t n = beam.size();
  const std::size_t d_max = std::min(reach, n);
  const double w = beam.width(0);
  double g[64];
  std::vector<double> g_heap;
  double* gd = g;
  if (d_max + 1 > 64) {
    g_heap.resize(d_max + 1);
    gd = g_heap.data();
  }
  for (std::size_t d = 0; d <= d_max; ++d) {
    double x = static_cast<double>(d);
    gd[d] = t.phi.cdf_distance((x + 0.5) * w) - t.phi.cdf_distance((x - 0.5) * w);
  }
  auto& buf = scratch(1, n + 1 + 2 * d_max);
  fill_ck(beam, t.f, buf, d_max);
  const double* cbuf = buf.data() + d_max;
  const auto occ = beam.occupancies();

  double empty = 1.0;
  double total = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    double p = empty * occ[c];
    empty -= p;
    double s = gd[0] * cbuf[c];
    for (std::size_t d = 1; d <= d_max; ++d) s += gd[d] * (cbuf[c + d] + cbuf[c - d]);
    total += p * s;
  }
  cnt.add(n * (d_max + 3));
  double s = gd[0] * cbuf[n];
  for (std::size_t d = 1; d <= d_max; ++d) s += gd[d] * (cbuf[n + d] + cbuf[n - d]);
  total += empty * s;
  cnt.add(d_max + 2);
  return total;
}

template <class Counter>
double uniform_impl(const BeamView& beam, const MiTables& t, std::size_t h, Counter& cnt) {
  const std::size_t n = beam.size();
  // Prefix sums of C padded with h + 1 leading zeros and h trailing copies of
  // the total, so every window [j - h, j + h] reads without clipping.
  auto& buf = scratch(1, n + 2 * h + 2);
  double* prefix = buf.data() + h + 1;
  const auto lo = beam.log_odds();
  const auto occ = beam.occupancies();
  double q = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t i = t.f.index(lo[c]);
    prefix[c + 1] = prefix[c] + (q + t.f.occ_at(i));
    q += t.f.emp_at(i);
  }
  for (std::size_t k = n + 1; k <= n + h; ++k) prefix[k] = prefix[n];
  double empty = 1.0;
  double total = 0.0;
  for (std::size_t j = 1; j <= n; ++j) {
    double o = occ[j - 1];
    double p = empty * o;
    empty *= 1.0 - o;
    total += p * (prefix[j + h] - prefix[static_cast<std::ptrdiff_t>(j) - 1 - static_cast<std::ptrdiff_t>(h)]);
  }
  std::size_t top = std::min(n, h);
  total += empty * prefix[top];
  cnt.add(3 * n + 2);
  return total * (1.0 / static_cast<double>(2 * h + 1));
}

double n2(double d, double sigma) {
  // Normal density with variance 2 sigma^2.
  double v = 2.0 * sigma * sigma;
  return std::exp(-d * d / (2.0 * v)) / std::sqrt(2.0 * std::numbers::pi * v);
}

template <class Counter>
double csqmi_general(const BeamView& beam, const SensorModel& sensor, std::size_t reach, Counter& cnt) {
  const std::size_t n = beam.size();
  auto& pe = scratch(0, n + 1);
  auto& w = scratch(1, n + 1);
  fill_pe(beam, pe, cnt);
  const auto occ = beam.occupancies();
  // suffix = product over cells after j of o^2 + (1-o)^2.
  double suffix = 1.0;
  for (std::size_t j = n; j >= 1; --j) {
    w[j] = pe[j] * pe[j] * suffix;
    double o = occ[j - 1];
    suffix *= o * o + (1.0 - o) * (1.0 - o);
  }
  w[0] = pe[0] * pe[0];
  cnt.add(5 * n + 2);
  const double all = suffix;

  // Positions: cells at 0..n-1, the virtual cell at n.
  auto mu_at = [&](std::size_t p) { return p == n ? beam.virtual_center() : beam.center(p); };
  auto idx = [&](std::size_t p) { return p == n ? std::size_t{0} : p + 1; };
  double sum_w = 0.0, sum_b = 0.0, sum_c = 0.0;
  for (std::size_t p = 0; p <= n; ++p) {
    sum_w += w[idx(p)];
    std::size_t lo = p > reach ? p - reach : 0;
    std::size_t hi = std::min(n, p + reach);
    double sp = 0.0, sw = 0.0;
    for (std::size_t l = lo; l <= hi; ++l) {
      double g = n2(mu_at(l) - mu_at(p), sensor.sigma);
      sp += pe[idx(l)] * g;
      sw += w[idx(l)] * g;
    }
    cnt.add(2 * (hi - lo + 1) + 2);
    sum_b += pe[idx(p)] * sp;
    sum_c += pe[idx(p)] * sw;
  }
  cnt.add(2);
  double a = sum_w * n2(0.0, sensor.sigma);
  double bterm = all * sum_b;
  return std::log(a) + std::log(bterm) - 2.0 * std::log(sum_c);
}

template <class Counter>
double csqmi_symmetric(const BeamView& beam, const SensorModel& sensor, std::size_t reach,
                       Counter& cnt) {
  const std::size_t n = beam.size();
  const std::size_t d_max = std::min(reach, n);
  const double w0 = beam.width(0);
  double g[64];
  std::vector<double> g_heap;
  double* gd = g;
  if (d_max + 1 > 64) {
    g_heap.resize(d_max + 1);
    gd = g_heap.data();
  }
  for (std::size_t d = 0; d <= d_max; ++d) gd[d] = n2(static_cast<double>(d) * w0, sensor.sigma);

  // Padded by d_max zeros on both sides; position n holds the virtual cell.
  auto& pbuf = scratch(0, n + 1 + 2 * d_max);
  auto& wbuf = scratch(1, n + 1 + 2 * d_max);
  double* pe = pbuf.data() + d_max;
  double* w = wbuf.data() + d_max;
  const auto occ = beam.occupancies();
  auto& sbuf = scratch(2, n);
  double empty = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    double o = occ[c];
    double p = empty * o;
    pe[c] = p;
    empty -= p;
    double q = o * (1.0 - o);
    sbuf[c] = 1.0 - (q + q);  // o^2 + (1-o)^2
  }
  pe[n] = empty;
  w[n] = empty * empty;
  double suffix = 1.0;
  double sum_w = w[n];
  for (std::size_t c = n; c-- > 0;) {
    w[c] = pe[c] * pe[c] * suffix;
    suffix *= sbuf[c];
    sum_w += w[c];
  }
  cnt.add(5 * n + 1);

  double sum_b = 0.0, sum_c = 0.0;
  for (std::size_t p = 0; p <= n; ++p) {
    double sp = gd[0] * pe[p];
    double sw = gd[0] * w[p];
    for (std::size_t d = 1; d <= d_max; ++d) {
      sp += gd[d] * (pe[p + d] + pe[p - d]);
      sw += gd[d] * (w[p + d] + w[p - d]);
    }
    sum_b += pe[p] * sp;
    sum_c += pe[p] * sw;
  }
  cnt.add((n + 1) * (2 * d_max + 4) + 2);
  double a = sum_w * gd[0];
  double bterm = suffix * sum_b;
  return std::log(a) + std::log(bterm) - 2.0 * std::log(sum_c);
}

}  // namespace

MiBreakdown fsmi(const BeamView& beam, const MiTables& tables, EvalOptions opt) {
  require_beam(beam);
  require(tables.sensor.noise == NoiseKind::gaussian || tables.sensor.noise == NoiseKind::truncated_gaussian,
          "fsmi needs Gaussian noise");
  return evaluate(opt, [&](auto& cnt) { return fsmi_impl(beam, tables, opt.kernel, beam.size(), cnt); });
}

MiBreakdown approx_fsmi(const BeamView& beam, const MiTables& tables, int delta, EvalOptions opt) {
  require_beam(beam);
  require(delta >= 1, "truncation must be at least one cell");
  auto reach = static_cast<std::size_t>(delta);
  if (opt.kernel == Kernel::cdf && beam.constant_width())
    return evaluate(opt, [&](auto& cnt) { return approx_fsmi_symmetric(beam, tables, reach, cnt); });
  return evaluate(opt, [&](auto& cnt) { return fsmi_impl(beam, tables, opt.kernel, reach, cnt); });
}

MiBreakdown uniform_fsmi(const BeamView& beam, const MiTables& tables, int h, EvalOptions opt) {
  require_beam(beam);
  require(h >= 0, "uniform half-width must be non-negative");
  if (!beam.uniform_interior()) fail(ErrorCode::invalid_argument, "uniform_fsmi needs constant cell width");
  return evaluate(opt, [&](auto& cnt) { return uniform_impl(beam, tables, static_cast<std::size_t>(h), cnt); });
}

MiBreakdown csqmi_exact(const BeamView& beam, const SensorModel& sensor, EvalOptions opt) {
  require_beam(beam);
  return evaluate(opt, [&](auto& cnt) { return csqmi_general(beam, sensor, beam.size(), cnt); });
}

MiBreakdown csqmi_approx(const BeamView& beam, const SensorModel& sensor, int delta, EvalOptions opt) {
  require_beam(beam);
  require(delta >= 1, "truncation must be at least one cell");
  auto reach = static_cast<std::size_t>(delta);
  if (beam.constant_width())
    return evaluate(opt, [&](auto& cnt) { return csqmi_symmetric(beam, sensor, reach, cnt); });
  return evaluate(opt, [&](auto& cnt) { return csqmi_general(beam, sensor, reach, cnt); });
}

std::uint64_t count_multiplications(CountedOp op, const BeamView& beam, const MiTables& tables, int delta) {
  if (beam.empty()) return 0;
  EvalOptions opt;
  opt.count = true;
  if (op == CountedOp::approx_fsmi) return approx_fsmi(beam, tables, delta, opt).multiplications;
  return csqmi_approx(beam, tables.sensor, delta, opt).multiplications;
}

}  // namespace fsmi
