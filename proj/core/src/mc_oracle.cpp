#include "spherehit/mc_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "series_terms.hpp"
#include "spherehit/errors.hpp"

namespace spherehit::mc {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53;
constexpr std::uint32_t kMul1 = 0xCD9E8D57;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85;
// Steps grow until a crossing within one step is a kSafety-sigma event.
constexpr double kSafety = 5.0;

struct PathOutcome {
  double time = -1.0;  // < 0: censored
  std::vector<double> pos;
};

double norm(const std::vector<double>& x) {
  double s = 0.0;
  for (double c : x) s += c * c;
  return std::sqrt(s);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Fraction of the step [x, y] at which the path is taken to reach the sphere,
// or -1. A chord through the sphere counts as a crossing at its first
// intersection. Otherwise, outside the ball, the bridge is tested against the
// plane tangent to the sphere at the point nearest the chord, and inside
// against the radial distances of the end points.
double crossing(const std::vector<double>& x, const std::vector<double>& y, double dist,
                double next, double r, double h, bool bridge, Philox& rng) {
  std::vector<double> w(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) w[i] = y[i] - x[i];
  const double ww = dot(w, w);
  const double xw = dot(x, w);
  const double xx = dot(x, x);
  if (dist < 0.0 || ww == 0.0) {
    if (next >= 0.0 && ww > 0.0) return (-xw + std::sqrt(std::max(xw * xw - ww * (xx - r * r), 0.0))) / ww;
    if (bridge && next < 0.0 && rng.uniform() < std::exp(-2.0 * dist * next / h)) return 0.5;
    return -1.0;
  }
  const double s = std::clamp(-xw / ww, 0.0, 1.0);
  const double m2 = xx + 2.0 * s * xw + s * s * ww;
  if (m2 <= r * r) return (-xw - std::sqrt(std::max(xw * xw - ww * (xx - r * r), 0.0))) / ww;
  if (!bridge) return -1.0;
  const double m = std::sqrt(m2);
  // distances of x and y to the plane <z, p/m> = r, p = x + s w
  const double px = (xx + s * xw) / m - r;
  const double py = (xx + (1.0 + s) * xw + s * ww) / m - r;
  return rng.uniform() < std::exp(-2.0 * px * py / h) ? s : -1.0;
}

PathOutcome run_path(const Geometry& geom, const McRun& run, std::uint64_t index) {
  Philox rng(run.seed(), index);
  const std::size_t d = static_cast<std::size_t>(geom.dim());
  const double r = geom.radius();
  const double vn = geom.drift_norm();
  const std::vector<double>& v = geom.drift();
  const double h_max = run.t_max() / 100.0;
  std::vector<double> x = geom.start();
  std::vector<double> y(d);
  double t = 0.0;
  double dist = norm(x) - r;
  PathOutcome out;
  while (t < run.t_max()) {
    const double ad = std::abs(dist);
    double h = std::clamp(ad * ad / (kSafety * kSafety), run.dt(), h_max);
    if (vn > 0.0) h = std::min(h, std::max(run.dt(), ad / (kSafety * vn)));
    h = std::min(h, run.t_max() - t);
    const double sh = std::sqrt(h);
    for (std::size_t i = 0; i < d; ++i) y[i] = x[i] + v[i] * h + sh * rng.normal();
    const double next = norm(y) - r;
    const double frac = crossing(x, y, dist, next, r, h, run.bridge_correction(), rng);
    if (frac >= 0.0) {
      out.time = t + frac * h;
      out.pos.resize(d);
      for (std::size_t i = 0; i < d; ++i) out.pos[i] = x[i] + frac * (y[i] - x[i]);
      const double scale = r / norm(out.pos);
      for (double& c : out.pos) c *= scale;
      return out;
    }
    x.swap(y);
    dist = next;
    t += h;
  }
  return out;
}

Estimate binomial(std::int64_t k, std::int64_t n) {
  const double p = static_cast<double>(k) / static_cast<double>(n);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n)), 0.0, false};
}

void flag_censoring(Estimate& e, const McResult& res) {
  const double frac = static_cast<double>(res.censored()) / static_cast<double>(res.n_paths);
  e.censoring_warning = frac > 10.0 * e.std_error;
}

double kolmogorov_q(double lam) {
  if (lam < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lam * lam);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace

McRun::McRun(std::uint64_t seed, std::int64_t n_paths, double dt, double t_max,
             bool bridge_correction)
    : seed_(seed), n_paths_(n_paths), dt_(dt), t_max_(t_max), bridge_(bridge_correction) {
  if (n_paths < 1) throw DomainError("n_paths must be at least 1");
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw DomainError("t_max must be positive");
  if (!(dt > 0.0) || !(dt <= t_max / 100.0)) throw DomainError("need 0 < dt <= t_max / 100");
}

Philox::Philox(std::uint64_t seed, std::uint64_t stream) noexcept
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      stream_(stream) {}

void Philox::refill() noexcept {
  std::uint32_t c[4] = {static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                        static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
  std::uint32_t k0 = key_[0];
  std::uint32_t k1 = key_[1];
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    c[0] = hi1 ^ c[1] ^ k0;
    c[1] = lo1;
    c[2] = hi0 ^ c[3] ^ k1;
    c[3] = lo0;
    k0 += kWeyl0;
    k1 += kWeyl1;
  }
  std::copy(c, c + 4, out_);
  ++block_;
  used_ = 0;
}

double Philox::uniform() noexcept {
  if (used_ > 2) refill();
  const std::uint64_t bits =
      (static_cast<std::uint64_t>(out_[used_]) << 32) | out_[used_ + 1];
  used_ += 2;
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

double Philox::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double rad = std::sqrt(-2.0 * std::log(uniform()));
  const double ang = 2.0 * std::numbers::pi * uniform();
  spare_ = rad * std::sin(ang);
  has_spare_ = true;
  return rad * std::cos(ang);
}

McResult simulate(const Geometry& geom, const McRun& run, unsigned threads) {
  if (geom.on_sphere()) throw DegenerateGeometry("start on the sphere: sigma is identically 0");
  const auto n = static_cast<std::size_t>(run.n_paths());
  std::vector<PathOutcome> paths(n);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  auto work = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) paths[i] = run_path(geom, run, i);
  };
  if (threads <= 1) {
    work(0, n);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (std::size_t lo = 0; lo < n; lo += chunk) pool.emplace_back(work, lo, std::min(n, lo + chunk));
  }

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < n; ++i) {
    if (paths[i].time >= 0.0) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return paths[a].time < paths[b].time; });
  McResult res;
  res.n_paths = run.n_paths();
  res.hit_count = static_cast<std::int64_t>(order.size());
  res.t_max = run.t_max();
  res.radius = geom.radius();
  res.start = geom.start();
  res.drift = geom.drift();
  res.hit_times.reserve(order.size());
  res.hit_positions.reserve(order.size());
  for (std::size_t i : order) {
    res.hit_times.push_back(paths[i].time);
    res.hit_positions.push_back(std::move(paths[i].pos));
  }
  res.hit_probability = binomial(res.hit_count, res.n_paths);
  res.histogram = freedman_diaconis(res.hit_times);
  return res;
}

Estimate empirical_tail(const McResult& res, double t) {
  if (!(t >= 0.0) || !(t < res.t_max)) throw DomainError("empirical_tail needs 0 <= t < t_max");
  const auto later = res.hit_times.end() -
                     std::upper_bound(res.hit_times.begin(), res.hit_times.end(), t);
  Estimate e = binomial(later, res.n_paths);
  flag_censoring(e, res);
  return e;
}

Estimate empirical_joint_lt(const McResult& res, double lam, const Geometry& geom) {
  if (!(lam > 0.0)) throw DomainError("lam must be positive");
  if (!geom.has_drift()) throw DomainError("empirical_joint_lt needs a nonzero drift");
  if (geom.start() != res.start || geom.radius() != res.radius) {
    throw DomainError("empirical_joint_lt: geometry does not match the run");
  }
  const std::vector<double>& v = geom.drift();
  const std::vector<double>& u = res.drift;
  const std::vector<double>& x = res.start;
  double uu = 0.0;
  for (double c : u) uu += c * c;
  detail::NeumaierSum sum;
  detail::NeumaierSum sq;
  for (std::size_t i = 0; i < res.hit_times.size(); ++i) {
    const std::vector<double>& p = res.hit_positions[i];
    const double tau = res.hit_times[i];
    double logw = -lam * tau + 0.5 * uu * tau;
    for (std::size_t k = 0; k < p.size(); ++k) logw += v[k] * p[k] - u[k] * (p[k] - x[k]);
    const double w = std::exp(logw);
    sum.add(w);
    sq.add(w * w);
  }
  const double n = static_cast<double>(res.n_paths);
  const double mean = sum.value() / n;
  const double var = std::max(sq.value() / n - mean * mean, 0.0);
  Estimate e{mean, std::sqrt(var / n), 0.0, false};
  if (uu == 0.0) {
    // censored hits still pay e^{<v,B> - lam sigma} <= e^{|v|r - lam t_max}
    e.bias_bound = std::exp(geom.drift_norm() * res.radius - lam * res.t_max);
  }
  flag_censoring(e, res);
  return e;
}

Estimate empirical_density(const McResult& res, double t0, double t1) {
  if (!(t0 >= 0.0) || !(t1 > t0) || !(t1 <= res.t_max)) {
    throw DomainError("empirical_density needs 0 <= t0 < t1 <= t_max");
  }
  const auto lo = std::lower_bound(res.hit_times.begin(), res.hit_times.end(), t0);
  const auto hi = std::lower_bound(res.hit_times.begin(), res.hit_times.end(), t1);
  Estimate e = binomial(hi - lo, res.n_paths);
  e.value /= (t1 - t0);
  e.std_error /= (t1 - t0);
  return e;
}

double position_cosine_cdf(double start_norm, double radius, double u) {
  if (!(start_norm > 0.0) || !(radius > 0.0) || start_norm == radius) {
    throw DomainError("position_cosine_cdf needs distinct positive start and radius");
  }
  if (u <= -1.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double a = start_norm;
  const double r = radius;
  // density in u proportional to |x - p|^{-3}, |x - p|^2 = a^2 + r^2 - 2 a r u
  const double lead = std::abs(a * a - r * r) / (2.0 * std::min(a, r));
  return lead * (1.0 / std::sqrt(a * a + r * r - 2.0 * a * r * u) - 1.0 / (a + r));
}

KsResult position_ks_test(const McResult& res) {
  if (res.start.size() != 3) throw DomainError("position_ks_test is implemented for d = 3");
  for (double c : res.drift) {
    if (c != 0.0) throw DomainError("position_ks_test needs a driftless run");
  }
  const double a = norm(res.start);
  std::vector<double> u;
  u.reserve(res.hit_positions.size());
  for (const auto& p : res.hit_positions) {
    double dot = 0.0;
    for (std::size_t k = 0; k < 3; ++k) dot += res.start[k] * p[k];
    u.push_back(std::clamp(dot / (a * res.radius), -1.0, 1.0));
  }
  std::sort(u.begin(), u.end());
  KsResult ks;
  ks.n = static_cast<std::int64_t>(u.size());
  if (u.empty()) return ks;
  const double m = static_cast<double>(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double f = position_cosine_cdf(a, res.radius, u[i]);
    ks.statistic = std::max({ks.statistic, (i + 1) / m - f, f - i / m});
  }
  const double sn = std::sqrt(m);
  ks.p_value = kolmogorov_q((sn + 0.12 + 0.11 / sn) * ks.statistic);
  return ks;
}

Histogram freedman_diaconis(const std::vector<double>& sorted) {
  Histogram h;
  if (sorted.empty()) return h;
  const double lo = sorted.front();
  const double hi = sorted.back();
  const std::size_t n = sorted.size();
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(n - 1);
    const auto i = static_cast<std::size_t>(pos);
    const double f = pos - static_cast<double>(i);
    return i + 1 < n ? sorted[i] * (1.0 - f) + sorted[i + 1] * f : sorted[i];
  };
  const double width = 2.0 * (quantile(0.75) - quantile(0.25)) / std::cbrt(static_cast<double>(n));
  std::size_t bins = 1;
  if (width > 0.0 && hi > lo) {
    bins = static_cast<std::size_t>(std::clamp(std::ceil((hi - lo) / width), 1.0, 10000.0));
  }
  const double step = hi > lo ? (hi - lo) / static_cast<double>(bins) : 1.0;
  h.edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) h.edges[i] = lo + step * static_cast<double>(i);
  h.edges.back() = hi > lo ? hi : lo + 1.0;
  h.counts.assign(bins, 0);
  for (double t : sorted) {
    auto k = static_cast<std::size_t>((t - lo) / step);
    h.counts[std::min(k, bins - 1)] += 1;
  }
  return h;
}

}  // namespace spherehit::mc
