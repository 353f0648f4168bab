#include "spherehit/laplace_inversion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "spherehit/errors.hpp"

namespace spherehit {

namespace {

using cd = std::complex<double>;

constexpr int kTalbotStep = 8;
constexpr int kTalbotMaxNodes = 2048;
constexpr int kCotangentMaxNodes = 96;
constexpr int kCotangentMaxHint = 32;
constexpr int kTalbotPatience = 3;

// max over components of err / allowed; <= 1 means every component passes.
double excess(const std::vector<double>& v, const std::vector<double>& err, double rel,
              std::span<const double> abs_tol) {
  double worst = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double a = abs_tol.empty() ? 0.0 : abs_tol[k];
    const double allowed = std::max(rel * std::abs(v[k]), a);
    if (err[k] == 0.0) continue;
    worst = std::max(worst, allowed > 0.0 ? err[k] / allowed : std::numeric_limits<double>::infinity());
    if (std::isnan(err[k])) return std::numeric_limits<double>::infinity();
  }
  return worst;
}

bool within(const std::vector<double>& v, const std::vector<double>& err, double rel,
            std::span<const double> abs_tol) {
  return excess(v, err, rel, abs_tol) <= 1.0;
}

// Fixed Talbot contour s(theta) = r theta (cot theta + i), r = 2M/(5t).
std::vector<double> talbot(const VectorTransform& f, std::size_t n, double t, int m) {
  std::vector<double> acc(n, 0.0);
  std::vector<cd> buf(n);
  const double r = 2.0 * m / (5.0 * t);
  {
    const cd ls = f(cd(r, 0.0), buf);
    const cd w = 0.5 * std::exp(r * t + ls);
    for (std::size_t j = 0; j < n; ++j) acc[j] += (w * buf[j]).real();
  }
  for (int k = 1; k < m; ++k) {
    const double th = k * std::numbers::pi / m;
    const double cot = std::cos(th) / std::sin(th);
    const cd s(r * th * cot, r * th);
    const double sigma = th + (th * cot - 1.0) * cot;
    const cd ls = f(s, buf);
    const cd w = std::exp(t * s + ls) * cd(1.0, sigma);
    for (std::size_t j = 0; j < n; ++j) acc[j] += (w * buf[j]).real();
  }
  for (double& a : acc) a *= r / m;
  return acc;
}

// Optimized cotangent contour
//   z(theta) = (N/t)(-0.6122 + 0.5017 theta cot(0.6407 theta) + 0.2645 i theta),
// midpoint rule on (-pi, pi); error about 3.89^{-N} and only e^{0.17 N}
// roundoff amplification, but it needs transforms that decay off the axis
// faster than e^{-zt} grows, so small t with a large gap goes to talbot().
std::vector<double> cotangent(const VectorTransform& f, std::size_t n, double t, int m) {
  m -= m % 2;
  std::vector<double> acc(n, 0.0);
  std::vector<cd> buf(n);
  const double scale = m / t;
  for (int k = 0; k < m / 2; ++k) {
    const double th = (2 * k + 1) * std::numbers::pi / m;
    const double c = 0.6407 * th;
    const double cot = std::cos(c) / std::sin(c);
    const cd z = scale * cd(-0.6122 + 0.5017 * th * cot, 0.2645 * th);
    const cd dz = scale * cd(0.5017 * cot - 0.5017 * c / (std::sin(c) * std::sin(c)), 0.2645);
    const cd ls = f(z, buf);
    const cd w = std::exp(z * t + ls) * dz;
    for (std::size_t j = 0; j < n; ++j) acc[j] += (w * buf[j]).imag();
  }
  for (double& a : acc) a *= 2.0 / m;
  return acc;
}

// Stehfest weights V_k, k = 1..n (n even).
std::vector<double> stehfest_weights(int n) {
  std::vector<double> v(static_cast<std::size_t>(n) + 1, 0.0);
  const int h = n / 2;
  auto fact = [](int k) { return std::tgamma(k + 1.0); };
  for (int k = 1; k <= n; ++k) {
    double s = 0.0;
    for (int j = (k + 1) / 2; j <= std::min(k, h); ++j) {
      s += std::pow(j, h) * fact(2 * j) /
           (fact(h - j) * fact(j) * fact(j - 1) * fact(k - j) * fact(2 * j - k));
    }
    v[static_cast<std::size_t>(k)] = ((k + h) % 2 == 0 ? 1.0 : -1.0) * s;
  }
  return v;
}

std::vector<double> gaver_stehfest(const VectorTransform& f, std::size_t n, double t, int m) {
  const std::vector<double> v = stehfest_weights(m);
  std::vector<double> acc(n, 0.0);
  std::vector<cd> buf(n);
  const double c = std::numbers::ln2 / t;
  for (int k = 1; k <= m; ++k) {
    const cd ls = f(cd(k * c, 0.0), buf);
    const double w = v[static_cast<std::size_t>(k)] * std::exp(ls.real());
    for (std::size_t j = 0; j < n; ++j) acc[j] += w * buf[j].real();
  }
  for (double& a : acc) a *= c;
  return acc;
}

// de Hoog, Knight and Stokes: quotient-difference acceleration of the
// Fourier series on the Bromwich line, period 2T with T = 2t.
std::vector<double> de_hoog(const VectorTransform& f, std::size_t n, double t, int m) {
  constexpr double tol = 1e-16;
  const double big_t = 2.0 * t;
  const double gamma = -std::log(tol) / (2.0 * big_t);
  const int na = 2 * m + 1;
  std::vector<std::vector<cd>> a(n, std::vector<cd>(static_cast<std::size_t>(na)));
  std::vector<cd> buf(n);
  double ref_scale = 0.0;
  for (int k = 0; k < na; ++k) {
    const cd s(gamma, k * std::numbers::pi / big_t);
    const cd ls = f(s, buf);
    if (k == 0) ref_scale = ls.real();
    const cd w = std::exp(ls - ref_scale);
    for (std::size_t j = 0; j < n; ++j) a[j][static_cast<std::size_t>(k)] = w * buf[j];
  }
  const cd z = std::exp(cd(0.0, std::numbers::pi * t / big_t));
  std::vector<double> out(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<cd>& aj = a[j];
    aj[0] *= 0.5;
    // e[i][r], q[i][r] for r = 0..m
    std::vector<std::vector<cd>> e(static_cast<std::size_t>(na), std::vector<cd>(m + 1));
    std::vector<std::vector<cd>> q(static_cast<std::size_t>(na), std::vector<cd>(m + 1));
    for (int i = 0; i < 2 * m; ++i) q[i][1] = aj[i + 1] / aj[i];
    for (int r = 1; r <= m; ++r) {
      for (int i = 0; i <= 2 * (m - r); ++i) e[i][r] = q[i + 1][r] - q[i][r] + e[i + 1][r - 1];
      if (r < m) {
        for (int i = 0; i <= 2 * (m - r) - 1; ++i) q[i][r + 1] = q[i + 1][r] * e[i + 1][r] / e[i][r];
      }
    }
    std::vector<cd> d(static_cast<std::size_t>(na));
    d[0] = aj[0];
    for (int r = 1; r <= m; ++r) {
      d[2 * r - 1] = -q[0][r];
      d[2 * r] = -e[0][r];
    }
    std::vector<cd> big_a(static_cast<std::size_t>(na) + 1), big_b(static_cast<std::size_t>(na) + 1);
    // index shift by one: big_a[i + 1] holds A_i, big_a[0] holds A_{-1}
    big_a[0] = 0.0;
    big_a[1] = d[0];
    big_b[0] = 1.0;
    big_b[1] = 1.0;
    for (int i = 1; i < na - 1; ++i) {
      big_a[i + 1] = big_a[i] + d[i] * z * big_a[i - 1];
      big_b[i + 1] = big_b[i] + d[i] * z * big_b[i - 1];
    }
    const cd h = 0.5 * (1.0 + (d[2 * m - 1] - d[2 * m]) * z);
    const cd rz = -h * (1.0 - std::sqrt(1.0 + d[2 * m] * z / (h * h)));
    const cd an = big_a[na - 1] + rz * big_a[na - 2];
    const cd bn = big_b[na - 1] + rz * big_b[na - 2];
    out[j] = std::exp(gamma * t + ref_scale) / big_t * (an / bn).real();
  }
  return out;
}

std::vector<double> abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> d(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) d[k] = std::abs(a[k] - b[k]);
  return d;
}

using Rule = std::vector<double> (*)(const VectorTransform&, std::size_t, double, int);

// Runs rule at m, m + 8, ... Truncation error falls geometrically in m while
// roundoff grows exponentially; stops at the first agreement, or once the
// differences have grown for kTalbotPatience consecutive steps, and returns
// the estimate with the smallest error.
InversionResult ladder(Rule rule, const VectorTransform& f, std::size_t n, double t, int m,
                       int max_nodes, double rel, std::span<const double> abs_tol) {
  InversionResult res;
  m = std::clamp(m, 8, max_nodes - kTalbotStep);
  std::vector<double> prev = rule(f, n, t, m);
  double best_score = std::numeric_limits<double>::infinity();
  double last_score = best_score;
  int rising = 0;
  while (true) {
    const int next = m + kTalbotStep;
    std::vector<double> cur = rule(f, n, t, next);
    std::vector<double> err = abs_diff(cur, prev);
    const double score = excess(cur, err, rel, abs_tol);
    if (score < best_score || res.values.empty()) {
      best_score = score;
      res.values = cur;
      res.errors = err;
      res.nodes_used = next;
    }
    if (score <= 1.0) {
      res.converged = true;
      break;
    }
    rising = score > last_score ? rising + 1 : 0;
    last_score = score;
    if (rising >= kTalbotPatience || next + kTalbotStep > max_nodes) break;
    prev = std::move(cur);
    // classic Talbot may need hundreds of nodes at small t; grow faster there
    m = next >= 64 ? next + next / 4 - kTalbotStep : next;
  }
  return res;
}

}  // namespace

InversionControl::InversionControl(InversionMethod method, int nodes, double target_rel_err)
    : method_(method), nodes_(nodes), target_rel_err_(target_rel_err) {
  if (!(target_rel_err >= 1e-10) || !std::isfinite(target_rel_err)) {
    throw DomainError("inversion target_rel_err must be finite and at least 1e-10");
  }
  switch (method) {
    case InversionMethod::talbot_fixed:
      if (nodes < 8 || nodes > kTalbotMaxNodes) throw DomainError("talbot nodes must be in [8, 2048]");
      break;
    case InversionMethod::gaver_stehfest:
      if (nodes < 4 || nodes > 20 || nodes % 2 != 0) {
        throw DomainError("gaver_stehfest nodes must be even and in [4, 20]");
      }
      break;
    case InversionMethod::de_hoog:
      if (nodes < 4 || nodes > 64) throw DomainError("de_hoog nodes must be in [4, 64]");
      break;
  }
}

InversionResult invert(const VectorTransform& f, std::size_t n, double t,
                       const InversionControl& ctrl, std::span<const double> abs_tol,
                       int min_nodes) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("inversion time must be positive");
  if (!abs_tol.empty() && abs_tol.size() != n) {
    throw DomainError("abs_tol must be empty or have one entry per component");
  }
  const double rel = ctrl.target_rel_err();
  InversionResult res;
  switch (ctrl.method()) {
    case InversionMethod::talbot_fixed: {
      if (min_nodes <= kCotangentMaxHint) {
        res = ladder(cotangent, f, n, t, ctrl.nodes(), kCotangentMaxNodes, rel, abs_tol);
        if (res.converged) break;
      }
      InversionResult classic = ladder(talbot, f, n, t, std::max(ctrl.nodes(), min_nodes),
                                       kTalbotMaxNodes, rel, abs_tol);
      if (classic.converged || res.values.empty() ||
          excess(classic.values, classic.errors, rel, abs_tol) <
              excess(res.values, res.errors, rel, abs_tol)) {
        res = std::move(classic);
      }
      break;
    }
    case InversionMethod::gaver_stehfest: {
      const int m = ctrl.nodes();
      res.values = gaver_stehfest(f, n, t, m);
      res.errors = abs_diff(res.values, gaver_stehfest(f, n, t, m - 2));
      res.nodes_used = m;
      res.converged = within(res.values, res.errors, rel, abs_tol);
      break;
    }
    case InversionMethod::de_hoog: {
      const int m = ctrl.nodes();
      res.values = de_hoog(f, n, t, m);
      res.errors = abs_diff(res.values, de_hoog(f, n, t, m + 4));
      res.nodes_used = 2 * m + 1;
      res.converged = within(res.values, res.errors, rel, abs_tol);
      break;
    }
  }
  return res;
}

double invert_scalar(const std::function<std::complex<double>(std::complex<double>)>& f, double t,
                     const InversionControl& ctrl, double* error) {
  const VectorTransform vf = [&f](cd s, std::span<cd> out) {
    out[0] = f(s);
    return cd(0.0, 0.0);
  };
  const InversionResult r = invert(vf, 1, t, ctrl);
  if (error != nullptr) *error = r.errors[0];
  return r.values[0];
}

}  // namespace spherehit
