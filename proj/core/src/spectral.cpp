#include "spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "ik_core.hpp"
#include "spherehit/special_functions.hpp"

namespace spherehit::detail {

namespace {

using cd = std::complex<double>;

constexpr double kRescale = 1e200;
constexpr double kLogRescale = 460.51701859880914;  // log(1e200)
constexpr double kStep0 = 0.5;
constexpr double kTauMax = 4.5;
constexpr int kMinLevel = 3;
constexpr int kMaxLevel = 8;

int sign_of(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

double safe_log(double x) {
  return x == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(std::abs(x));
}

// Y_m = -Im H2_m with H2_m(y) = (2i/pi) e^{i m pi/2} K_m(iy).
double y_from_k(double m, cd scaled_k, double y) {
  const cd k = scaled_k * std::exp(cd(0.0, -y));
  const cd h2 = cd(0.0, 2.0 / std::numbers::pi) * std::exp(cd(0.0, 0.5 * m * std::numbers::pi)) * k;
  return -h2.imag();
}

}  // namespace

JyLadder jy_ladder(double mu0, int n_max, double y) {
  const auto len = static_cast<std::size_t>(n_max) + 1;
  JyLadder out{std::vector<double>(len), std::vector<double>(len), std::vector<int>(len),
               std::vector<int>(len)};

  // Y: forward from the reduced order mt in [-1/2, 1/2), where it dominates J.
  const int nl = static_cast<int>(std::floor(mu0 + 0.5));
  const double mt = mu0 - nl;
  const KPair<cd> kp = k_pair_scaled(mt, cd(0.0, y));
  double y_prev = y_from_k(mt, kp.k0, y);
  double y_cur = y_from_k(mt + 1.0, kp.k1, y);
  double scale = 0.0;
  auto store_y = [&](int j, double v) {
    const int n = j - nl;
    if (n < 0 || n > n_max) return;
    out.log_y[static_cast<std::size_t>(n)] = safe_log(v) + scale;
    out.sign_y[static_cast<std::size_t>(n)] = sign_of(v);
  };
  store_y(0, y_prev);
  store_y(1, y_cur);
  for (int j = 1; j < nl + n_max; ++j) {
    const double next = 2.0 * (mt + j) / y * y_cur - y_prev;
    y_prev = y_cur;
    y_cur = next;
    if (std::abs(y_cur) > kRescale) {
      y_cur /= kRescale;
      y_prev /= kRescale;
      scale += kLogRescale;
    }
    store_y(j + 1, y_cur);
  }

  // J: the power series while it cannot cancel (y^2/4 <= (mu0 + 1)/2),
  if (0.25 * y * y <= 0.5 * (mu0 + 1.0)) {
    const double q = -0.25 * y * y;
    for (std::size_t n = 0; n < len; ++n) {
      const double m = mu0 + static_cast<double>(n);
      double term = 1.0;
      double sum = 1.0;
      for (int k = 1; k < 200 && std::abs(term) > 1e-17 * sum; ++k) {
        term *= q / (k * (m + k));
        sum += term;
      }
      out.log_j[n] = m * std::log(0.5 * y) - sf::log_gamma(m + 1.0) + std::log(sum);
      out.sign_j[n] = 1;
    }
    return out;
  }
  // otherwise Miller's backward recurrence normalised by
  //   (y/2)^mu0 = sum_k (mu0 + 2k) Gamma(mu0 + k) / k! J_{mu0+2k}(y).
  const int top = n_max + 40 + static_cast<int>(std::ceil(2.0 * y));
  double f_next = 0.0;
  double f_cur = 1e-30;
  double sum = 0.0;
  double lscale = 0.0;
  std::vector<double> mant(len);
  std::vector<double> mscale(len);
  for (int j = top; j >= 0; --j) {
    if (j % 2 == 0) {
      const int k = j / 2;
      const double lw = k == 0 ? sf::log_gamma(mu0 + 1.0)
                               : std::log(mu0 + 2.0 * k) + sf::log_gamma(mu0 + k) - sf::log_gamma(k + 1.0);
      sum += std::exp(lw) * f_cur;
    }
    if (j <= n_max) {
      mant[static_cast<std::size_t>(j)] = f_cur;
      mscale[static_cast<std::size_t>(j)] = lscale;
    }
    if (j == 0) break;
    const double prev = 2.0 * (mu0 + j) / y * f_cur - f_next;
    f_next = f_cur;
    f_cur = prev;
    if (std::abs(f_cur) > kRescale) {
      f_cur /= kRescale;
      f_next /= kRescale;
      sum /= kRescale;
      lscale -= kLogRescale;
    }
  }
  // entries stored at scale s hold J * e^{lscale_final - s} up to the common norm
  const double lnorm = mu0 * std::log(0.5 * y) - safe_log(sum);
  for (std::size_t n = 0; n < len; ++n) {
    out.log_j[n] = safe_log(mant[n]) + lscale - mscale[n] + lnorm;
    out.sign_j[n] = sign_of(mant[n]) * sign_of(sum);
  }
  return out;
}

std::vector<double> cut_weight(double mu0, int n_max, double a, double r, double k) {
  const JyLadder ja = jy_ladder(mu0, n_max, a * k);
  const JyLadder jr = jy_ladder(mu0, n_max, r * k);
  const double lra = std::log(r / a);
  std::vector<double> g(static_cast<std::size_t>(n_max) + 1);
  for (std::size_t n = 0; n < g.size(); ++n) {
    const double sa = std::max(ja.log_j[n], ja.log_y[n]);
    const double sr = std::max(jr.log_j[n], jr.log_y[n]);
    const double jan = ja.sign_j[n] * std::exp(ja.log_j[n] - sa);
    const double yan = ja.sign_y[n] * std::exp(ja.log_y[n] - sa);
    const double jrn = jr.sign_j[n] * std::exp(jr.log_j[n] - sr);
    const double yrn = jr.sign_y[n] * std::exp(jr.log_y[n] - sr);
    const double w = jrn * yan - jan * yrn;
    const double m = mu0 + static_cast<double>(n);
    g[n] = std::exp(m * lra + sa - sr) * w / (jrn * jrn + yrn * yrn);
  }
  return g;
}

namespace {

// Tanh-sinh quadrature of pref * int_0^U phi(u) G_n(u / sqrt(t)) du over
// u = k sqrt(t), refined until every component meets its tolerance.
template <class Phi>
SpectralResult cut_integral(double mu0, int n_max, double a, double r, double t, double pref,
                            const Phi& phi, double rel_tol, std::span<const double> abs_tol) {
  const auto len = static_cast<std::size_t>(n_max) + 1;
  const double upper = 10.0 + 1.5 * std::sqrt(2.0 * (mu0 + n_max) + 1.0);
  const double root_t = std::sqrt(t);
  std::vector<double> acc(len, 0.0);
  SpectralResult res;
  res.values.assign(len, 0.0);
  res.errors.assign(len, std::numeric_limits<double>::infinity());
  auto add_node = [&](double tau) {
    const double q = 0.5 * std::numbers::pi * std::sinh(tau);
    const double e = std::exp(-2.0 * q);
    if (!std::isfinite(e)) return;
    const double u = upper / (1.0 + e);
    const double w = upper * 2.0 * e / ((1.0 + e) * (1.0 + e)) * 0.5 * std::numbers::pi * std::cosh(tau);
    if (!(u > 0.0) || w == 0.0) return;
    const double p = phi(u) * w;
    if (p == 0.0) return;
    const std::vector<double> g = cut_weight(mu0, n_max, a, r, u / root_t);
    for (std::size_t n = 0; n < len; ++n) acc[n] += p * g[n];
    ++res.nodes_used;
  };
  double h = kStep0;
  for (double tau = -kTauMax; tau <= kTauMax + 1e-12; tau += h) add_node(tau);
  std::vector<double> prev(len);
  for (std::size_t n = 0; n < len; ++n) prev[n] = pref * h * acc[n];
  for (int level = 1; level <= kMaxLevel; ++level) {
    h *= 0.5;
    for (double tau = -kTauMax + h; tau < kTauMax; tau += 2.0 * h) add_node(tau);
    bool all = true;
    for (std::size_t n = 0; n < len; ++n) {
      const double v = pref * h * acc[n];
      res.values[n] = v;
      res.errors[n] = std::abs(v - prev[n]);
      prev[n] = v;
      const double floor = n < abs_tol.size() ? abs_tol[n] : 0.0;
      if (res.errors[n] > std::max(rel_tol * std::abs(v), floor)) all = false;
    }
    if (level >= kMinLevel && all) {
      res.converged = true;
      break;
    }
  }
  return res;
}

}  // namespace

SpectralResult spectral_density(double mu0, int n_max, double a, double r, double t,
                                double rel_tol, std::span<const double> abs_tol) {
  const auto phi = [](double u) { return u * std::exp(-0.5 * u * u); };
  return cut_integral(mu0, n_max, a, r, t, 1.0 / (std::numbers::pi * t), phi, rel_tol, abs_tol);
}

SpectralResult spectral_tail(double mu0, int n_max, double a, double r, double t, double damp,
                             double rel_tol, std::span<const double> abs_tol) {
  const double ct = damp * t;
  const auto phi = [ct](double u) { return u * std::exp(-0.5 * u * u) / (0.5 * u * u + ct); };
  return cut_integral(mu0, n_max, a, r, t, std::exp(-ct) / std::numbers::pi, phi, rel_tol,
                      abs_tol);
}

}  // namespace spherehit::detail
