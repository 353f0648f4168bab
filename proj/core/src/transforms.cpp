#include "spherehit/transforms.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "series_terms.hpp"
#include "spherehit/errors.hpp"
#include "spherehit/majorant.hpp"
#include "spherehit/special_functions.hpp"

namespace spherehit::transforms {

namespace {

using cd = std::complex<double>;

void check_lam(double lam) {
  if (!(lam > 0.0) || !std::isfinite(lam)) throw DomainError("lam must be positive and finite");
}

void check_geometry(const Geometry& geom) {
  if (geom.on_sphere()) throw DegenerateGeometry("start on the sphere: sigma is identically 0");
}

// Terms of every transform series are bounded by
//   e^{|v|r} min(1, (r/|x|)^{2nu}) (|v| min(|x|, r^2/|x|))^n / n!
struct LtMajorant {
  double log_pref;
  double y;
};

LtMajorant lt_majorant(const Geometry& geom) {
  const double a = geom.start_norm();
  const double r = geom.radius();
  const double vn = geom.drift_norm();
  if (geom.exterior()) return {vn * r + 2.0 * geom.nu() * std::log(r / a), vn * r * r / a};
  return {vn * r, vn * a};
}

int terms_for(const LtMajorant& m, double log_extra, const SeriesControl& ctrl, const char* what) {
  const int n = majorant::index_for(m.log_pref + log_extra, m.y, ctrl.tol(), ctrl.max_terms() - 1);
  if (n < 0) {
    throw TruncationError(std::string(what) + " series needs more than " +
                              std::to_string(ctrl.max_terms()) + " terms",
                          majorant::bound_at(m.log_pref + log_extra, m.y, ctrl.max_terms() - 1));
  }
  return n;
}

// e^{log_extra} sum_n c_n L_{nu+n}(s).
double lt_series(const Geometry& geom, double s, double log_extra, const SeriesControl& ctrl,
                 const char* what) {
  check_geometry(geom);
  const int n = terms_for(lt_majorant(geom), log_extra, ctrl, what);
  const std::vector<detail::LogTerm> c = detail::drift_coefficients(geom, n);
  const std::vector<double> lt =
      hitting::lt_ladder(geom.nu(), n, geom.start_norm(), geom.radius(), s);
  detail::NeumaierSum sum;
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (c[k].sign != 0) sum.add(c[k].sign * std::exp(c[k].log_abs + log_extra) * lt[k]);
  }
  return sum.value();
}

// g(tau, z) = sum_n w_n C_n(alpha) e^{-n(n+2nu) tau} z^{-nu} I_{nu+n}(z), with
// w_n = 2^nu Gamma(nu)(nu+n) for nu > 0 and w_0 = 1, w_n = n for nu = 0.
double g_series(double nu, double alpha, double tau, double z, double tol, int max_terms) {
  if (z == 0.0) return 1.0;
  const int n_max = majorant::index_for(z, z, tol, max_terms - 1);
  if (n_max < 0) {
    throw TruncationError("sphere expectation series needs more than " +
                              std::to_string(max_terms) + " terms",
                          majorant::bound_at(z, z, max_terms - 1));
  }
  const std::vector<double> lphi = sf::log_phi_sequence(sf::Order(nu), n_max, z);
  const std::vector<double> geg = sf::gegenbauer_sequence(n_max, sf::Order(nu), alpha);
  const double lpre = nu > 0.0 ? nu * std::numbers::ln2 + sf::log_gamma(nu) : 0.0;
  detail::NeumaierSum sum;
  for (int n = 0; n <= n_max; ++n) {
    const auto i = static_cast<std::size_t>(n);
    if (geg[i] == 0.0 || !std::isfinite(lphi[i])) continue;
    const double w = nu > 0.0 ? nu + n : (n == 0 ? 1.0 : static_cast<double>(n));
    const double decay = n * (n + 2.0 * nu) * tau;
    sum.add(geg[i] * std::exp(lpre + std::log(w) + lphi[i] - decay));
  }
  return sum.value();
}

double driftless_lt(const Geometry& geom, double lam) {
  check_geometry(geom);
  return hitting::hitting_lt(
      hitting::RadialInstance(sf::Order(geom.nu()), geom.start_norm(), geom.radius()), lam);
}

void check_query(const SphericalQuery& q) {
  if (q.dim < 2) throw DomainError("dimension must be at least 2");
  if (!(q.t >= 0.0) || !std::isfinite(q.t)) throw DomainError("t must be nonnegative");
  if (!(q.xi >= 0.0) || !std::isfinite(q.xi)) throw DomainError("xi must be nonnegative");
  if (!(std::abs(q.alpha) <= 1.0)) throw DomainError("alpha must lie in [-1, 1]");
  if (!(q.drift_norm >= 0.0) || !std::isfinite(q.drift_norm)) {
    throw DomainError("drift norm must be nonnegative");
  }
}

}  // namespace

double drift_lt(const Geometry& geom, double lam, const SeriesControl& ctrl) {
  check_lam(lam);
  if (!geom.has_drift()) return driftless_lt(geom, lam);
  const double vn = geom.drift_norm();
  return lt_series(geom, std::sqrt(2.0 * lam + vn * vn), -geom.drift_dot_start(), ctrl, "drift_lt");
}

double joint_lt(const Geometry& geom, double lam, const SeriesControl& ctrl) {
  check_lam(lam);
  if (!geom.has_drift()) return driftless_lt(geom, lam);
  return lt_series(geom, std::sqrt(2.0 * lam), 0.0, ctrl, "joint_lt");
}

double sphere_expectation(const SphericalQuery& q, const SeriesControl& ctrl) {
  check_query(q);
  return g_series(0.5 * (q.dim - 2), q.alpha, 0.5 * q.t, q.drift_norm * q.xi, ctrl.tol(),
                  ctrl.max_terms());
}

std::complex<double> fourier_laplace(const Geometry& geom, double lam, const SeriesControl& ctrl) {
  check_lam(lam);
  check_geometry(geom);
  if (geom.dim() < 3) throw DomainError("fourier_laplace needs dim >= 3");
  const double a = geom.start_norm();
  const double r = geom.radius();
  const double s = std::sqrt(2.0 * lam);
  const double nu = geom.nu();
  if (!geom.has_drift()) return driftless_lt(geom, lam);
  // |J_mu| <= (z/2)^mu / Gamma(mu+1) bounds the I-series majorant as well
  const int n_max = terms_for(lt_majorant(geom), 0.0, ctrl, "fourier_laplace");
  const double vn = geom.drift_norm();
  const double z = vn * r;
  const std::vector<double> geg = sf::gegenbauer_sequence(n_max, sf::Order(nu), direction_cosine(geom));
  const std::vector<double> lt = hitting::lt_ladder(nu, n_max, a, r, s);
  const double lpre = nu * std::numbers::ln2 + sf::log_gamma(nu) - nu * std::log(z);
  const double lratio = std::log(a / r);
  detail::NeumaierSum re;
  detail::NeumaierSum im;
  for (int n = 0; n <= n_max; ++n) {
    const auto i = static_cast<std::size_t>(n);
    const double j = sf::bessel_j(sf::Order(nu + n), z);
    if (j == 0.0 || geg[i] == 0.0) continue;
    const double term = (j > 0.0 ? 1.0 : -1.0) * geg[i] * lt[i] *
                        std::exp(lpre + std::log(nu + n) + n * lratio + std::log(std::abs(j)));
    switch (n % 4) {
      case 0: re.add(term); break;
      case 1: im.add(term); break;
      case 2: re.add(-term); break;
      default: im.add(-term); break;
    }
  }
  return {re.value(), im.value()};
}

double pde_residual(const SphericalQuery& q, double h_t, double h_xi) {
  check_query(q);
  if (!(h_t > 0.0) || !(h_xi > 0.0)) throw DomainError("step sizes must be positive");
  if (!(q.t > h_t) || !(q.xi > h_xi)) throw DomainError("pde_residual needs an interior point");
  const double nu = 0.5 * (q.dim - 2);
  const double beta = q.dim - 1.0;
  constexpr double kTol = 1e-15;
  constexpr int kTerms = 400;
  auto g = [&](double t, double xi) { return g_series(nu, q.alpha, t, xi, kTol, kTerms); };
  const double x = q.xi;
  const double g0 = g(q.t, x);
  const double gt = (g(q.t + h_t, x) - g(q.t - h_t, x)) / (2.0 * h_t);
  const double gp = g(q.t, x + h_xi);
  const double gm = g(q.t, x - h_xi);
  const double gx = (gp - gm) / (2.0 * h_xi);
  const double gxx = (gp - 2.0 * g0 + gm) / (h_xi * h_xi);
  return gt + x * x * gxx + beta * x * gx - x * x * g0;
}

}  // namespace spherehit::transforms
