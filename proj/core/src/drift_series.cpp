#include "spherehit/drift_series.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "series_terms.hpp"
#include "spherehit/bessel_hitting.hpp"
#include "spherehit/errors.hpp"
#include "spherehit/majorant.hpp"
#include "spherehit/special_functions.hpp"

namespace spherehit::drift {

namespace {

constexpr double kUnderflow = 1e-300;

void check_geometry(const Geometry& geom) {
  if (geom.on_sphere()) {
    throw DegenerateGeometry("start on the sphere: hitting time is identically 0, no density");
  }
}

void check_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("time must be positive and finite");
}

// log of (r/|x|)^{nu+1/2}, the part of the Girsanov majorant shared by every
// order nu + n once (|v||x|)^n (r/|x|)^n = (|v|r)^n is pulled out.
double log_shared_ratio(const Geometry& geom) {
  return (geom.nu() + 0.5) * std::log(geom.radius() / geom.start_norm());
}

double log_gauss(const Geometry& geom, double t) {
  const double d = std::abs(geom.start_norm() - geom.radius());
  return std::log(d) - 0.5 * std::log(2.0 * std::numbers::pi) - 1.5 * std::log(t) - d * d / (2.0 * t);
}

struct Assembled {
  double value;
  double inv_error;
};

// e^{log_pref} sum_n c_n x_n with the error sum e^{log_pref} sum_n |c_n| err_n.
Assembled assemble(const std::vector<detail::LogTerm>& c, double log_pref,
                   const hitting::LadderResult& lr) {
  detail::NeumaierSum sum;
  double err = 0.0;
  for (std::size_t n = 0; n < c.size(); ++n) {
    if (c[n].sign == 0) continue;
    const double w = std::exp(log_pref + c[n].log_abs);
    sum.add(c[n].sign * w * lr.values[n]);
    err += w * lr.errors[n];
  }
  return {sum.value(), err};
}

std::vector<double> component_tolerances(const std::vector<detail::LogTerm>& c, double log_pref,
                                         double budget) {
  std::vector<double> tol(c.size());
  const double lb = std::log(budget / static_cast<double>(c.size()));
  for (std::size_t n = 0; n < c.size(); ++n) {
    tol[n] = c[n].sign == 0 ? std::numeric_limits<double>::infinity()
                            : std::exp(lb - log_pref - c[n].log_abs);
  }
  return tol;
}

}  // namespace

std::vector<double> coefficients(const Geometry& geom, int n_max) {
  const std::vector<detail::LogTerm> c = detail::drift_coefficients(geom, n_max);
  std::vector<double> out(c.size());
  for (std::size_t n = 0; n < c.size(); ++n) out[n] = c[n].sign * std::exp(c[n].log_abs);
  return out;
}

DensityEstimate drift_density(const Geometry& geom, double t, const SeriesControl& ctrl,
                              const InversionControl& inv) {
  check_geometry(geom);
  check_time(t);
  const double a = geom.start_norm();
  const double r = geom.radius();
  if (!geom.has_drift()) {
    return hitting::hitting_density(hitting::RadialInstance(sf::Order(geom.nu()), a, r), t, inv);
  }
  const double vn = geom.drift_norm();
  const double y = vn * r;
  const double log_tilt = -geom.drift_dot_start() - 0.5 * vn * vn * t;
  const double log_base = log_tilt + y + log_shared_ratio(geom) + log_gauss(geom, t);

  DensityEstimate est;
  // n = 0 needs its own majorant (order nu may be below 1/2).
  const double nu_bound = geom.exterior() ? geom.nu() : std::max(geom.nu(), 0.5);
  const double log_first = log_tilt + y + majorant::log_density_majorant(nu_bound, a, r, t);
  if (std::max(log_first, log_base + y) < std::log(kUnderflow)) {
    est.underflow_flag = true;
    return est;
  }

  const double half = 0.5 * ctrl.tol();
  const int n = majorant::index_for(log_base, y, half, ctrl.max_terms() - 1);
  if (n < 0) {
    throw TruncationError("density series needs more than " + std::to_string(ctrl.max_terms()) +
                              " terms",
                          majorant::bound_at(log_base, y, ctrl.max_terms() - 1));
  }
  const std::vector<detail::LogTerm> c = detail::drift_coefficients(geom, n);
  const std::vector<double> tol = component_tolerances(c, log_tilt, half);
  const hitting::LadderResult lr = hitting::density_ladder(geom.nu(), n, a, r, t, inv, tol);
  const Assembled s = assemble(c, log_tilt, lr);
  const double bound = majorant::bound_at(log_base, y, n);
  est.terms_used = n + 1;
  est.nodes_used = lr.nodes_used;
  est.trunc_bound = bound + s.inv_error;
  if (!lr.converged) {
    throw InversionError("density inversion missed its target at t = " + std::to_string(t),
                         s.inv_error);
  }
  est.value = std::max(s.value, 0.0);
  return est;
}

int truncation_index(const Geometry& geom, double tol, double damp) {
  if (!geom.has_drift()) throw DomainError("truncation_index needs a nonzero drift");
  if (!(tol > 0.0)) throw DomainError("truncation_index: tol must be positive");
  if (!(damp >= 0.0)) throw DomainError("truncation_index: damp must be nonnegative");
  const double vn = geom.drift_norm();
  const double log_pref = vn * geom.radius() - geom.drift_dot_start() - damp;
  return majorant::index_for(log_pref, 2.0 * vn * geom.start_norm(), tol,
                             std::numeric_limits<int>::max() - 1);
}

DensityEstimate drift_tail(const Geometry& geom, double t, const SeriesControl& ctrl,
                           const InversionControl& inv) {
  check_geometry(geom);
  check_time(t);
  const double a = geom.start_norm();
  const double r = geom.radius();
  DensityEstimate est;
  if (!geom.has_drift()) {
    est.value =
        hitting::hitting_tail(hitting::RadialInstance(sf::Order(geom.nu()), a, r), t, 0.0, inv);
    est.terms_used = 1;
    return est;
  }
  const double vn = geom.drift_norm();
  const double y = vn * r;
  const double damp = 0.5 * vn * vn;
  const double log_tilt = -geom.drift_dot_start();
  // each damped tail is at most e^{-damp t}; sum |c_n| <= e^{|v|r + |v||x|}
  if (log_tilt - damp * t + y + vn * a < std::log(kUnderflow)) {
    est.underflow_flag = true;
    return est;
  }
  const double log_base = log_tilt + y - damp * t + log_shared_ratio(geom) +
                          std::log(std::erf(std::abs(a - r) / std::sqrt(2.0 * t)));
  const double half = 0.5 * ctrl.tol();
  const int n = majorant::index_for(log_base, y, half, ctrl.max_terms() - 1);
  if (n < 0) {
    throw TruncationError("tail series needs more than " + std::to_string(ctrl.max_terms()) +
                              " terms",
                          majorant::bound_at(log_base, y, ctrl.max_terms() - 1));
  }
  const std::vector<detail::LogTerm> c = detail::drift_coefficients(geom, n);
  const std::vector<double> tol = component_tolerances(c, log_tilt, half);
  const hitting::LadderResult lr = hitting::tail_ladder(geom.nu(), n, a, r, t, damp, inv, tol);
  const Assembled s = assemble(c, log_tilt, lr);
  est.terms_used = n + 1;
  est.nodes_used = lr.nodes_used;
  est.trunc_bound = majorant::bound_at(log_base, y, n) + s.inv_error;
  if (!lr.converged) {
    throw InversionError("tail inversion missed its target at t = " + std::to_string(t),
                         s.inv_error);
  }
  est.value = std::max(s.value, 0.0);
  return est;
}

double tail_asymptotic(const Geometry& geom, double t) {
  if (!geom.exterior()) throw DomainError("tail_asymptotic needs |x| > r");
  if (!geom.has_drift()) throw DomainError("tail_asymptotic needs a nonzero drift");
  check_time(t);
  const double vn = geom.drift_norm();
  const double z = vn * geom.radius();
  const double nu = geom.nu();
  const double a = geom.start_norm();
  const double r = geom.radius();
  const double log_common = -geom.drift_dot_start() - 0.5 * vn * vn * t + std::log(2.0 / (vn * vn));
  if (geom.dim() == 2) {
    if (!(t > std::numbers::e)) throw DomainError("tail_asymptotic in the plane needs t > e");
    const double lt = std::log(t);
    const double l0 = hitting::asymptotic_constant(sf::Order(0.0), a, r);
    return std::exp(log_common + std::log(l0) + sf::log_bessel_i(sf::Order(0.0), z) - std::log(t) -
                    2.0 * std::log(lt));
  }
  const double lnu = hitting::asymptotic_constant(sf::Order(nu), a, r);
  const double lc = nu * std::numbers::ln2 + sf::log_gamma(nu + 1.0) + std::log(lnu) +
                    sf::log_bessel_i(sf::Order(nu), z) - nu * std::log(z);
  return std::exp(log_common + lc - (nu + 1.0) * std::log(t));
}

}  // namespace spherehit::drift
