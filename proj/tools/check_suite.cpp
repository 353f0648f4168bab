#include "check_suite.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "spherehit/drift_series.hpp"
#include "spherehit/special_functions.hpp"
#include "spherehit/transforms.hpp"

namespace spherehit::cli {

namespace {

double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

CheckOutcome bessel_tail_check() {
  CheckOutcome c{"bound_bessel_tail", 0.0, 1.0, true, ""};
  int violations = 0;
  for (double mu : {0.0, 0.5, 1.0, 1.5, 2.5}) {
    for (double xi : {0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0}) {
      for (int n = 1; n <= 30; ++n) {
        const sf::BoundCertificate b = sf::bessel_tail_bound(n, sf::Order(mu), xi);
        if (b.bound_value > 0.0) c.measured = std::max(c.measured, b.bounded_value / b.bound_value);
        if (!b.holds()) ++violations;
      }
    }
  }
  c.pass = violations == 0;
  c.detail = std::to_string(violations) + " violations, largest value/bound shown";
  return c;
}

CheckOutcome gegenbauer_check() {
  CheckOutcome c{"bound_gegenbauer", 0.0, 1.0, true, ""};
  int violations = 0;
  for (double nu : {0.0, 0.5, 1.0, 1.5, 2.5}) {
    for (int n = 1; n <= 40; ++n) {
      const sf::BoundCertificate b = sf::gegenbauer_bound(n, sf::Order(nu));
      c.measured = std::max(c.measured, b.bounded_value / b.bound_value);
      if (!b.holds()) ++violations;
    }
  }
  c.pass = violations == 0;
  c.detail = std::to_string(violations) + " violations, largest value/bound shown";
  return c;
}

CheckOutcome gegenbauer_expansion() {
  CheckOutcome c{"gegenbauer_expansion", 0.0, 1e-10, true, "max relative error vs exp(alpha xi)"};
  for (double alpha : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
    for (double xi : {0.1, 0.5, 1.0, 2.0, 5.0}) {
      for (double mu : {0.5, 1.0, 1.5}) {
        const double got = sf::exp_gegenbauer_expansion(alpha, xi, mu, 80);
        c.measured = std::max(c.measured, rel_err(got, std::exp(alpha * xi)));
      }
    }
  }
  c.pass = c.measured <= c.tolerance;
  return c;
}

std::vector<Geometry> sample_geometries() {
  return {Geometry(3, 1.0, {2.0, 0.0, 0.0}, {0.0, 0.0, 1.0}),
          Geometry(2, 1.0, {0.5, 0.0}, {0.8, 0.0}),
          Geometry(5, 1.5, {0.0, 2.5, 0.0, 0.0, 0.0}, {0.0, -0.3, 0.4, 0.0, 0.0})};
}

CheckOutcome keystone_algebraic() {
  CheckOutcome c{"keystone_algebraic", 0.0, 1e-10, true,
                 "drift_lt(lam) vs e^{-<v,x>} joint_lt(lam + |v|^2/2)"};
  for (const Geometry& g : sample_geometries()) {
    for (double lam : {0.5, 1.0, 2.0}) {
      const double vn = g.drift_norm();
      const double lhs = transforms::drift_lt(g, lam);
      const double rhs =
          std::exp(-g.drift_dot_start()) * transforms::joint_lt(g, lam + 0.5 * vn * vn);
      c.measured = std::max(c.measured, rel_err(lhs, rhs));
    }
  }
  c.pass = c.measured <= c.tolerance;
  return c;
}

CheckOutcome keystone_quadrature() {
  CheckOutcome c{"keystone_quadrature", 0.0, 1e-6, true,
                 "int e^{-lam t} drift_density dt vs drift_lt, lam = 1"};
  const Geometry g = sample_geometries().front();
  const SeriesControl ctrl(1e-13, 400);
  boost::math::quadrature::exp_sinh<double> quad;
  const double lam = 1.0;
  const double got = quad.integrate(
      [&](double t) { return std::exp(-lam * t) * drift::drift_density(g, t, ctrl).value; }, 1e-11);
  c.measured = rel_err(got, transforms::drift_lt(g, lam));
  c.pass = c.measured <= c.tolerance;
  return c;
}

CheckOutcome pde_order() {
  CheckOutcome c{"pde_residual_order", 0.0, 1e-4, true,
                 "max |residual| at h = 1e-3; pass also needs step-halving order in [1.5, 2.5]"};
  double worst_order = 2.0;
  for (int dim : {2, 3, 5}) {
    for (auto [t, xi] : {std::pair{0.5, 1.0}, std::pair{0.2, 2.0}}) {
      const transforms::SphericalQuery q{t, xi, 0.4, dim, 1.0};
      const double r1 = transforms::pde_residual(q, 1e-3, 1e-3);
      const double r2 = transforms::pde_residual(q, 5e-4, 5e-4);
      c.measured = std::max(c.measured, std::abs(r1));
      const double order = std::log2(std::abs(r1) / std::abs(r2));
      if (std::abs(order - 2.0) > std::abs(worst_order - 2.0)) worst_order = order;
    }
  }
  c.pass = c.measured <= c.tolerance && worst_order >= 1.5 && worst_order <= 2.5;
  c.detail += "; worst order " + std::to_string(worst_order);
  return c;
}

CheckOutcome sphere_boundary() {
  CheckOutcome c{"sphere_boundary_values", 0.0, 1e-8, true,
                 "t = 0 value vs e^{|v| xi alpha} and xi = 0 value vs 1"};
  for (int dim : {2, 3, 4, 7}) {
    for (double alpha : {-1.0, -0.3, 0.0, 0.6, 1.0}) {
      for (double xi : {0.2, 1.0, 3.0}) {
        transforms::SphericalQuery q{0.0, xi, alpha, dim, 1.3};
        c.measured = std::max(c.measured,
                              rel_err(transforms::sphere_expectation(q), std::exp(1.3 * xi * alpha)));
        q.t = 0.7;
        q.xi = 0.0;
        c.measured = std::max(c.measured, rel_err(transforms::sphere_expectation(q), 1.0));
      }
    }
  }
  c.pass = c.measured <= c.tolerance;
  return c;
}

template <class F>
CheckOutcome guarded(const char* name, F f) {
  try {
    return f();
  } catch (const std::exception& e) {
    return {name, std::nan(""), 0.0, false, e.what()};
  }
}

}  // namespace

bool known_suite(const std::string& suite) {
  return suite == "all" || suite == "bounds" || suite == "gegenbauer" || suite == "keystone" ||
         suite == "pde";
}

std::vector<CheckOutcome> run_checks(const std::string& suite) {
  const bool all = suite == "all";
  std::vector<CheckOutcome> out;
  if (all || suite == "bounds") {
    out.push_back(guarded("bound_bessel_tail", bessel_tail_check));
    out.push_back(guarded("bound_gegenbauer", gegenbauer_check));
  }
  if (all || suite == "gegenbauer") out.push_back(guarded("gegenbauer_expansion", gegenbauer_expansion));
  if (all || suite == "keystone") {
    out.push_back(guarded("keystone_algebraic", keystone_algebraic));
    out.push_back(guarded("keystone_quadrature", keystone_quadrature));
  }
  if (all || suite == "pde") {
    out.push_back(guarded("pde_residual_order", pde_order));
    out.push_back(guarded("sphere_boundary_values", sphere_boundary));
  }
  return out;
}

}  // namespace spherehit::cli
