// Acceptance checks AC-1 .. AC-8; one PASS/FAIL line each.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "spherehit/bessel_hitting.hpp"
#include "spherehit/drift_series.hpp"
#include "spherehit/mc_oracle.hpp"
#include "spherehit/special_functions.hpp"
#include "spherehit/transforms.hpp"

namespace {

using spherehit::Geometry;
using spherehit::SeriesControl;
namespace drift = spherehit::drift;
namespace h = spherehit::hitting;
namespace mc = spherehit::mc;
namespace sf = spherehit::sf;
namespace tr = spherehit::transforms;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

double integrate(const std::function<double(double)>& f) {
  boost::math::quadrature::exp_sinh<double> q;
  return q.integrate(f, 1e-11);
}

Verdict ac1() {
  const std::vector<Geometry> geoms = {
      Geometry(2, 1.0, {2.0, 0.0}, {0.6, 0.0}),
      Geometry(2, 1.0, {0.5, 0.0}, {0.0, 0.8}),
      Geometry(3, 1.0, {2.0, 0.0, 0.0}, {0.0, 0.0, 1.0}),
      Geometry(3, 1.0, {0.6, 0.0, 0.0}, {-0.42, 0.56, 0.0}),
      Geometry(5, 1.5, {0.0, 2.5, 0.0, 0.0, 0.0}, {0.0, -0.3, 0.4, 0.0, 0.0}),
      Geometry(5, 1.5, {0.0, 1.0, 0.0, 0.0, 0.0}, {0.0, 0.5, 0.0, 0.0, 0.0}),
  };
  const SeriesControl ctrl(1e-13, 400);
  double worst = 0.0;
  for (const Geometry& g : geoms) {
    for (double lam : {0.5, 1.0, 2.0}) {
      const double q = integrate([&](double t) { return std::exp(-lam * t) * drift::drift_density(g, t, ctrl).value; });
      worst = std::max(worst, rel(q, tr::drift_lt(g, lam)));
    }
  }
  return {worst <= 1e-6, "max rel err " + fmt("%.2e", worst) + " over 18 cases (tol 1e-6)"};
}

Verdict ac2() {
  const std::vector<Geometry> geoms = {
      Geometry(3, 1.0, {2.0, 0.0, 0.0}, {0.0, 0.0, 1.0}),
      Geometry(2, 1.0, {0.5, 0.0}, {0.8, 0.0}),
      Geometry(5, 1.5, {0.0, 2.5, 0.0, 0.0, 0.0}, {0.0, -0.3, 0.4, 0.0, 0.0}),
  };
  const SeriesControl ctrl(1e-15, 400);
  double worst = 0.0;
  for (const Geometry& g : geoms) {
    for (double t = 0.5; t <= 10.0 * (1 + 1e-12); t *= std::pow(20.0, 1.0 / 12)) {
      const double hh = 1e-3 * t;
      // series error well below 1e-5 of the difference quotient at this scale
      const double scale = drift::drift_density(g, t).value;
      const SeriesControl local(std::min(1e-12, 1e-8 * scale * hh), 400);
      auto tail = [&](double u) { return drift::drift_tail(g, u, local).value; };
      const double d = -(tail(t - 2 * hh) - 8 * tail(t - hh) + 8 * tail(t + hh) - tail(t + 2 * hh)) / (12 * hh);
      worst = std::max(worst, rel(d, drift::drift_density(g, t, local).value));
    }
  }
  // drift_lt is analytic in lam at 0 when v != 0; one Richardson step
  double worst0 = 0.0;
  for (const Geometry& g : geoms) {
    const double l1 = tr::drift_lt(g, 1e-3, ctrl);
    const double l2 = tr::drift_lt(g, 5e-4, ctrl);
    worst0 = std::max(worst0, rel(drift::drift_tail(g, 1e-6).value, 2 * l2 - l1));
  }
  return {worst <= 1e-5 && worst0 <= 1e-4,
          "derivative max rel err " + fmt("%.2e", worst) + " (tol 1e-5), t->0 vs lam->0 " + fmt("%.2e", worst0) +
              " (tol 1e-4)"};
}

Verdict ac3() {
  const h::RadialInstance half(sf::Order(0.5), 2.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i <= 60; ++i) {
    const double t = 0.01 * std::pow(1e4, i / 60.0);
    const double want = 0.5 / std::sqrt(2 * M_PI * t * t * t) * std::exp(-1.0 / (2 * t));
    worst = std::max(worst, rel(h::hitting_density(half, t).value, want));
  }
  double worst_mass = 0.0;
  for (double mu : {0.5, 1.0, 1.5}) {
    const h::RadialInstance inst(sf::Order(mu), 2.0, 1.0);
    const double m = integrate([&](double t) { return h::hitting_density(inst, t).value; });
    worst_mass = std::max(worst_mass, std::abs(m - std::pow(0.5, 2 * mu)));
  }
  return {worst <= 1e-8 && worst_mass <= 1e-6,
          "closed form max rel err " + fmt("%.2e", worst) + " (tol 1e-8), mass max abs err " + fmt("%.2e", worst_mass) +
              " (tol 1e-6)"};
}

Verdict ac4() {
  const Geometry g(3, 1.0, {2.0, 0.0, 0.0}, {0.0, 0.0, 1.0});
  const Geometry g0 = g.with_drift({0.0, 0.0, 0.0});
  const mc::McResult run = mc::simulate(g, mc::McRun(42, 1000000, 1e-3, 60.0));
  const mc::McResult run0 = mc::simulate(g0, mc::McRun(42, 1000000, 1e-3, 1e6));
  double worst = 0.0;
  for (double t : {0.5, 1.0, 2.0, 5.0}) {
    const mc::Estimate e = mc::empirical_tail(run, t);
    worst = std::max(worst, std::abs(e.value - drift::drift_tail(g, t).value) / e.std_error);
  }
  for (double lam : {0.5, 1.0}) {
    const mc::Estimate e = mc::empirical_joint_lt(run0, lam, g);
    worst = std::max(worst, std::abs(e.value - tr::joint_lt(g, lam)) / e.std_error);
  }
  const double z_hit = std::abs(run0.hit_probability.value - 0.5) / run0.hit_probability.std_error;
  return {worst <= 3.0 && z_hit <= 3.0,
          "max |z| " + fmt("%.2f", worst) + " over 6 statistics, driftless hit |z| " + fmt("%.2f", z_hit) +
              " (tol 3)"};
}

struct Ratios {
  std::vector<double> t;
  std::vector<double> dev;
  std::string error;
};

Ratios ratio_run(const Geometry& g, double t_lo, double t_hi, int per_decade) {
  Ratios out;
  const int n = static_cast<int>(std::round(std::log10(t_hi / t_lo) * per_decade));
  for (int i = 0; i <= n; ++i) {
    const double t = t_lo * std::pow(10.0, double(i) / per_decade);
    const double a = drift::tail_asymptotic(g, t);
    if (!(a > 1e-290)) break;  // both sides are at the end of double range
    spherehit::DensityEstimate est;
    try {
      est = drift::drift_tail(g, t, SeriesControl(1e-8 * a, 400));
    } catch (const std::exception& e) {
      out.error = fmt("threw at t=%.4g: ", t) + e.what();
      break;
    }
    if (est.underflow_flag || !(est.value > 0.0)) break;
    out.t.push_back(t);
    out.dev.push_back(est.value / a - 1.0);
  }
  return out;
}

Verdict ac5() {
  const int per_decade = 8;
  std::string detail;
  bool ok = true;
  auto judge = [&](const char* name, const Geometry& g, double t_lo, double band, bool strict) {
    const Ratios r = ratio_run(g, t_lo, 1e4, per_decade);
    if (!r.error.empty()) {
      ok = false;
      detail += std::string(name) + " " + r.error + "; ";
      return;
    }
    if (r.t.size() < static_cast<std::size_t>(per_decade + 1)) {
      ok = false;
      detail += std::string(name) + ": too few computable points; ";
      return;
    }
    const std::size_t last = r.t.size() - 1;
    const std::size_t first = last - per_decade;
    bool mono = true;
    for (std::size_t i = first + 1; i <= last; ++i) mono = mono && std::abs(r.dev[i]) < std::abs(r.dev[i - 1]);
    const bool toward = std::abs(r.dev[last]) < std::abs(r.dev[first]);
    const bool in_band = std::abs(r.dev[last]) <= band && 1.0 + r.dev[last] >= 1.0 / (1.0 + band);
    ok = ok && in_band && (strict ? mono : toward);
    detail += std::string(name) + " ratio " + fmt("%.5f", 1.0 + r.dev[last]) + " at t=" + fmt("%.4g", r.t[last]) +
              (strict ? (mono ? " monotone" : " NOT monotone") : (toward ? " approaching" : " NOT approaching")) + "; ";
  };
  judge("d=3", Geometry(3, 1.0, {2.0, 0.0, 0.0}, {0.0, 0.0, 1.0}), 10.0, 0.1, true);
  judge("d=5", Geometry(5, 1.5, {0.0, 2.5, 0.0, 0.0, 0.0}, {0.0, -0.6, 0.8, 0.0, 0.0}), 10.0, 0.1, true);
  judge("d=2", Geometry(2, 1.0, {2.0, 0.0}, {0.0, 1.0}), 10.0, 1.0, false);
  return {ok, detail};
}

Verdict ac6() {
  double worst_exp = 0.0;
  for (double a : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
    for (double xi : {0.1, 0.5, 1.0, 2.0, 5.0}) {
      for (double mu : {0.5, 1.0, 1.5}) {
        worst_exp = std::max(worst_exp, rel(sf::exp_gegenbauer_expansion(a, xi, mu, 80), std::exp(a * xi)));
      }
    }
  }
  double worst_bc = 0.0;
  double worst_slope = 0.0;
  bool slope_linear = true;
  for (int dim : {2, 3, 5}) {
    for (double alpha : {-1.0, -0.4, 0.0, 0.7, 1.0}) {
      for (double xi : {0.3, 1.0, 2.5}) {
        worst_bc = std::max(worst_bc, std::abs(tr::sphere_expectation({0.0, xi, alpha, dim, 1.0}) - std::exp(xi * alpha)));
      }
      for (double t : {0.1, 0.5, 1.0}) {
        worst_bc = std::max(worst_bc, std::abs(tr::sphere_expectation({2 * t, 0.0, alpha, dim, 1.0}) - 1.0));
        const double want = alpha * std::exp(-(dim - 1) * t);
        auto slope_err = [&](double hh) {
          return std::abs((tr::sphere_expectation({2 * t, hh, alpha, dim, 1.0}) - 1.0) / hh - want);
        };
        const double e1 = slope_err(1e-3);
        const double e2 = slope_err(5e-4);
        worst_slope = std::max(worst_slope, e1);
        if (e1 > 1e-12 && !(e2 < 0.6 * e1)) slope_linear = false;
        if (e1 > 1e-2) slope_linear = false;
      }
    }
  }
  double worst_order = 2.0;
  double worst_res = 0.0;
  for (int dim : {2, 3, 5}) {
    const tr::SphericalQuery q{0.5, 1.0, 0.3, dim, 1.0};
    const double r1 = std::abs(tr::pde_residual(q, 1e-3, 1e-3));
    const double r2 = std::abs(tr::pde_residual(q, 5e-4, 5e-4));
    worst_res = std::max(worst_res, r1);
    const double order = std::log2(r1 / r2);
    if (std::abs(order - 2.0) > std::abs(worst_order - 2.0)) worst_order = order;
  }
  const bool ok = worst_exp <= 1e-10 && worst_bc <= 1e-8 && slope_linear && worst_res <= 1e-4 &&
                  std::abs(worst_order - 2.0) <= 0.5;
  return {ok, "expansion " + fmt("%.2e", worst_exp) + ", boundary values " + fmt("%.2e", worst_bc) +
                  ", slope err " + fmt("%.2e", worst_slope) + (slope_linear ? " O(h)" : " not O(h)") +
                  ", PDE residual " + fmt("%.2e", worst_res) + " order " + fmt("%.2f", worst_order)};
}

Verdict ac7() {
  long checked = 0;
  long bad = 0;
  for (double mu : {0.0, 0.5, 1.0, 1.5, 2.5, 5.0}) {
    for (int n = 1; n <= 30; ++n) {
      for (int i = 0; i < 60; ++i) {
        const double xi = 1e-4 * std::pow(30.0 / 1e-4, i / 59.0);
        ++checked;
        if (!sf::bessel_tail_bound(n, sf::Order(mu), xi).holds()) ++bad;
      }
    }
  }
  for (double nu : {0.0, 0.5, 1.0, 2.5}) {
    for (int n = 1; n <= 40; ++n) {
      const double b = sf::gegenbauer_bound(n, sf::Order(nu)).bound_value;
      for (int i = 0; i <= 100; ++i) {
        ++checked;
        if (std::abs(sf::gegenbauer(n, sf::Order(nu), -1.0 + 0.02 * i)) > b) ++bad;
      }
    }
  }
  return {bad == 0, std::to_string(bad) + " violations in " + std::to_string(checked) + " checks"};
}

Verdict ac8() {
  const std::vector<Geometry> geoms = {
      Geometry(3, 1.0, {2.0, 0.0, 0.0}, {0.0, 0.0, 1.0}),
      Geometry(3, 1.0, {0.6, 0.0, 0.0}, {-0.42, 0.56, 0.0}),
      Geometry(4, 1.0, {0.2, 0.3, 0.0, 0.1}, {0.5, 0.5, -0.5, 0.0}),
      Geometry(5, 1.5, {0.0, 2.5, 0.0, 0.0, 0.0}, {0.0, -0.3, 0.4, 0.0, 0.0}),
  };
  double max_mod = 0.0;
  int samples = 0;
  for (const Geometry& g : geoms) {
    for (double scale : {0.1, 1.0, 5.0, 20.0}) {
      std::vector<double> v = g.drift();
      for (double& c : v) c *= scale;
      for (double lam : {1e-3, 0.1, 0.5, 1.0, 3.0, 10.0}) {
        max_mod = std::max(max_mod, std::abs(tr::fourier_laplace(g.with_drift(v), lam)));
        ++samples;
      }
    }
  }
  double worst = 0.0;
  for (const Geometry& g : geoms) {
    std::vector<double> v = g.drift();
    for (double& c : v) c *= 1e-6;
    const h::RadialInstance inst(sf::Order(g.nu()), g.start_norm(), g.radius());
    for (double lam : {0.5, 1.0, 2.0}) {
      worst = std::max(worst, rel(tr::fourier_laplace(g.with_drift(v), lam).real(), h::hitting_lt(inst, lam)));
    }
  }
  return {max_mod <= 1.0 && worst <= 1e-6, "max modulus " + fmt("%.6f", max_mod) + " over " + std::to_string(samples) +
                                                " samples, v->0 rel err " + fmt("%.2e", worst) + " (tol 1e-6)"};
}

}  // namespace

// Optional arguments name the criteria to run, e.g. `acceptance AC-3 AC-5`.
int main(int argc, char** argv) {
  const std::vector<std::string> only(argv + 1, argv + argc);
  const std::vector<std::pair<const char*, Verdict (*)()>> checks = {
      {"AC-1", ac1}, {"AC-2", ac2}, {"AC-3", ac3}, {"AC-4", ac4},
      {"AC-5", ac5}, {"AC-6", ac6}, {"AC-7", ac7}, {"AC-8", ac8},
  };
  int failed = 0;
  for (const auto& [name, fn] : checks) {
    if (!only.empty() && std::find(only.begin(), only.end(), name) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %s  %s [%.1fs]\n", name, v.pass ? "PASS" : "FAIL", v.detail.c_str(), secs);
    std::fflush(stdout);
    if (!v.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
