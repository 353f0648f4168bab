#pragma once

#include <span>
#include <vector>

#include "spherehit/geometry.hpp"
#include "spherehit/laplace_inversion.hpp"
#include "spherehit/special_functions.hpp"

// First hitting time of the level r by a Bessel process of index mu started
// at |x|, i.e. the radial part of driftless Brownian motion hitting a sphere.
namespace spherehit::hitting {

class RadialInstance {
 public:
  // start == radius is rejected with DegenerateGeometry.
  RadialInstance(sf::Order mu, double start, double radius);

  double mu() const noexcept { return mu_; }
  double start() const noexcept { return start_; }
  double radius() const noexcept { return radius_; }
  bool exterior() const noexcept { return start_ > radius_; }

 private:
  double mu_;
  double start_;
  double radius_;
};

// K_mu(xi s)/K_mu(eta s) for xi > eta, I_mu(xi s)/I_mu(eta s) for xi < eta,
// s = sqrt(2 lam + drift_norm^2).
double z_ratio(sf::Order mu, double lam, double drift_norm, double xi, double eta);

// E[exp(-lam sigma_mu); sigma_mu < inf] = (r/|x|)^mu Z_mu(|x|, r).
double hitting_lt(const RadialInstance& inst, double lam);

// P(sigma_mu < inf): (r/|x|)^{2 mu} outside (mu > 0), otherwise 1.
double hitting_probability(const RadialInstance& inst);

// Density of sigma_mu at t by numerical Laplace inversion; with the default
// method, exterior starts at larger t integrate along the branch cut of the
// transform instead. Returns exactly 0
// with underflow_flag set where a rigorous majorant is below 1e-300. Throws
// InversionError when the error estimate misses ctrl.target_rel_err().
DensityEstimate hitting_density(const RadialInstance& inst, double t,
                                const InversionControl& ctrl = {});

// int_t^inf e^{-damp s} p_mu(s) ds, nonincreasing in t.
double hitting_tail(const RadialInstance& inst, double t, double damp,
                    const InversionControl& ctrl = {});

// L(mu) with p_mu(t) ~ L(mu) / t^{mu+1}; L(0) = 2 log(|x|/r) with
// p_0(t) ~ L(0) / (t log^2 t). Needs start > radius.
double asymptotic_constant(sf::Order mu, double start, double radius);

// E[exp(-a tau - b^2 S_tau / 2)] where S is the additive clock int R^{-2};
// a Bessel-type ratio of order sqrt(mu^2 + b^2). b = 0 gives hitting_lt.
double clock_lt(sf::Order mu, double start, double radius, double a, double b);

// (r/|x|)^{mu0+n} Z_{mu0+n}(|x|, r) at s = sqrt(2 lam + |v|^2), n = 0..n_max:
// the Laplace transforms of the densities of orders mu0 + n.
std::vector<double> lt_ladder(double mu0, int n_max, double start, double radius, double s);

// Densities or damped tails of the orders mu0, mu0 + 1, ..., mu0 + n_max at a
// single t, sharing one contour or one set of cut nodes. Components are
// accepted when their error estimate is below target_rel_err * |value| or
// abs_tol[n].
struct LadderResult {
  std::vector<double> values;
  std::vector<double> errors;
  int nodes_used = 0;
  bool converged = false;
};

LadderResult density_ladder(double mu0, int n_max, double start, double radius, double t,
                            const InversionControl& ctrl, std::span<const double> abs_tol = {});

LadderResult tail_ladder(double mu0, int n_max, double start, double radius, double t,
                         double damp, const InversionControl& ctrl,
                         std::span<const double> abs_tol = {});

}  // namespace spherehit::hitting
