#pragma once

#include <complex>

#include "spherehit/bessel_hitting.hpp"
#include "spherehit/geometry.hpp"

namespace spherehit::transforms {

// E[exp(-lam sigma^{(v)}); sigma^{(v)} < inf], summed until the certified tail
// is below ctrl.tol(). Any drift is accepted; v = 0 gives hitting_lt.
double drift_lt(const Geometry& geom, double lam, const SeriesControl& ctrl = {});

// E[exp(<v, B_sigma> - lam sigma); sigma < inf] for driftless B. Satisfies
// drift_lt(lam) = e^{-<v,x>} joint_lt(lam + |v|^2/2).
double joint_lt(const Geometry& geom, double lam, const SeriesControl& ctrl = {});

// Expectation of exp(xi <v, theta_t>) for spherical Brownian motion theta on
// S^{dim-1} with <theta_0, v/|v|> = alpha.
struct SphericalQuery {
  double t = 0.0;
  double xi = 0.0;
  double alpha = 0.0;
  int dim = 3;
  double drift_norm = 1.0;
};

double sphere_expectation(const SphericalQuery& q, const SeriesControl& ctrl = {});

// E[exp(i <v, B_sigma> - lam sigma); sigma < inf], dim >= 3.
std::complex<double> fourier_laplace(const Geometry& geom, double lam,
                                     const SeriesControl& ctrl = {});

// Centred finite-difference residual of
//   g_t = -xi^2 g_xixi - (d-1) xi g_xi + xi^2 g
// for g(t, xi) = sphere_expectation at (2t, xi/|v|), evaluated at g's
// coordinates (q.t, q.xi). Needs q.t > h_t and q.xi > h_xi; q.drift_norm is
// irrelevant since g depends on xi only through |v| xi.
double pde_residual(const SphericalQuery& q, double h_t, double h_xi);

// Joint transform of the Bessel hitting time and its additive clock.
inline double clock_joint_lt(sf::Order mu, double start, double radius, double a, double b) {
  return hitting::clock_lt(mu, start, radius, a, b);
}

}  // namespace spherehit::transforms
