#pragma once

#include <vector>

#include "spherehit/geometry.hpp"
#include "spherehit/laplace_inversion.hpp"

// Hitting time of the sphere by Brownian motion with drift, as a series of
// driftless Bessel hitting densities of orders nu, nu + 1, ...
namespace spherehit::drift {

// Series coefficients c_0 .. c_{n_max} in
//   p^{(v)}(t) = e^{-<v,x> - |v|^2 t/2} sum_n c_n p_{nu+n}(t).
// d >= 3: c_n = 2^nu Gamma(nu) (nu+n) C_n^nu(alpha) I_{nu+n}(|v|r) |x|^n / (|v|^nu r^{nu+n});
// d = 2:  c_0 = I_0(|v|r), c_n = n C_n^0(alpha) I_n(|v|r) (|x|/r)^n.
// With v = 0 only c_0 = 1 survives.
std::vector<double> coefficients(const Geometry& geom, int n_max);

// Density of the hitting time at t. trunc_bound holds the certified
// truncation bound plus the inversion error estimate; both are kept below
// ctrl.tol() or TruncationError / InversionError is thrown.
DensityEstimate drift_density(const Geometry& geom, double t, const SeriesControl& ctrl = {},
                              const InversionControl& inv = {});

// Smallest N with e^{|v|r - <v,x> - damp} sum_{n>N} (2|v||x|)^n / n! <= tol.
int truncation_index(const Geometry& geom, double tol, double damp);

// P(t < sigma^{(v)} < inf), same error contract as drift_density.
DensityEstimate drift_tail(const Geometry& geom, double t, const SeriesControl& ctrl = {},
                           const InversionControl& inv = {});

// Leading large-t behaviour of drift_tail for an exterior start:
//   d = 2:  (2 L(0)/|v|^2) I_0(|v|r) e^{-<v,x>} e^{-|v|^2 t/2} / (t log^2 t)
//   d >= 3: (2^{nu+1} Gamma(nu+1) L(nu)/|v|^2) I_nu(|v|r)/(|v|r)^nu e^{-<v,x>} e^{-|v|^2 t/2} / t^{nu+1}
double tail_asymptotic(const Geometry& geom, double t);

}  // namespace spherehit::drift
