// Exterior hitting densities and damped tails as integrals along the cut
// lam = -k^2/2 of the transform. Outside the ball
//   p_mu(t) = (1/pi) int_0^inf e^{-k^2 t/2} k G_mu(k) dk,
//   G_mu(k) = (r/a)^mu (J(rk) Y(ak) - J(ak) Y(rk)) / (J(rk)^2 + Y(rk)^2),
// with J = J_mu, Y = Y_mu. At large t this is far better conditioned than a
// contour through the branch point, where the transform differs from its
// value at 0 only by O(lam^mu).
#pragma once

#include <span>
#include <vector>

namespace spherehit::detail {

// log|J_{mu0+n}(y)|, log|Y_{mu0+n}(y)| and their signs for n = 0..n_max, y > 0.
// J comes from Miller's backward recurrence, Y from forward recurrence
// started at the reduced order, so both keep full relative accuracy.
struct JyLadder {
  std::vector<double> log_j;
  std::vector<double> log_y;
  std::vector<int> sign_j;
  std::vector<int> sign_y;
};
JyLadder jy_ladder(double mu0, int n_max, double y);

// G_{mu0+n}(k), n = 0..n_max.
std::vector<double> cut_weight(double mu0, int n_max, double a, double r, double k);

struct SpectralResult {
  std::vector<double> values;
  std::vector<double> errors;
  int nodes_used = 0;
  bool converged = false;
};

// p_{mu0+n}(t) for an exterior start. A component is accepted once its
// quadrature error is below max(rel_tol |value|, abs_tol[n]).
SpectralResult spectral_density(double mu0, int n_max, double a, double r, double t,
                                double rel_tol, std::span<const double> abs_tol);

// int_t^inf e^{-damp s} p_{mu0+n}(s) ds for an exterior start; needs damp > 0
// or mu0 > 1/4 so the integrand stays integrable at k = 0 in double.
SpectralResult spectral_tail(double mu0, int n_max, double a, double r, double t, double damp,
                             double rel_tol, std::span<const double> abs_tol);

}  // namespace spherehit::detail
