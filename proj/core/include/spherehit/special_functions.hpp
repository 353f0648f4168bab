#pragma once

#include <vector>

namespace spherehit::sf {

// Nonnegative real order of a Bessel function or index of a Gegenbauer
// polynomial.
class Order {
 public:
  explicit Order(double mu);
  double value() const noexcept { return mu_; }

 private:
  double mu_;
};

// Lanczos approximation (g = 7, 9 terms), reflection below 1/2.
double gamma(double x);
// log Gamma(x) for x > 0.
double log_gamma(double x);

// Modified Bessel function of the first kind, xi >= 0.
double bessel_i(Order mu, double xi);
// log I_mu(xi) for xi > 0; finite where bessel_i would overflow.
double log_bessel_i(Order mu, double xi);
// Macdonald function K_nu(xi), xi > 0. Any real order; K_{-nu} = K_nu.
double bessel_k(double nu, double xi);
// Bessel function of the first kind, xi >= 0.
double bessel_j(Order mu, double xi);

// phi_{nu,n}(xi) = xi^{-nu} I_{nu+n}(xi) for n = 0..n_max, including the
// removable point xi = 0. Entries that underflow come back as 0.
std::vector<double> phi_sequence(Order nu, int n_max, double xi);
// Same quantities as logs (-inf where the value is exactly 0).
std::vector<double> log_phi_sequence(Order nu, int n_max, double xi);

// Gegenbauer polynomial C_n^nu(alpha) for |alpha| <= 1. The nu = 0 family is
// C_0^0 = 1, C_n^0(cos t) = (2/n) cos(n t).
double gegenbauer(int n, Order nu, double alpha);
// C_0^nu(alpha) .. C_{n_max}^nu(alpha) by the three-term recurrence.
std::vector<double> gegenbauer_sequence(int n_max, Order nu, double alpha);

enum class BoundKind { bessel_tail, gegenbauer };

struct BoundCertificate {
  int n = 0;
  double nu = 0.0;
  double xi = 0.0;  // unused (0) for the Gegenbauer bound
  double bound_value = 0.0;
  // The bounded quantity evaluated directly: xi^{-nu} I_{nu+n}(xi), or
  // max_{|alpha|<=1} |C_n^nu(alpha)|.
  double bounded_value = 0.0;
  BoundKind which = BoundKind::bessel_tail;

  bool holds() const noexcept { return bounded_value <= bound_value; }
};

// |C_n^nu(alpha)| <= rho_nu 4^n Gamma(nu+n) / n!, rho_0 = 1,
// rho_nu = 1/Gamma(nu). Requires n >= 1.
BoundCertificate gegenbauer_bound(int n, Order nu);

// xi^{-mu} I_{mu+n}(xi) <= xi^n e^xi / (2^{mu+n} Gamma(mu+n+1)). Requires
// n >= 1, xi > 0.
BoundCertificate bessel_tail_bound(int n, Order mu, double xi);

// Partial sum of
//   e^{alpha xi} = 2^mu Gamma(mu) sum_n (mu+n) C_n^mu(alpha) xi^{-mu} I_{mu+n}(xi)
// over n < n_terms. Requires mu > 0, xi > 0, |alpha| <= 1.
double exp_gegenbauer_expansion(double alpha, double xi, double mu, int n_terms);

}  // namespace spherehit::sf
