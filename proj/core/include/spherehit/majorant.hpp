#pragma once

// Tail bounds shared by every series in the library. All of them reduce to
// the exponential-series tail sum_{n > N} y^n / n! times a prefactor.
namespace spherehit::majorant {

// log of an upper bound on sum_{n > n0} y^n / n!  (-inf when y == 0).
double log_exp_tail(double y, int n0);

// Smallest N in [0, max_terms] with exp(log_pref) * tail(y, N) <= tol, or -1
// when even max_terms does not reach tol.
int index_for(double log_pref, double y, double tol, int max_terms);

// Bound achieved at N: exp(log_pref) * tail(y, N).
double bound_at(double log_pref, double y, int n);

// log of the Girsanov majorant for the driftless hitting density of order mu
// (mu >= 1/2, or an exterior start):
//   (r/a)^{mu+1/2} |a-r| / sqrt(2 pi t^3) exp(-(a-r)^2/(2t)) [* e^{(1/4-mu^2) t/(2r^2)}]
double log_density_majorant(double mu, double start, double radius, double t);

// log of the matching majorant for P(t < sigma_mu < inf).
double log_tail_majorant(double mu, double start, double radius, double t);

}  // namespace spherehit::majorant
