#include "spherehit/majorant.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "spherehit/errors.hpp"

namespace spherehit::majorant {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

}  // namespace

double log_exp_tail(double y, int n0) {
  if (y < 0.0) throw DomainError("exp tail needs y >= 0");
  if (y == 0.0) return kNegInf;
  const double ly = std::log(y);
  // Sum explicitly until consecutive-term ratios drop below 1/2, then close
  // with the geometric bound term_{k} / (1 - y/(k+1)).
  double acc = kNegInf;
  int k = n0 + 1;
  double lt = k * ly - std::lgamma(k + 1.0);
  while (y / (k + 1.0) > 0.5) {
    acc = log_add(acc, lt);
    ++k;
    lt += ly - std::log(static_cast<double>(k));
  }
  return log_add(acc, lt - std::log1p(-y / (k + 1.0)));
}

int index_for(double log_pref, double y, double tol, int max_terms) {
  const double ltol = std::log(tol);
  for (int n = 0; n <= max_terms; ++n) {
    if (log_pref + log_exp_tail(y, n) <= ltol) return n;
  }
  return -1;
}

double bound_at(double log_pref, double y, int n) {
  return std::exp(log_pref + log_exp_tail(y, n));
}

double log_density_majorant(double mu, double start, double radius, double t) {
  const double d = std::abs(start - radius);
  double l = (mu + 0.5) * std::log(radius / start) + std::log(d) -
             0.5 * std::log(2.0 * std::numbers::pi) - 1.5 * std::log(t) - d * d / (2.0 * t);
  if (mu < 0.5) {
    if (start < radius) throw DomainError("density majorant needs mu >= 1/2 for interior starts");
    l += (0.25 - mu * mu) * t / (2.0 * radius * radius);
  }
  return l;
}

double log_tail_majorant(double mu, double start, double radius, double t) {
  const double d = std::abs(start - radius);
  double l = (mu + 0.5) * std::log(radius / start) + std::log(std::erf(d / std::sqrt(2.0 * t)));
  if (mu < 0.5) {
    if (start < radius) throw DomainError("tail majorant needs mu >= 1/2 for interior starts");
    // the Girsanov weight is bounded by e^{(1/4-mu^2) s/(2r^2)} only on [0, s];
    // no finite bound over the whole tail
    return std::numeric_limits<double>::infinity();
  }
  return l;
}

}  // namespace spherehit::majorant
