#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "spherehit/geometry.hpp"
#include "spherehit/special_functions.hpp"

namespace spherehit::detail {

// sign * exp(log_abs); sign == 0 marks an exact zero.
struct LogTerm {
  double log_abs = -std::numeric_limits<double>::infinity();
  int sign = 0;
};

class NeumaierSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    comp_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x : (x - t) + sum_;
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline LogTerm log_term(double x) {
  if (x == 0.0) return {};
  return {std::log(std::abs(x)), x > 0.0 ? 1 : -1};
}

// c_n scaled by (|x|/r)^n, with the Bessel factor taken at z = |v| xi:
//   d >= 3: 2^nu Gamma(nu) (nu+n) C_n^nu(alpha) z^{-nu} I_{nu+n}(z) (|x|/r)^n
//   d = 2:  c_0 = I_0(z), c_n = n C_n^0(alpha) I_n(z) (|x|/r)^n
inline std::vector<LogTerm> drift_coefficients(const Geometry& geom, int n_max, double xi) {
  std::vector<LogTerm> c(static_cast<std::size_t>(n_max) + 1);
  if (!geom.has_drift()) {
    c[0] = {0.0, 1};
    return c;
  }
  const double nu = geom.nu();
  const double z = geom.drift_norm() * xi;
  const double alpha = direction_cosine(geom);
  const std::vector<double> lphi = sf::log_phi_sequence(sf::Order(nu), n_max, z);
  const std::vector<double> geg = sf::gegenbauer_sequence(n_max, sf::Order(nu), alpha);
  const double lratio = std::log(geom.start_norm() / geom.radius());
  const double lpre = nu > 0.0 ? nu * std::numbers::ln2 + sf::log_gamma(nu) : 0.0;
  for (int n = 0; n <= n_max; ++n) {
    const auto i = static_cast<std::size_t>(n);
    // the d = 2 weight n vanishes at n = 0, where c_0 = I_0 directly
    const double weight = nu > 0.0 ? nu + n : (n == 0 ? 1.0 : static_cast<double>(n));
    const LogTerm g = log_term(geg[i]);
    if (g.sign == 0 || !std::isfinite(lphi[i])) continue;
    c[i] = {lpre + std::log(weight) + g.log_abs + lphi[i] + n * lratio, g.sign};
  }
  return c;
}

inline std::vector<LogTerm> drift_coefficients(const Geometry& geom, int n_max) {
  return drift_coefficients(geom, n_max, geom.radius());
}

}  // namespace spherehit::detail
