#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace spherehit {

enum class InversionMethod { talbot_fixed, gaver_stehfest, de_hoog };

// Immutable once built. For talbot_fixed, `nodes` is the starting node count
// of an adaptive ladder (nodes, nodes + 8, ...) that stops once two
// consecutive estimates agree to target_rel_err, or once roundoff takes over. de_hoog uses 2*nodes + 1
// abscissae; gaver_stehfest takes an even nodes <= 20.
class InversionControl {
 public:
  InversionControl() = default;
  InversionControl(InversionMethod method, int nodes, double target_rel_err);

  InversionMethod method() const noexcept { return method_; }
  int nodes() const noexcept { return nodes_; }
  double target_rel_err() const noexcept { return target_rel_err_; }

 private:
  InversionMethod method_ = InversionMethod::talbot_fixed;
  int nodes_ = 16;
  double target_rel_err_ = 1e-10;
};

// Fills out[k] with F_k(s) / exp(log_scale) and returns log_scale, so that
// transforms with huge or tiny magnitude on the contour stay representable.
using VectorTransform =
    std::function<std::complex<double>(std::complex<double> s, std::span<std::complex<double>> out)>;

struct InversionResult {
  std::vector<double> values;
  std::vector<double> errors;  // |difference| between the last two refinements
  int nodes_used = 0;
  bool converged = false;
};

// Inverts every component of F at time t. A component counts as converged when
// its error estimate is below target_rel_err * |value| or below abs_tol[k]
// (abs_tol may be empty). Never throws on non-convergence; callers inspect
// `converged`.
InversionResult invert(const VectorTransform& f, std::size_t n_components, double t,
                       const InversionControl& ctrl, std::span<const double> abs_tol = {},
                       int min_nodes = 0);

// Scalar convenience wrapper around invert().
double invert_scalar(const std::function<std::complex<double>(std::complex<double>)>& f,
                     double t, const InversionControl& ctrl, double* error = nullptr);

}  // namespace spherehit
