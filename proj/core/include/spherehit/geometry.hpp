#pragma once

#include <vector>

namespace spherehit {

// Sphere of radius r centred at the origin, Brownian motion started at x with
// drift v, all in dimension d >= 2.
class Geometry {
 public:
  Geometry(int dim, double radius, std::vector<double> start, std::vector<double> drift);

  int dim() const noexcept { return dim_; }
  double radius() const noexcept { return radius_; }
  const std::vector<double>& start() const noexcept { return start_; }
  const std::vector<double>& drift() const noexcept { return drift_; }

  double nu() const noexcept { return 0.5 * (dim_ - 2); }
  double start_norm() const noexcept { return start_norm_; }
  double drift_norm() const noexcept { return drift_norm_; }
  // <v, x>
  double drift_dot_start() const noexcept { return dot_; }

  bool has_drift() const noexcept { return drift_norm_ > 0.0; }
  bool exterior() const noexcept { return start_norm_ > radius_; }
  bool interior() const noexcept { return start_norm_ < radius_; }
  // |x| == r: the hitting time is 0 almost surely.
  bool on_sphere() const noexcept { return start_norm_ == radius_; }

  // Same sphere and start, different drift.
  Geometry with_drift(std::vector<double> drift) const;

 private:
  int dim_;
  double radius_;
  std::vector<double> start_;
  std::vector<double> drift_;
  double start_norm_;
  double drift_norm_;
  double dot_;
};

// alpha = <v, x> / (|v| |x|), clamped to [-1, 1].
double direction_cosine(const Geometry& geom);

class SeriesControl {
 public:
  SeriesControl() = default;
  SeriesControl(double tol, int max_terms);

  double tol() const noexcept { return tol_; }
  int max_terms() const noexcept { return max_terms_; }

 private:
  double tol_ = 1e-10;
  int max_terms_ = 400;
};

struct DensityEstimate {
  double value = 0.0;
  // Certified truncation bound plus the inversion error estimate.
  double trunc_bound = 0.0;
  int terms_used = 0;
  bool underflow_flag = false;
  int nodes_used = 0;
};

}  // namespace spherehit
