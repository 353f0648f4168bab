#include "spherehit/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "spherehit/errors.hpp"

namespace spherehit {

namespace {

double norm(const std::vector<double>& a) {
  // hypot-style scaling keeps huge or tiny components from overflowing
  double scale = 0.0;
  for (double x : a) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (double x : a) s += (x / scale) * (x / scale);
  return scale * std::sqrt(s);
}

}  // namespace

Geometry::Geometry(int dim, double radius, std::vector<double> start, std::vector<double> drift)
    : dim_(dim), radius_(radius), start_(std::move(start)), drift_(std::move(drift)) {
  if (dim < 2) throw DomainError("dimension must be at least 2");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw DomainError("radius must be positive");
  if (start_.size() != static_cast<std::size_t>(dim)) {
    throw DomainError("start has " + std::to_string(start_.size()) + " components, expected " +
                      std::to_string(dim));
  }
  if (drift_.empty()) drift_.assign(static_cast<std::size_t>(dim), 0.0);
  if (drift_.size() != static_cast<std::size_t>(dim)) {
    throw DomainError("drift has " + std::to_string(drift_.size()) + " components, expected " +
                      std::to_string(dim));
  }
  for (double c : start_) {
    if (!std::isfinite(c)) throw DomainError("start must be finite");
  }
  for (double c : drift_) {
    if (!std::isfinite(c)) throw DomainError("drift must be finite");
  }
  start_norm_ = norm(start_);
  drift_norm_ = norm(drift_);
  if (start_norm_ == 0.0) throw DomainError("start point must differ from the centre");
  dot_ = std::inner_product(start_.begin(), start_.end(), drift_.begin(), 0.0);
}

Geometry Geometry::with_drift(std::vector<double> drift) const {
  return Geometry(dim_, radius_, start_, std::move(drift));
}

double direction_cosine(const Geometry& geom) {
  if (!geom.has_drift()) throw DomainError("direction cosine needs a nonzero drift");
  const double a = geom.drift_dot_start() / (geom.drift_norm() * geom.start_norm());
  return std::clamp(a, -1.0, 1.0);
}

SeriesControl::SeriesControl(double tol, int max_terms) : tol_(tol), max_terms_(max_terms) {
  if (!(tol > 0.0) || !std::isfinite(tol)) throw DomainError("series tol must be positive");
  if (max_terms < 1) throw DomainError("max_terms must be at least 1");
}

}  // namespace spherehit
