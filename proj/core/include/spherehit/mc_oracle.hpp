#pragma once

#include <cstdint>
#include <vector>

#include "spherehit/geometry.hpp"

// Monte Carlo ground truth for the first hitting of the sphere by
// B_t + v t, simulated with Euler steps and a Brownian-bridge crossing test.
namespace spherehit::mc {

class McRun {
 public:
  // dt is the step used next to the sphere. Away from it the step grows
  // with the squared distance (capped at t_max / 100).
  McRun(std::uint64_t seed, std::int64_t n_paths, double dt, double t_max,
        bool bridge_correction = true);

  std::uint64_t seed() const noexcept { return seed_; }
  std::int64_t n_paths() const noexcept { return n_paths_; }
  double dt() const noexcept { return dt_; }
  double t_max() const noexcept { return t_max_; }
  bool bridge_correction() const noexcept { return bridge_; }

 private:
  std::uint64_t seed_;
  std::int64_t n_paths_;
  double dt_;
  double t_max_;
  bool bridge_;
};

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  // Upper bound on the bias from censoring at t_max, when one is known.
  double bias_bound = 0.0;
  // Censored fraction exceeds ten standard errors.
  bool censoring_warning = false;
};

struct Histogram {
  std::vector<double> edges;
  std::vector<std::int64_t> counts;
};

struct McResult {
  std::int64_t n_paths = 0;
  std::int64_t hit_count = 0;
  double t_max = 0.0;
  double radius = 0.0;
  std::vector<double> start;
  std::vector<double> drift;
  // Sorted by time; hit_positions[i] belongs to hit_times[i].
  std::vector<double> hit_times;
  std::vector<std::vector<double>> hit_positions;
  Estimate hit_probability;
  Histogram histogram;  // Freedman-Diaconis bins over hit_times

  std::int64_t censored() const noexcept { return n_paths - hit_count; }
};

// Counter-based Philox4x32-10. Path i of a run with seed s draws from the
// stream keyed by s with counter (k, i), k = 0, 1, ...
class Philox {
 public:
  Philox(std::uint64_t seed, std::uint64_t stream) noexcept;
  // Uniform on (0, 1), 53-bit resolution.
  double uniform() noexcept;
  double normal() noexcept;

 private:
  void refill() noexcept;

  std::uint32_t key_[2];
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::uint32_t out_[4] = {};
  int used_ = 4;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Bit-identical for any thread count (0 = hardware concurrency).
McResult simulate(const Geometry& geom, const McRun& run, unsigned threads = 0);

// P(t < sigma < inf) estimated by P(t < sigma <= t_max).
Estimate empirical_tail(const McResult& res, double t);

// E[exp(<v, B_sigma> - lam sigma); sigma < inf] for driftless B, v taken from
// geom. Paths simulated with a drift u are reweighted by
// exp(-<u, B_sigma - x> + |u|^2 sigma / 2).
Estimate empirical_joint_lt(const McResult& res, double lam, const Geometry& geom);

// Mean density of sigma over [t0, t1).
Estimate empirical_density(const McResult& res, double t0, double t1);

struct KsResult {
  double statistic = 0.0;
  double p_value = 0.0;
  std::int64_t n = 0;
};

// Exact CDF of <x/|x|, B_sigma/r> given sigma < inf for driftless motion in
// d = 3 (Poisson kernel; uniform only in the limit |x| -> 0).
double position_cosine_cdf(double start_norm, double radius, double u);

// Kolmogorov-Smirnov test of the hit positions of a driftless d = 3 run
// against position_cosine_cdf. Censoring at t_max drops late hits, which land
// closer to uniform, so the run needs P(t_max < sigma < inf) well below the
// statistic's resolution 1/sqrt(n).
KsResult position_ks_test(const McResult& res);

Histogram freedman_diaconis(const std::vector<double>& sorted);

}  // namespace spherehit::mc
