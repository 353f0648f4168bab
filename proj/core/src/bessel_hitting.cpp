#include "spherehit/bessel_hitting.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "ik_core.hpp"
#include "spectral.hpp"
#include "spherehit/errors.hpp"
#include "spherehit/majorant.hpp"

namespace spherehit::hitting {

namespace {

using cd = std::complex<double>;

constexpr double kUnderflow = 1e-300;
constexpr double kRemovableGap = 0.05;
constexpr int kRingPoints = 24;
// The cut integrand oscillates against e^{-(a-r)^2/(2t)}: keep that above e^{-4}
constexpr double kCutGapTime = 0.125;
// and keep k a moderate on the Gaussian window k <~ 15/sqrt(t).
constexpr double kCutScaleTime = 0.05;

// log Z_order(a, r) at s, K-ratio outside and I-ratio inside.
template <class T>
T log_z(double order, double a, double r, T s) {
  const T u = a * s;
  const T w = r * s;
  const auto ku = detail::log_k_scaled(order, u);
  const auto kw = detail::log_k_scaled(order, w);
  if (a > r) return ku.log_scaled - kw.log_scaled - (a - r) * s;
  // I_m(z) = 1 / (z K_m(z) (K_{m+1}/K_m + I_{m+1}/I_m))
  using std::log;
  const T pu = ku.ratio + detail::i_ratio_cf(order, u);
  const T pw = kw.ratio + detail::i_ratio_cf(order, w);
  return std::log(r / a) + kw.log_scaled - ku.log_scaled + log(pw) - log(pu) - (r - a) * s;
}

// out[n] = (r/a)^{mu0+n} Z_{mu0+n}(a, r; s) e^{|a-r| s}; returns -|a-r| s.
cd radial_ladder(double mu0, int n_max, double a, double r, cd s, std::span<cd> out) {
  const cd u = a * s;
  const cd w = r * s;
  const double lra = std::log(r / a);
  const auto ku = detail::log_k_scaled(mu0, u);
  const auto kw = detail::log_k_scaled(mu0, w);
  cd qu = ku.ratio;
  cd qw = kw.ratio;
  if (a > r) {
    cd cur = std::exp(ku.log_scaled - kw.log_scaled + mu0 * lra);
    out[0] = cur;
    for (int n = 1; n <= n_max; ++n) {
      cur *= (r / a) * (qu / qw);
      out[static_cast<std::size_t>(n)] = cur;
      const double order = mu0 + n;
      qu = 1.0 / qu + 2.0 * order / u;
      qw = 1.0 / qw + 2.0 * order / w;
    }
    return -(a - r) * s;
  }
  // I_{m+1}/I_m by CF1 at the top order, then backward.
  std::vector<cd> rho_u(static_cast<std::size_t>(n_max) + 1);
  std::vector<cd> rho_w(static_cast<std::size_t>(n_max) + 1);
  rho_u[n_max] = detail::i_ratio_cf(mu0 + n_max, u);
  rho_w[n_max] = detail::i_ratio_cf(mu0 + n_max, w);
  for (int n = n_max; n >= 1; --n) {
    const double order = mu0 + n;
    rho_u[n - 1] = 1.0 / (2.0 * order / u + rho_u[n]);
    rho_w[n - 1] = 1.0 / (2.0 * order / w + rho_w[n]);
  }
  cd lk = kw.log_scaled - ku.log_scaled;  // log K_m(w)/K_m(u) + (w - u)
  for (int n = 0; n <= n_max; ++n) {
    const auto i = static_cast<std::size_t>(n);
    const double order = mu0 + n;
    out[i] = std::exp((order + 1.0) * lra + lk) * (qw + rho_w[i]) / (qu + rho_u[i]);
    lk += std::log(qw) - std::log(qu);
    qu = 1.0 / qu + 2.0 * (order + 1.0) / u;
    qw = 1.0 / qw + 2.0 * (order + 1.0) / w;
  }
  return -(r - a) * s;
}

double total_mass(double mu, double a, double r) {
  if (a > r && mu > 0.0) return std::pow(r / a, 2.0 * mu);
  return 1.0;
}

void check_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("time must be positive and finite");
}

void check_radial(double mu0, int n_max, double a, double r) {
  sf::Order{mu0};
  if (n_max < 0) throw DomainError("ladder length must be nonnegative");
  if (!(a > 0.0) || !(r > 0.0) || !std::isfinite(a) || !std::isfinite(r)) {
    throw DomainError("start and radius must be positive");
  }
  if (a == r) throw DegenerateGeometry("start on the sphere: hitting time is identically 0");
}

// First positive zero of J_mu, bracketed upwards from the lower bound
// j_{mu,1}^2 > (mu+1)(mu+5) and refined by bisection.
double first_bessel_zero(double mu) {
  double lo = std::sqrt((mu + 1.0) * (mu + 5.0));
  const double step = 0.25 * std::max(1.0, std::cbrt(mu));
  double hi = lo + step;
  int guard = 0;
  while (sf::bessel_j(sf::Order(mu), hi) > 0.0) {
    lo = hi;
    hi += step;
    if (++guard > 400) return std::sqrt((mu + 1.0) * (mu + 5.0));
  }
  for (int k = 0; k < 60 && hi - lo > 1e-14 * hi; ++k) {
    const double mid = 0.5 * (lo + hi);
    (sf::bessel_j(sf::Order(mu), mid) > 0.0 ? lo : hi) = mid;
  }
  return lo;
}

// Interior transforms are meromorphic in lam with poles at -j_{mu,k}^2/(2r^2)
// on the negative axis, which every contour here leaves on its left.
// Inverting F(lam - c) e^{-ct} with c just short of the first pole removes
// the exponential decay that would otherwise sink the density below roundoff.
double interior_shift(double mu0, double a, double r, double t) {
  if (a >= r) return 0.0;
  const double j = first_bessel_zero(mu0);
  return std::max(0.0, j * j / (2.0 * r * r) - 2.0 / t);
}

// Outside the ball and away from small t, integrate along the cut instead
// of inverting through the branch point at lam = 0. Only the default
// contour method is replaced; the others stay available for cross-checks.
bool use_cut(double mu, double a, double r, double t, double damp, const InversionControl& ctrl) {
  if (a <= r || ctrl.method() != InversionMethod::talbot_fixed) return false;
  if (damp == 0.0 && mu <= 0.25) return false;
  return t >= kCutGapTime * (a - r) * (a - r) && t >= kCutScaleTime * a * a;
}

LadderResult from_cut(const detail::SpectralResult& s) {
  return LadderResult{s.values, s.errors, s.nodes_used, s.converged};
}

}  // namespace

RadialInstance::RadialInstance(sf::Order mu, double start, double radius)
    : mu_(mu.value()), start_(start), radius_(radius) {
  check_radial(mu_, 0, start, radius);
}

double z_ratio(sf::Order mu, double lam, double drift_norm, double xi, double eta) {
  if (!(lam > 0.0)) throw DomainError("z_ratio: lam must be positive");
  if (!(drift_norm >= 0.0)) throw DomainError("z_ratio: drift norm must be nonnegative");
  if (!(xi > 0.0) || !(eta > 0.0)) throw DomainError("z_ratio: xi and eta must be positive");
  if (xi == eta) throw DomainError("z_ratio: xi and eta must differ");
  const double s = std::sqrt(2.0 * lam + drift_norm * drift_norm);
  return std::exp(log_z(mu.value(), xi, eta, s));
}

double hitting_lt(const RadialInstance& inst, double lam) {
  return clock_lt(sf::Order(inst.mu()), inst.start(), inst.radius(), lam, 0.0);
}

double hitting_probability(const RadialInstance& inst) {
  return total_mass(inst.mu(), inst.start(), inst.radius());
}

double clock_lt(sf::Order mu, double start, double radius, double a, double b) {
  check_radial(mu.value(), 0, start, radius);
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("clock_lt: a must be positive");
  if (!(b >= 0.0) || !std::isfinite(b)) throw DomainError("clock_lt: b must be nonnegative");
  const double m = mu.value();
  const double order = b == 0.0 ? m : std::hypot(m, b);
  const double s = std::sqrt(2.0 * a);
  return std::exp(m * std::log(radius / start) + log_z(order, start, radius, s));
}

double asymptotic_constant(sf::Order mu, double start, double radius) {
  if (!(radius > 0.0)) throw DomainError("asymptotic_constant: radius must be positive");
  if (!(start > radius)) throw DomainError("asymptotic_constant: needs start > radius");
  const double m = mu.value();
  if (m == 0.0) return 2.0 * std::log(start / radius);
  const double lpre = 2.0 * m * std::log(radius) - m * std::numbers::ln2 - sf::log_gamma(m);
  return std::exp(lpre) * -std::expm1(2.0 * m * std::log(radius / start));
}

std::vector<double> lt_ladder(double mu0, int n_max, double a, double r, double s) {
  check_radial(mu0, n_max, a, r);
  if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("lt_ladder: s must be positive");
  std::vector<cd> buf(static_cast<std::size_t>(n_max) + 1);
  const double scale = std::exp(radial_ladder(mu0, n_max, a, r, cd(s, 0.0), buf).real());
  std::vector<double> out(buf.size());
  for (std::size_t n = 0; n < buf.size(); ++n) out[n] = buf[n].real() * scale;
  return out;
}

LadderResult density_ladder(double mu0, int n_max, double a, double r, double t,
                            const InversionControl& ctrl, std::span<const double> abs_tol) {
  check_radial(mu0, n_max, a, r);
  check_time(t);
  const std::size_t len = static_cast<std::size_t>(n_max) + 1;
  if (use_cut(mu0, a, r, t, -1.0, ctrl)) {
    return from_cut(detail::spectral_density(mu0, n_max, a, r, t, ctrl.target_rel_err(), abs_tol));
  }
  const double shift = interior_shift(mu0, a, r, t);
  const VectorTransform f = [&](cd lam, std::span<cd> out) {
    return radial_ladder(mu0, n_max, a, r, std::sqrt(2.0 * (lam - shift)), out);
  };
  // (a-r)^2/(2t) sets how far right the contour must sit at small t
  const double gap = (a - r) * (a - r) / (2.0 * t);
  const int hint = gap > 1e4 ? 10000 : static_cast<int>(std::ceil(gap));
  std::vector<double> tol(abs_tol.begin(), abs_tol.end());
  const double grow = std::exp(shift * t);
  for (double& x : tol) x *= grow;
  InversionResult inv = invert(f, len, t, ctrl, tol, hint);
  const double shrink = std::exp(-shift * t);
  for (double& v : inv.values) v *= shrink;
  for (double& e : inv.errors) e *= shrink;
  return LadderResult{inv.values, inv.errors, inv.nodes_used, inv.converged};
}

LadderResult tail_ladder(double mu0, int n_max, double a, double r, double t, double damp,
                         const InversionControl& ctrl, std::span<const double> abs_tol) {
  check_radial(mu0, n_max, a, r);
  check_time(t);
  if (!(damp >= 0.0) || !std::isfinite(damp)) throw DomainError("damp must be nonnegative");
  if (use_cut(mu0, a, r, t, damp, ctrl)) {
    return from_cut(
        detail::spectral_tail(mu0, n_max, a, r, t, damp, ctrl.target_rel_err(), abs_tol));
  }
  const std::size_t len = static_cast<std::size_t>(n_max) + 1;
  // U(lam) = (F(c) - F(lam)) / (lam - c) transforms e^{ct} int_t^inf e^{-cs} p(s) ds.
  std::vector<double> fc(len);
  if (damp == 0.0) {
    for (std::size_t n = 0; n < len; ++n) fc[n] = total_mass(mu0 + n, a, r);
  } else {
    std::vector<cd> buf(len);
    const cd ls = radial_ladder(mu0, n_max, a, r, cd(std::sqrt(2.0 * damp), 0.0), buf);
    for (std::size_t n = 0; n < len; ++n) fc[n] = (buf[n] * std::exp(ls)).real();
  }
  const double shift = interior_shift(mu0, a, r, t);
  auto shifted = [&](cd lam, std::span<cd> out) {
    const cd ls = radial_ladder(mu0, n_max, a, r, std::sqrt(2.0 * lam), out);
    const cd e = std::exp(ls);
    const cd inv_gap = 1.0 / (lam - damp);
    for (std::size_t n = 0; n < len; ++n) out[n] = (fc[n] - out[n] * e) * inv_gap;
  };
  // U is analytic at lam = damp; the shifted contour can pass close to it
  // even when damp = 0.
  const double ring_scale = damp > 0.0 ? damp : shift;
  std::vector<cd> ring(len);
  const VectorTransform f = [&](cd z, std::span<cd> out) {
    const cd lam = z - shift;
    if (ring_scale == 0.0 || std::abs(lam - damp) >= kRemovableGap * ring_scale) {
      shifted(lam, out);
    } else {
      // Near the removable point use the mean value over a small circle.
      for (std::size_t n = 0; n < len; ++n) out[n] = 0.0;
      for (int k = 0; k < kRingPoints; ++k) {
        const double phi = 2.0 * std::numbers::pi * (k + 0.5) / kRingPoints;
        shifted(lam + 0.25 * ring_scale * std::exp(cd(0.0, phi)), ring);
        for (std::size_t n = 0; n < len; ++n) out[n] += ring[n] / double(kRingPoints);
      }
    }
    return cd(0.0, 0.0);
  };
  std::vector<double> scaled_tol(abs_tol.begin(), abs_tol.end());
  const double grow = std::exp((damp + shift) * t);
  for (double& x : scaled_tol) x *= grow;
  InversionResult inv = invert(f, len, t, ctrl, scaled_tol);
  const double shrink = std::exp(-(damp + shift) * t);
  for (double& v : inv.values) v *= shrink;
  for (double& e : inv.errors) e *= shrink;
  return LadderResult{inv.values, inv.errors, inv.nodes_used, inv.converged};
}

DensityEstimate hitting_density(const RadialInstance& inst, double t, const InversionControl& ctrl) {
  check_time(t);
  DensityEstimate est;
  const double mu_bound = inst.exterior() ? inst.mu() : std::max(inst.mu(), 0.5);
  if (majorant::log_density_majorant(mu_bound, inst.start(), inst.radius(), t) <
      std::log(kUnderflow)) {
    est.underflow_flag = true;
    return est;
  }
  const std::vector<double> floor{kUnderflow};
  const LadderResult lr =
      density_ladder(inst.mu(), 0, inst.start(), inst.radius(), t, ctrl, floor);
  est.trunc_bound = lr.errors[0];
  est.nodes_used = lr.nodes_used;
  if (!lr.converged) {
    throw InversionError("density inversion missed its target at t = " + std::to_string(t),
                         lr.errors[0] / std::abs(lr.values[0]));
  }
  est.value = std::max(lr.values[0], 0.0);
  return est;
}

double hitting_tail(const RadialInstance& inst, double t, double damp, const InversionControl& ctrl) {
  check_time(t);
  const std::vector<double> floor{kUnderflow};
  const LadderResult lr =
      tail_ladder(inst.mu(), 0, inst.start(), inst.radius(), t, damp, ctrl, floor);
  if (!lr.converged) {
    throw InversionError("tail inversion missed its target at t = " + std::to_string(t),
                         lr.errors[0] / std::abs(lr.values[0]));
  }
  return std::max(lr.values[0], 0.0);
}

}  // namespace spherehit::hitting
