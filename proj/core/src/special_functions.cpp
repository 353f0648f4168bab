#include "spherehit/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

#include "ik_core.hpp"
#include "spherehit/errors.hpp"

namespace spherehit::sf {

namespace {

constexpr double kLogMax = 709.782712893384;  // log(DBL_MAX)

constexpr double kLanczosG = 7.0;
constexpr double kLanczos[] = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

// Lanczos sum A(x) for the shifted argument x = z - 1.
double lanczos_sum(double x) {
  double a = kLanczos[0];
  for (int i = 1; i < 9; ++i) a += kLanczos[i] / (x + i);
  return a;
}

double checked_exp(double log_value, const char* what) {
  if (log_value > kLogMax) {
    throw OverflowError(std::string(what) + ": result overflows double");
  }
  return std::exp(log_value);
}

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw DomainError(std::string(what) + ": argument is not finite");
}

double log_i_series(double mu, double xi) {
  const double q = 0.25 * xi * xi;
  double term = 1.0;
  double sum = 1.0;
  for (int m = 1; m < 100000; ++m) {
    term *= q / (m * (mu + m));
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return mu * std::log(0.5 * xi) - log_gamma(mu + 1.0) + std::log(sum);
}

double j_series(double mu, double xi) {
  const double q = -0.25 * xi * xi;
  double term = 1.0;
  double sum = 1.0;
  for (int m = 1; m < 100000; ++m) {
    term *= q / (m * (mu + m));
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-17) break;
  }
  const double lp = mu * std::log(0.5 * xi) - log_gamma(mu + 1.0);
  return std::exp(lp) * sum;
}

// log of the ratios I_{nu+k+1}(xi)/I_{nu+k}(xi), k = 0..n_max-1.
std::vector<double> log_i_ratios(double nu, int n_max, double xi) {
  std::vector<double> out(static_cast<std::size_t>(std::max(n_max, 0)));
  if (n_max <= 0) return out;
  double rho = detail::i_ratio_cf(nu + n_max - 1, xi);
  out[static_cast<std::size_t>(n_max - 1)] = std::log(rho);
  for (int k = n_max - 1; k >= 1; --k) {
    rho = 1.0 / (2.0 * (nu + k) / xi + rho);
    out[static_cast<std::size_t>(k - 1)] = std::log(rho);
  }
  return out;
}

}  // namespace

Order::Order(double mu) : mu_(mu) {
  if (!std::isfinite(mu) || mu < 0.0) {
    throw DomainError("order must be finite and nonnegative");
  }
}

double gamma(double x) {
  require_finite(x, "gamma");
  if (x <= 0.0 && x == std::floor(x)) throw DomainError("gamma: pole at nonpositive integer");
  if (x < 0.5) {
    // Gamma(x) Gamma(1-x) = pi / sin(pi x)
    return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma(1.0 - x));
  }
  if (x > 171.62) throw OverflowError("gamma: result overflows double");
  if (x > 10.0) {
    // Gamma(x) = Gamma(f) prod (f + k) with f in [1, 2): the product rounds far
    // less than t^{z+1/2} e^{-t} does at large t.
    const double f = x - std::floor(x) + 1.0;
    double p = gamma(f);
    for (double y = f; y < x - 0.5; y += 1.0) p *= y;
    return p;
  }
  const double z = x - 1.0;
  const double t = z + kLanczosG + 0.5;
  // Split the power so t^(z+1/2) does not overflow before e^{-t} is applied.
  const double half = std::pow(t, 0.5 * (z + 0.5));
  return std::sqrt(2.0 * std::numbers::pi) * half * (half * std::exp(-t)) * lanczos_sum(z);
}

double log_gamma(double x) {
  require_finite(x, "log_gamma");
  if (x <= 0.0) throw DomainError("log_gamma: argument must be positive");
  if (x < 0.5) {
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma(1.0 - x);
  }
  const double z = x - 1.0;
  const double t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t +
         std::log(lanczos_sum(z));
}

double log_bessel_i(Order mu, double xi) {
  require_finite(xi, "bessel_i");
  if (xi < 0.0) throw DomainError("bessel_i: argument must be nonnegative");
  const double m = mu.value();
  if (xi == 0.0) return m == 0.0 ? 0.0 : -std::numeric_limits<double>::infinity();
  if (xi <= std::max(10.0, 2.0 * m)) return log_i_series(m, xi);
  return detail::log_i_wronskian(m, xi);
}

double bessel_i(Order mu, double xi) {
  return checked_exp(log_bessel_i(mu, xi), "bessel_i");
}

double bessel_k(double nu, double xi) {
  require_finite(nu, "bessel_k");
  require_finite(xi, "bessel_k");
  if (xi <= 0.0) throw DomainError("bessel_k: argument must be positive");
  const auto lk = detail::log_k_scaled(std::abs(nu), xi);
  return checked_exp(lk.log_scaled - xi, "bessel_k");
}

double bessel_j(Order mu, double xi) {
  require_finite(xi, "bessel_j");
  if (xi < 0.0) throw DomainError("bessel_j: argument must be nonnegative");
  const double m = mu.value();
  if (xi == 0.0) return m == 0.0 ? 1.0 : 0.0;
  if (xi <= 2.0 || 0.25 * xi * xi <= 0.5 * (m + 1.0)) return j_series(m, xi);
  // J_mu(xi) = e^{i mu pi/2} I_mu(-i xi)
  const std::complex<double> z(0.0, -xi);
  const std::complex<double> li = detail::log_i_wronskian(m, z);
  const std::complex<double> phase(0.0, 0.5 * m * std::numbers::pi);
  return std::exp(li + phase).real();
}

std::vector<double> log_phi_sequence(Order nu, int n_max, double xi) {
  require_finite(xi, "phi_sequence");
  if (xi < 0.0) throw DomainError("phi_sequence: argument must be nonnegative");
  if (n_max < 0) throw DomainError("phi_sequence: n_max must be nonnegative");
  const double v = nu.value();
  std::vector<double> out(static_cast<std::size_t>(n_max) + 1,
                          -std::numeric_limits<double>::infinity());
  if (xi == 0.0) {
    out[0] = -v * std::numbers::ln2 - log_gamma(v + 1.0);
    return out;
  }
  const std::vector<double> lr = log_i_ratios(v, n_max, xi);
  double acc = log_bessel_i(nu, xi) - v * std::log(xi);
  out[0] = acc;
  for (int n = 1; n <= n_max; ++n) {
    acc += lr[static_cast<std::size_t>(n - 1)];
    out[static_cast<std::size_t>(n)] = acc;
  }
  return out;
}

std::vector<double> phi_sequence(Order nu, int n_max, double xi) {
  std::vector<double> out = log_phi_sequence(nu, n_max, xi);
  for (double& x : out) x = checked_exp(x, "phi_sequence");
  return out;
}

std::vector<double> gegenbauer_sequence(int n_max, Order nu, double alpha) {
  require_finite(alpha, "gegenbauer");
  if (std::abs(alpha) > 1.0) throw DomainError("gegenbauer: |alpha| must not exceed 1");
  if (n_max < 0) throw DomainError("gegenbauer: degree must be nonnegative");
  const double v = nu.value();
  std::vector<double> c(static_cast<std::size_t>(n_max) + 1);
  c[0] = 1.0;
  if (n_max == 0) return c;
  if (v == 0.0) {
    // C_n^0 = (2/n) T_n
    double t_prev = 1.0;
    double t_cur = alpha;
    c[1] = 2.0 * alpha;
    for (int n = 2; n <= n_max; ++n) {
      const double t_next = 2.0 * alpha * t_cur - t_prev;
      t_prev = t_cur;
      t_cur = t_next;
      c[static_cast<std::size_t>(n)] = 2.0 * t_cur / n;
    }
    return c;
  }
  c[1] = 2.0 * v * alpha;
  for (int n = 2; n <= n_max; ++n) {
    const auto i = static_cast<std::size_t>(n);
    c[i] = (2.0 * alpha * (n + v - 1.0) * c[i - 1] - (n + 2.0 * v - 2.0) * c[i - 2]) / n;
  }
  return c;
}

double gegenbauer(int n, Order nu, double alpha) {
  return gegenbauer_sequence(n, nu, alpha).back();
}

BoundCertificate gegenbauer_bound(int n, Order nu) {
  if (n < 1) throw DomainError("gegenbauer_bound: n must be at least 1");
  const double v = nu.value();
  const double log_rho = v == 0.0 ? 0.0 : -log_gamma(v);
  const double log_bound = log_rho + n * std::log(4.0) + log_gamma(v + n) - log_gamma(n + 1.0);
  BoundCertificate cert;
  cert.n = n;
  cert.nu = v;
  cert.xi = 0.0;
  cert.which = BoundKind::gegenbauer;
  cert.bound_value = checked_exp(log_bound, "gegenbauer_bound");
  // The maximum of |C_n^nu| on [-1, 1] sits at alpha = +-1.
  if (v == 0.0) {
    cert.bounded_value = 2.0 / n;
  } else {
    cert.bounded_value = std::exp(log_gamma(n + 2.0 * v) - log_gamma(n + 1.0) - log_gamma(2.0 * v));
  }
  return cert;
}

BoundCertificate bessel_tail_bound(int n, Order mu, double xi) {
  if (n < 1) throw DomainError("bessel_tail_bound: n must be at least 1");
  require_finite(xi, "bessel_tail_bound");
  if (xi <= 0.0) throw DomainError("bessel_tail_bound: xi must be positive");
  const double m = mu.value();
  const double log_bound =
      n * std::log(xi) + xi - (m + n) * std::numbers::ln2 - log_gamma(m + n + 1.0);
  BoundCertificate cert;
  cert.n = n;
  cert.nu = m;
  cert.xi = xi;
  cert.which = BoundKind::bessel_tail;
  cert.bound_value = checked_exp(log_bound, "bessel_tail_bound");
  cert.bounded_value = std::exp(log_bessel_i(Order(m + n), xi) - m * std::log(xi));
  return cert;
}

double exp_gegenbauer_expansion(double alpha, double xi, double mu, int n_terms) {
  if (!(mu > 0.0)) throw DomainError("exp_gegenbauer_expansion: mu must be positive");
  if (!(xi > 0.0)) throw DomainError("exp_gegenbauer_expansion: xi must be positive");
  if (n_terms < 1) throw DomainError("exp_gegenbauer_expansion: need at least one term");
  const Order order(mu);
  const std::vector<double> c = gegenbauer_sequence(n_terms - 1, order, alpha);
  const std::vector<double> lphi = log_phi_sequence(order, n_terms - 1, xi);
  const double log_pref = mu * std::numbers::ln2 + log_gamma(mu);
  double sum = 0.0;
  for (int n = 0; n < n_terms; ++n) {
    const auto i = static_cast<std::size_t>(n);
    if (c[i] == 0.0) continue;
    sum += (mu + n) * c[i] * std::exp(lphi[i] + log_pref);
  }
  return sum;
}

}  // namespace spherehit::sf
