// Modified Bessel functions of real order for real or complex argument.
//
// Temme's series for |z| <= 2 and Steed's continued fraction (CF2) beyond give
// K_mu and K_{mu+1} for |mu| <= 1/2; forward recurrence lifts the order. The
// ratio I_{mu+1}/I_mu comes from the continued fraction CF1, and I_mu itself
// from the Wronskian I_mu K_{mu+1} + I_{mu+1} K_mu = 1/z. All routines accept
// double or std::complex<double>; complex arguments must satisfy
// |arg z| < pi (the contour code only ever passes Re z >= 0).
#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <type_traits>

#include "spherehit/errors.hpp"

namespace spherehit::detail {

inline constexpr double kIkEps = 1e-16;
inline constexpr int kIkMaxIter = 100000;

template <class T>
inline constexpr bool is_complex_v = !std::is_same_v<T, double>;

// 1/Gamma(1+mu) and 1/Gamma(1-mu), plus the Temme combinations
//   gam1 = (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu),
//   gam2 = (1/Gamma(1-mu) + 1/Gamma(1+mu)) / 2,
// from the Taylor series 1/Gamma(z) = sum_k c_k z^k, valid for |mu| <= 1/2.
struct TemmeGammas {
  double gam1;
  double gam2;
  double gampl;  // 1/Gamma(1+mu)
  double gammi;  // 1/Gamma(1-mu)
};

inline TemmeGammas temme_gammas(double mu) {
  // c_1 .. c_26 of 1/Gamma(z) about z = 0.
  static constexpr double c[] = {
      1.0,
      0.57721566490153286061,
      -0.65587807152025388108,
      -0.042002635034095235529,
      0.1665386113822914895,
      -0.042197734555544336748,
      -0.0096219715278769735621,
      0.0072189432466630995424,
      -0.0011651675918590651121,
      -0.00021524167411495097282,
      0.00012805028238811618615,
      -0.000020134854780788238656,
      -1.2504934821426706573e-6,
      1.1330272319816958824e-6,
      -2.0563384169776071035e-7,
      6.1160951044814158179e-9,
      5.0020076444692229301e-9,
      -1.1812745704870201446e-9,
      1.0434267116911005105e-10,
      7.782263439905071254e-12,
      -3.6968056186422057082e-12,
      5.100370287454475979e-13,
      -2.0583260535665067832e-14,
      -5.3481225394230179824e-15,
      1.2267786282382607902e-15,
      -1.1812593016974587695e-16,
  };
  constexpr int n = static_cast<int>(sizeof(c) / sizeof(c[0]));
  // gam1 = -sum_{k even} c_k mu^{k-2}; gam2 = sum_{k odd} c_k mu^{k-1}
  // (k is 1-based). Horner in mu^2.
  const double mu2 = mu * mu;
  double g1 = 0.0;
  for (int k = (n % 2 == 0 ? n : n - 1); k >= 2; k -= 2) g1 = g1 * mu2 + c[k - 1];
  double g2 = 0.0;
  for (int k = (n % 2 == 1 ? n : n - 1); k >= 1; k -= 2) g2 = g2 * mu2 + c[k - 1];
  TemmeGammas out{};
  out.gam1 = -g1;
  out.gam2 = g2;
  out.gampl = g2 + mu * g1;  // 1/Gamma(1+mu) = gam2 - mu*gam1
  out.gammi = g2 - mu * g1;  // 1/Gamma(1-mu) = gam2 + mu*gam1
  return out;
}

template <class T>
struct KPair {
  T k0;  // e^z K_mu(z)
  T k1;  // e^z K_{mu+1}(z)
};

// e^z K_mu(z) and e^z K_{mu+1}(z) for |mu| <= 1/2.
template <class T>
KPair<T> k_pair_scaled(double mu, T z) {
  using std::abs;
  using std::cosh;
  using std::exp;
  using std::log;
  using std::sinh;
  using std::sqrt;
  const double pi = std::numbers::pi;
  const double mu2 = mu * mu;
  if (abs(z) <= 2.0) {
    const T x2 = 0.5 * z;
    const double pimu = pi * mu;
    const double fact = std::abs(pimu) < kIkEps ? 1.0 : pimu / std::sin(pimu);
    T d = -log(x2);
    T e = mu * d;
    const T fact2 = abs(e) < kIkEps ? T(1.0) : T(sinh(e) / e);
    const TemmeGammas g = temme_gammas(mu);
    T ff = fact * (g.gam1 * cosh(e) + g.gam2 * fact2 * d);
    T sum = ff;
    e = exp(e);
    T p = 0.5 * e / g.gampl;
    T q = 0.5 / (e * g.gammi);
    T c = 1.0;
    d = x2 * x2;
    T sum1 = p;
    int i = 1;
    for (; i <= kIkMaxIter; ++i) {
      const double di = static_cast<double>(i);
      ff = (di * ff + p + q) / (di * di - mu2);
      c *= d / di;
      p /= (di - mu);
      q /= (di + mu);
      const T del = c * ff;
      sum += del;
      const T del1 = c * (p - di * ff);
      sum1 += del1;
      if (abs(del) < abs(sum) * kIkEps) break;
    }
    if (i > kIkMaxIter) {
      throw NumericalFailure("Temme series for K did not converge", 0.0);
    }
    const T ez = exp(z);
    return KPair<T>{sum * ez, sum1 * (2.0 / z) * ez};
  }
  // Steed's algorithm for CF2.
  T b = 2.0 * (1.0 + z);
  T d = 1.0 / b;
  T h = d;
  T delh = d;
  T q1 = 0.0;
  T q2 = 1.0;
  const double a1 = 0.25 - mu2;
  T q = a1;
  double c = a1;
  double a = -a1;
  T s = 1.0 + q * delh;
  int i = 2;
  for (; i <= kIkMaxIter; ++i) {
    a -= 2.0 * (i - 1);
    c = -a * c / i;
    const T qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const T dels = q * delh;
    s += dels;
    if (abs(dels) < abs(s) * kIkEps) break;
  }
  if (i > kIkMaxIter) {
    throw NumericalFailure("continued fraction CF2 for K did not converge", 0.0);
  }
  h = a1 * h;
  const T k0 = sqrt(pi / (2.0 * z)) / s;
  const T k1 = k0 * (mu + z + 0.5 - h) / z;
  return KPair<T>{k0, k1};
}

// I_{mu+1}(z) / I_mu(z) by modified Lentz on
//   1 / (2(mu+1)/z + 1 / (2(mu+2)/z + ...)).
template <class T>
T i_ratio_cf(double mu, T z) {
  using std::abs;
  constexpr double tiny = 1e-300;
  const T inv = 2.0 / z;
  T f = tiny;
  T cc = f;
  T dd = 0.0;
  int k = 1;
  for (; k <= kIkMaxIter; ++k) {
    const T b = (mu + k) * inv;
    dd = b + dd;
    if (abs(dd) < tiny) dd = tiny;
    cc = b + 1.0 / cc;
    if (abs(cc) < tiny) cc = tiny;
    dd = 1.0 / dd;
    const T delta = cc * dd;
    f *= delta;
    if (abs(delta - 1.0) < kIkEps) break;
  }
  if (k > kIkMaxIter) {
    throw NumericalFailure("continued fraction CF1 for I did not converge", 0.0);
  }
  return f;
}

template <class T>
struct LogK {
  T log_scaled;  // log(e^z K_mu(z))
  T ratio;       // K_{mu+1}(z) / K_mu(z)
};

// log of e^z K_mu(z) for any mu >= 0, plus the next-order ratio.
template <class T>
LogK<T> log_k_scaled(double mu, T z) {
  using std::log;
  const int nl = static_cast<int>(std::floor(mu + 0.5));
  const double mu_t = mu - nl;
  const KPair<T> kp = k_pair_scaled(mu_t, z);
  T lk = log(kp.k0);
  T q = kp.k1 / kp.k0;
  for (int j = 1; j <= nl; ++j) {
    const double order = mu_t + j;
    lk += log(q);
    q = 1.0 / q + 2.0 * order / z;
  }
  return LogK<T>{lk, q};
}

// log I_mu(z) through the Wronskian; z must be away from 0.
template <class T>
T log_i_wronskian(double mu, T z) {
  using std::log;
  const LogK<T> lk = log_k_scaled(mu, z);
  const T rho = i_ratio_cf(mu, z);
  return z - log(z) - lk.log_scaled - log(lk.ratio + rho);
}

}  // namespace spherehit::detail
