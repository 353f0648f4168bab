#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "spherehit/bessel_hitting.hpp"
#include "spherehit/drift_series.hpp"
#include "spherehit/errors.hpp"
#include "spherehit/majorant.hpp"
#include "spherehit/transforms.hpp"

using spherehit::Geometry;
using spherehit::SeriesControl;
namespace drift = spherehit::drift;
namespace h = spherehit::hitting;
namespace sf = spherehit::sf;

namespace {

const Geometry kD3(3, 1.0, {2.0, 0.0, 0.0}, {0.0, 0.0, 1.0});
const Geometry kD2(2, 1.0, {0.5, 0.0}, {0.8, 0.0});
const Geometry kD5(5, 1.5, {0.0, 2.5, 0.0, 0.0, 0.0}, {0.0, -0.3, 0.4, 0.0, 0.0});

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

}  // namespace

TEST(DirectionCosine, Examples) {
  EXPECT_DOUBLE_EQ(spherehit::direction_cosine(Geometry(3, 1.0, {2, 0, 0}, {3, 0, 0})), 1.0);
  EXPECT_DOUBLE_EQ(spherehit::direction_cosine(Geometry(3, 1.0, {2, 0, 0}, {0, 3, 0})), 0.0);
  EXPECT_NEAR(spherehit::direction_cosine(Geometry(3, 1.0, {1, 1, 0}, {1, 0, 0})), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(spherehit::direction_cosine(kD5), -0.6, 1e-15);
  EXPECT_THROW(spherehit::direction_cosine(kD3.with_drift({0, 0, 0})), spherehit::DomainError);
  const double c = spherehit::direction_cosine(Geometry(3, 1.0, {0.1, 0.2, 0.3}, {0.1, 0.2, 0.3}));
  EXPECT_LE(c, 1.0);
}

TEST(GeometryValidation, Rejects) {
  EXPECT_THROW(Geometry(1, 1.0, {2.0}, {0.0}), spherehit::DomainError);
  EXPECT_THROW(Geometry(3, 0.0, {2, 0, 0}, {0, 0, 0}), spherehit::DomainError);
  EXPECT_THROW(Geometry(3, 1.0, {2, 0}, {0, 0, 0}), spherehit::DomainError);
  EXPECT_THROW(Geometry(3, 1.0, {0, 0, 0}, {0, 0, 0}), spherehit::DomainError);
  EXPECT_THROW(SeriesControl(0.0, 10), spherehit::DomainError);
  EXPECT_THROW(SeriesControl(1e-8, 0), spherehit::DomainError);
}

TEST(Coefficients, PlaneAndHigherDimensions) {
  // d = 2: c_0 = I_0(|v|r), c_n = n C_n^0(alpha) I_n(|v|r) (|x|/r)^n with alpha = 1
  const auto c2 = drift::coefficients(kD2, 4);
  EXPECT_NEAR(c2[0], sf::bessel_i(sf::Order(0.0), 0.8), 1e-15);
  for (int n = 1; n <= 4; ++n) {
    EXPECT_NEAR(c2[n], n * (2.0 / n) * sf::bessel_i(sf::Order(n), 0.8) * std::pow(0.5, n), 1e-14);
  }
  // d = 3: c_n = 2^{1/2} Gamma(1/2) (n + 1/2) P_n(0) I_{n+1/2}(1) / 1^{1/2} * 2^n
  const auto c3 = drift::coefficients(kD3, 3);
  const double k = std::sqrt(2.0) * std::sqrt(std::numbers::pi);
  EXPECT_NEAR(c3[0], k * 0.5 * sf::bessel_i(sf::Order(0.5), 1.0), 1e-14);
  EXPECT_EQ(c3[1], 0.0);
  EXPECT_NEAR(c3[2], k * 2.5 * -0.5 * sf::bessel_i(sf::Order(2.5), 1.0) * 4.0, 1e-13);
  const auto c0 = drift::coefficients(kD3.with_drift({0, 0, 0}), 3);
  EXPECT_EQ(c0[0], 1.0);
  EXPECT_EQ(c0[2], 0.0);
}

TEST(DriftDensity, FrozenReferenceValues) {
  // multiprecision summation of the Bessel-order series with inverted terms
  EXPECT_LT(rel(drift::drift_density(kD3, 0.5).value, 0.17398334819052012871), 1e-9);
  EXPECT_LT(rel(drift::drift_density(kD3, 1.0).value, 0.08147808795149691293), 1e-9);
  EXPECT_LT(rel(drift::drift_density(kD3, 2.0).value, 0.023048148623353304797), 1e-9);
  EXPECT_LT(rel(drift::drift_density(kD2, 0.2).value, 2.1002269455915658177), 1e-9);
  EXPECT_LT(rel(drift::drift_density(kD5, 1.0).value, 0.1013117183597919874), 1e-9);
}

TEST(DriftDensity, ErrorContract) {
  const SeriesControl ctrl(1e-9, 400);
  for (const Geometry* g : {&kD3, &kD2, &kD5}) {
    for (double t : {0.1, 1.0, 10.0}) {
      const auto est = drift::drift_density(*g, t, ctrl);
      EXPECT_LE(est.trunc_bound, ctrl.tol());
      EXPECT_LE(est.terms_used, ctrl.max_terms());
      EXPECT_GE(est.value, 0.0);
    }
  }
  EXPECT_THROW(drift::drift_density(kD3, 1.0, SeriesControl(1e-12, 1)), spherehit::TruncationError);
  try {
    drift::drift_density(kD3, 1.0, SeriesControl(1e-12, 1));
  } catch (const spherehit::TruncationError& e) {
    EXPECT_GT(e.achieved(), 1e-12);
  }
}

TEST(DriftDensity, VanishingDriftLimit) {
  const Geometry g = kD3.with_drift({0.0, 0.0, 1e-6});
  const double want = 0.5 / std::sqrt(2 * std::numbers::pi) * std::exp(-0.5);
  EXPECT_LT(rel(drift::drift_density(g, 1.0).value, want), 1e-4);
  const Geometry g2 = kD2.with_drift({1e-7, 0.0});
  const double p0 = h::hitting_density(h::RadialInstance(sf::Order(0.0), 0.5, 1.0), 0.2).value;
  EXPECT_LT(rel(drift::drift_density(g2, 0.2).value, p0), 1e-5);
}

TEST(DriftDensity, ZeroDriftIsDriftless) {
  const Geometry g = kD5.with_drift({0, 0, 0, 0, 0});
  for (double t : {0.3, 2.0}) {
    EXPECT_EQ(drift::drift_density(g, t).value,
              h::hitting_density(h::RadialInstance(sf::Order(1.5), 2.5, 1.5), t).value);
  }
}

TEST(DriftDensity, TiltBound) {
  for (const Geometry* g : {&kD3, &kD5}) {
    const auto c = drift::coefficients(*g, 80);
    const double vn = g->drift_norm();
    for (double t = 0.05; t < 40.0; t *= 1.6) {
      double m = 0.0;
      for (int n = 0; n <= 80; ++n) {
        m += std::abs(c[n]) * std::exp(spherehit::majorant::log_density_majorant(g->nu() + n, g->start_norm(), g->radius(), t));
      }
      const double bound = std::exp(-g->drift_dot_start() - 0.5 * vn * vn * t) * m;
      EXPECT_LE(drift::drift_density(*g, t).value, bound * (1 + 1e-12) + 1e-10) << t;
    }
  }
}

TEST(DriftDensity, InteriorStarts) {
  const Geometry g(3, 1.0, {0.3, 0.1, 0.0}, {0.5, -1.0, 0.2});
  for (double t = 0.01; t < 5.0; t *= 1.5) EXPECT_GE(drift::drift_density(g, t).value, 0.0);
  EXPECT_NEAR(drift::drift_tail(g, 1e-6).value, 1.0, 1e-8);
}

TEST(DriftDensity, DegenerateAndUnderflow) {
  const Geometry on(3, 1.0, {0.6, 0.8, 0.0}, {0.0, 0.0, 1.0});
  EXPECT_THROW(drift::drift_density(on, 1.0), spherehit::DegenerateGeometry);
  EXPECT_THROW(drift::drift_tail(on, 1.0), spherehit::DegenerateGeometry);
  EXPECT_THROW(drift::drift_density(kD3, 0.0), spherehit::DomainError);
  const auto late = drift::drift_density(kD3, 3000.0);
  EXPECT_TRUE(late.underflow_flag);
  EXPECT_EQ(late.value, 0.0);
  const auto early = drift::drift_density(kD3, 1e-4);
  EXPECT_TRUE(early.underflow_flag);
  EXPECT_TRUE(drift::drift_tail(kD3, 3000.0).underflow_flag);
}

TEST(TruncationIndex, Examples) {
  const Geometry g(3, 1.0, {2.0, 0.0, 0.0}, {0.0, 0.25, 0.0});
  EXPECT_LE(drift::truncation_index(g, 1e-12, 0.0), 20);
  EXPECT_EQ(drift::truncation_index(g, 1e6, 0.0), 0);
  int prev = 0;
  for (double tol = 1.0; tol > 1e-15; tol /= 10) {
    const int n = drift::truncation_index(kD3, tol, 0.5);
    EXPECT_GE(n, prev);
    prev = n;
  }
  EXPECT_THROW(drift::truncation_index(kD3.with_drift({0, 0, 0}), 1e-8, 0.0), spherehit::DomainError);
}

TEST(DriftTail, FrozenReferenceValues) {
  EXPECT_LT(rel(drift::drift_tail(kD3, 0.5).value, 0.13018854761271339548), 1e-9);
  EXPECT_LT(rel(drift::drift_tail(kD3, 1.0).value, 0.069247538636059230268), 1e-9);
  EXPECT_LT(rel(drift::drift_tail(kD3, 2.0).value, 0.024277272137751241782), 1e-9);
  EXPECT_LT(rel(drift::drift_tail(kD3, 5.0).value, 0.0021227240950768903532), 1e-9);
}

TEST(DriftTail, DerivativeIsMinusDensity) {
  for (const Geometry* g : {&kD3, &kD2, &kD5}) {
    for (double t : {0.5, 2.0, 8.0, 20.0}) {
      const double h = 1e-3 * t;
      const SeriesControl ctrl(1e-14, 400);
      auto tail = [&](double u) { return drift::drift_tail(*g, u, ctrl).value; };
      // five-point stencil; interior starts decay fast enough to defeat a second-order one
      const double d = -(tail(t - 2 * h) - 8 * tail(t - h) + 8 * tail(t + h) - tail(t + 2 * h)) / (12 * h);
      const double p = drift::drift_density(*g, t, ctrl).value;
      EXPECT_LT(rel(d, p), 1e-5) << g->dim() << " " << t;
    }
  }
}

TEST(DriftTail, StartMatchesTransformAtZero) {
  const double p = drift::drift_tail(kD3, 1e-6).value;
  const double lt = spherehit::transforms::drift_lt(kD3, 1e-12);
  EXPECT_NEAR(p, lt, 1e-6);
  EXPECT_NEAR(p, 0.20098263945526, 1e-10);
}

TEST(DriftTail, Decreasing) {
  for (const Geometry* g : {&kD3, &kD2, &kD5}) {
    double prev = INFINITY;
    for (double t = 0.02; t < 60.0; t *= 1.4) {
      const double v = drift::drift_tail(*g, t).value;
      EXPECT_LE(v, prev);
      prev = v;
    }
  }
}

TEST(TailAsymptotic, Scaling) {
  for (const Geometry* g : {&kD3, &kD5}) {
    const double vn = g->drift_norm();
    for (double t : {3.0, 10.0}) {
      const double ratio = drift::tail_asymptotic(*g, 2 * t) / drift::tail_asymptotic(*g, t);
      EXPECT_NEAR(ratio, std::exp(-0.5 * vn * vn * t) * std::pow(2.0, -(g->nu() + 1)), 1e-12 * ratio);
    }
  }
  const Geometry p(2, 1.0, {2.0, 0.0}, {0.0, 1.0});
  const double t = 5.0;
  const double ratio = drift::tail_asymptotic(p, 2 * t) / drift::tail_asymptotic(p, t);
  EXPECT_NEAR(ratio, std::exp(-0.5 * t) * 0.5 * std::pow(std::log(t) / std::log(2 * t), 2), 1e-12);
}

TEST(TailAsymptotic, HalfOrderConstant) {
  // d = 3: 2^{3/2} Gamma(3/2) L(1/2) / |v|^2 * I_{1/2}(z) / z^{1/2}, I_{1/2}(z) = sqrt(2/(pi z)) sinh z
  const double l = 0.5 / std::sqrt(2 * std::numbers::pi);
  const double want = std::pow(2.0, 1.5) * std::sqrt(std::numbers::pi) / 2 * l * std::sqrt(2 / std::numbers::pi) * std::sinh(1.0);
  EXPECT_NEAR(drift::tail_asymptotic(kD3, 1.0), want * std::exp(-0.5), 1e-15);
}

TEST(TailAsymptotic, Domain) {
  EXPECT_THROW(drift::tail_asymptotic(kD2, 5.0), spherehit::DomainError);
  EXPECT_THROW(drift::tail_asymptotic(kD3.with_drift({0, 0, 0}), 5.0), spherehit::DomainError);
  EXPECT_THROW(drift::tail_asymptotic(Geometry(2, 1.0, {2.0, 0.0}, {0.0, 1.0}), 2.0), spherehit::DomainError);
}

TEST(TailAsymptotic, RatioApproachesOne) {
  double prev = INFINITY;
  for (double t : {25.0, 50.0, 100.0, 200.0}) {
    const double asym = drift::tail_asymptotic(kD3, t);
    const double dev = std::abs(drift::drift_tail(kD3, t, SeriesControl(1e-8 * asym, 400)).value / asym - 1.0);
    EXPECT_LT(dev, prev) << t;
    prev = dev;
  }
  EXPECT_LT(prev, 0.1);
}
