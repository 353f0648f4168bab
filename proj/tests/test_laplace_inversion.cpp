#include <cmath>
#include <complex>
#include <numbers>

#include <gtest/gtest.h>

#include "spherehit/errors.hpp"
#include "spherehit/laplace_inversion.hpp"

using spherehit::DomainError;
using spherehit::InversionControl;
using spherehit::InversionMethod;
using cd = std::complex<double>;

namespace {

double inverse_gauss(double k, double t) {
  return k / (2.0 * std::sqrt(std::numbers::pi * t * t * t)) * std::exp(-k * k / (4.0 * t));
}

}  // namespace

TEST(Inversion, KnownPairsTalbot) {
  const InversionControl ctrl;
  for (double t : {0.05, 0.3, 1.0, 4.0, 20.0}) {
    EXPECT_NEAR(spherehit::invert_scalar([](cd s) { return 1.0 / (s + 1.0); }, t, ctrl), std::exp(-t), 1e-12);
    EXPECT_NEAR(spherehit::invert_scalar([](cd s) { return 1.0 / (s * s); }, t, ctrl), t, 1e-10 * t);
    EXPECT_NEAR(spherehit::invert_scalar([](cd s) { return 1.0 / std::sqrt(s); }, t, ctrl),
                1.0 / std::sqrt(std::numbers::pi * t), 1e-10);
    const double want = inverse_gauss(1.0, t);
    EXPECT_NEAR(spherehit::invert_scalar([](cd s) { return std::exp(-std::sqrt(s)); }, t, ctrl), want,
                1e-9 * want + 1e-14);
  }
}

TEST(Inversion, OscillatoryPair) {
  const InversionControl ctrl;
  for (double t : {0.5, 2.0, 6.0}) {
    EXPECT_NEAR(spherehit::invert_scalar([](cd s) { return 1.0 / (s * s + 1.0); }, t, ctrl), std::sin(t), 1e-9);
  }
}

TEST(Inversion, DeHoogAndStehfestAgree) {
  const InversionControl dh(InversionMethod::de_hoog, 20, 1e-8);
  const InversionControl gs(InversionMethod::gaver_stehfest, 14, 1e-4);
  for (double t : {0.2, 1.0, 3.0}) {
    const double want = std::exp(-t);
    EXPECT_NEAR(spherehit::invert_scalar([](cd s) { return 1.0 / (s + 1.0); }, t, dh), want, 1e-8);
    EXPECT_NEAR(spherehit::invert_scalar([](cd s) { return 1.0 / (s + 1.0); }, t, gs), want, 1e-4);
    const double ig = inverse_gauss(1.0, t);
    EXPECT_NEAR(spherehit::invert_scalar([](cd s) { return std::exp(-std::sqrt(s)); }, t, dh), ig, 1e-7);
  }
}

TEST(Inversion, VectorComponentsShareContour) {
  const spherehit::VectorTransform f = [](cd s, std::span<cd> out) {
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = 1.0 / (s + double(k + 1));
    return cd(0.0, 0.0);
  };
  const auto res = spherehit::invert(f, 5, 0.7, InversionControl{});
  ASSERT_TRUE(res.converged);
  for (std::size_t k = 0; k < 5; ++k) EXPECT_NEAR(res.values[k], std::exp(-(k + 1.0) * 0.7), 1e-12);
}

TEST(Inversion, LogScaleIsApplied) {
  const spherehit::VectorTransform f = [](cd s, std::span<cd> out) {
    out[0] = 1.0 / (s + 1.0);
    return cd(-700.0, 0.0);
  };
  const auto res = spherehit::invert(f, 1, 1.0, InversionControl{});
  EXPECT_NEAR(res.values[0] / std::exp(-701.0), 1.0, 1e-10);
}

TEST(Inversion, ErrorEstimateIsReported) {
  double err = -1.0;
  spherehit::invert_scalar([](cd s) { return 1.0 / (s + 1.0); }, 1.0, InversionControl{}, &err);
  EXPECT_GE(err, 0.0);
  EXPECT_LT(err, 1e-9);
}

TEST(InversionControl, Validation) {
  EXPECT_THROW(InversionControl(InversionMethod::talbot_fixed, 16, 1e-12), DomainError);
  EXPECT_THROW(InversionControl(InversionMethod::talbot_fixed, 4, 1e-8), DomainError);
  EXPECT_THROW(InversionControl(InversionMethod::gaver_stehfest, 15, 1e-8), DomainError);
  EXPECT_THROW(InversionControl(InversionMethod::gaver_stehfest, 22, 1e-8), DomainError);
  EXPECT_THROW(InversionControl(InversionMethod::de_hoog, 80, 1e-8), DomainError);
  EXPECT_NO_THROW(InversionControl(InversionMethod::de_hoog, 16, 1e-10));
  EXPECT_THROW(spherehit::invert_scalar([](cd s) { return 1.0 / s; }, 0.0, InversionControl{}), DomainError);
}
