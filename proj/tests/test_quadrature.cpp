#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hou/errors.hpp"
#include "hou/quadrature.hpp"

using namespace hou;

namespace {

VecIntegrand scalar(double (*f)(double)) {
  return [f](double s) { return VectorXd::Constant(1, f(s)); };
}

}  // namespace

TEST(Integrate, Polynomial) {
  const QuadResult r = integrate(scalar([](double s) { return s * s; }), 0.0, 1.0);
  EXPECT_NEAR(r.value[0], 1.0 / 3.0, 1e-15);
}

TEST(Integrate, Sine) {
  const QuadResult r = integrate(scalar([](double s) { return std::sin(s); }), 0.0, std::numbers::pi);
  EXPECT_NEAR(r.value[0], 2.0, 1e-14);
  EXPECT_LE(r.error, 1e-12);
}

TEST(Integrate, VectorValued) {
  const QuadResult r = integrate([](double s) { return Eigen::Vector2d(std::exp(s), std::cos(s)).eval(); }, 0.0, 1.0);
  EXPECT_NEAR(r.value[0], std::exp(1.0) - 1, 1e-14);
  EXPECT_NEAR(r.value[1], std::sin(1.0), 1e-14);
}

TEST(Integrate, SharpPeakIsRefined) {
  const QuadResult r = integrate(scalar([](double s) { return 1.0 / (1e-4 + s * s); }), -1.0, 1.0);
  EXPECT_NEAR(r.value[0], 2.0 * std::atan(100.0) / 1e-2, 1e-9);
  EXPECT_GT(r.intervals, 8);
}

TEST(Integrate, DivergentIntegralThrows) {
  QuadOptions o;
  o.max_intervals = 60;
  try {
    integrate(scalar([](double s) { return 1.0 / s; }), 0.0, 1.0, o);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::nonconvergence);
  }
}

TEST(TailHorizon, ExponentialTail) {
  const VecIntegrand f = scalar([](double s) { return std::exp(-2.0 * s); });
  const double T = tail_horizon(f, 2.0, 1e-13);
  EXPECT_LT(std::exp(-2.0 * T) / 2.0, 1e-13);
  EXPECT_LT(T, 40.0);
  EXPECT_NEAR(integrate(f, 0.0, T).value[0], 0.5, 1e-13);
}

TEST(TailHorizon, PolynomialTimesExponential) {
  const VecIntegrand f = scalar([](double s) { return s * s * std::exp(-s); });
  const double T = tail_horizon(f, 1.0, 1e-12);
  EXPECT_NEAR(integrate(f, 0.0, T).value[0], 2.0, 1e-11);
}
