#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "hou/optimize.hpp"

using namespace hou;

TEST(MaximizeBox, RecoversQuadraticPeak) {
  const Box box({0.1, 0.05}, {5.0, 1.0});
  const Eigen::Vector2d v(1.37, 0.4123);
  const OptimResult r = maximize_box([&](const VectorXd& x) { return -(x - v).squaredNorm(); }, box);
  EXPECT_TRUE(r.converged);
  EXPECT_LT((r.x - v).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_EQ(r.starts, 9);
  EXPECT_GE(r.starts_converged, 1);
}

TEST(MaximizeBox, ProjectsOntoTheBox) {
  const Box box({0.0, 0.0}, {1.0, 1.0});
  const OptimResult r =
      maximize_box([](const VectorXd& x) { return -std::pow(x[0] - 2.0, 2) - std::pow(x[1] - 0.3, 2); }, box);
  EXPECT_EQ(r.x[0], 1.0);
  EXPECT_NEAR(r.x[1], 0.3, 1e-8);
  EXPECT_TRUE(box.contains(r.x));
}

TEST(MaximizeBox, TiesGoToSmallestPoint) {
  // Flat top on [0.2, 0.8]: both starts stop on the plateau with value 0.
  const Box box({0.0}, {1.0});
  auto f = [](const VectorXd& x) {
    const double out = std::max(0.0, std::abs(x[0] - 0.5) - 0.3);
    return -out * out;
  };
  const std::vector<VectorXd> starts = {VectorXd::Constant(1, 0.7), VectorXd::Constant(1, 0.3)};
  const OptimResult r = maximize_box(batched(f), box, starts);
  EXPECT_EQ(r.value, 0.0);
  EXPECT_LT(r.x[0], 0.5);
}

TEST(MaximizeBox, StartsShareBatches) {
  const Box box({-1.0, -1.0}, {1.0, 1.0});
  std::size_t largest = 0;
  const BatchObjective f = [&](std::span<const VectorXd> xs, std::span<double> out) {
    largest = std::max(largest, xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k) out[k] = -xs[k].squaredNorm();
  };
  const OptimResult r = maximize_box(f, box);
  EXPECT_GE(largest, 9u);
  EXPECT_LT(r.x.norm(), 1e-8);
}

TEST(MaximizeBox, NonFiniteValuesAreAvoided) {
  const Box box({0.0}, {2.0});
  const OptimResult r = maximize_box(
      [](const VectorXd& x) {
        return x[0] > 1.5 ? std::numeric_limits<double>::quiet_NaN() : -std::pow(x[0] - 1.2, 2);
      },
      box);
  EXPECT_NEAR(r.x[0], 1.2, 1e-8);
}

TEST(MaximizeBox, IterationCapReportsNonconvergence) {
  OptimOptions o;
  o.max_iter = 3;
  const OptimResult r = maximize_box([](const VectorXd& x) { return -(x.array() - 0.123).square().sum(); },
                                     Box({0.0, 0.0}, {1.0, 1.0}), o);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.starts_converged, 0);
  EXPECT_TRUE(std::isfinite(r.value));
}

TEST(MaximizeBox, DeterministicAcrossCalls) {
  auto f = [](const VectorXd& x) { return std::sin(3 * x[0]) * std::cos(2 * x[1]) - 0.1 * x.squaredNorm(); };
  const Box box({-2.0, -2.0}, {2.0, 2.0});
  const OptimResult a = maximize_box(f, box);
  const OptimResult b = maximize_box(f, box);
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.evaluations, b.evaluations);
}
