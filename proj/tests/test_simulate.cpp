#include <gtest/gtest.h>

#include <cmath>

#include "hou/simulate.hpp"

using namespace hou;

namespace {

ThetaPoint desk_truth() {
  VectorXd t1(1), t2(2);
  t1 << 0.02;
  t2 << 1.5, 0.3;
  return {t1, t2};
}

ModelSpec noiseless(double a) {
  const MatrixXd zero = MatrixXd::Zero(1, 1);
  return constant_model(MatrixXd::Constant(1, 1, a), zero, MatrixXd::Identity(1, 1), zero);
}

double sample_var(const Eigen::Ref<const VectorXd>& v) {
  const double m = v.mean();
  return (v.array() - m).square().sum() / static_cast<double>(v.size() - 1);
}

}  // namespace

TEST(ExactTransition, ScalarStateVariance) {
  const Transition tr = exact_transition(scalar_family({}), desk_truth(), 0.1);
  const double exact = 0.09 * (1 - std::exp(-0.3)) / 3.0;
  EXPECT_NEAR(tr.Q(0, 0), exact, 1e-15);
  EXPECT_NEAR(tr.Q(0, 0), 0.0077728, 5e-6);
  EXPECT_NEAR(tr.Phi(0, 0), std::exp(-0.15), 1e-15);
  EXPECT_NEAR(tr.Phi(1, 0), (1 - std::exp(-0.15)) / 1.5, 1e-15);
  EXPECT_DOUBLE_EQ(tr.Phi(1, 1), 1.0);
  EXPECT_DOUBLE_EQ(tr.Phi(0, 1), 0.0);
}

TEST(ExactTransition, SmallStepLimit) {
  const Transition tr = exact_transition(scalar_family({}), desk_truth(), 1e-9);
  EXPECT_LT((tr.Phi - MatrixXd::Identity(2, 2)).norm(), 1e-8);
  EXPECT_LT(tr.Q.norm(), 1e-9);
}

TEST(ExactTransition, NoiselessFlow) {
  const ModelSpec spec = noiseless(1.0);
  const Transition tr = exact_transition(spec, {spec.theta1_box.center(), VectorXd(0)}, 0.5);
  EXPECT_TRUE(tr.Q.isZero(0.0));
  EXPECT_NEAR(tr.Phi(0, 0), std::exp(-0.5), 1e-15);
}

TEST(SimulatePath, SameSeedIsBitwiseIdentical) {
  const ModelSpec spec = scalar_family({});
  const SamplingScheme s{2000, 1e-3};
  const ObservationPath p1 = simulate_path(spec, desk_truth(), s, 42);
  const ObservationPath p2 = simulate_path(spec, desk_truth(), s, 42);
  const ObservationPath p3 = simulate_path(spec, desk_truth(), s, 43);
  EXPECT_EQ(p1.y, p2.y);
  EXPECT_EQ(*p1.x, *p2.x);
  EXPECT_NE(p1.y, p3.y);
  EXPECT_EQ(p1.y.rows(), 2001);
  EXPECT_EQ(p1.y(0, 0), 0.0);
}

TEST(SimulatePath, ConfiguredStartIsKept) {
  SimulationOptions o;
  o.x0 = VectorXd::Constant(1, 0.7);
  o.y0 = VectorXd::Constant(1, -2.0);
  const ObservationPath p = simulate_path(scalar_family({}), desk_truth(), {10, 0.01}, 1, o);
  EXPECT_EQ(p.y(0, 0), -2.0);
  EXPECT_EQ((*p.x)(0, 0), 0.7);
  o.store_x = false;
  EXPECT_FALSE(simulate_path(scalar_family({}), desk_truth(), {10, 0.01}, 1, o).x.has_value());
}

TEST(SimulatePath, NoiselessDecay) {
  const ModelSpec spec = noiseless(1.0);
  SimulationOptions o;
  o.x0 = VectorXd::Constant(1, 1.0);
  const double h = 0.01;
  const ObservationPath p = simulate_path(spec, {spec.theta1_box.center(), VectorXd(0)}, {100, h}, 3, o);
  EXPECT_NEAR((*p.x)(100, 0), std::exp(-1.0), 1e-14);
  const MatrixXd dy = increments(p);
  for (int i = 0; i < 100; i += 17) {
    EXPECT_NEAR(dy(i, 0), std::exp(-i * h) * (1 - std::exp(-h)), 1e-15);
  }
}

TEST(SimulatePath, StationaryVarianceOfState) {
  const SamplingScheme s{100000, 0.01};
  const ObservationPath p = simulate_path(scalar_family({}), desk_truth(), s, 2024);
  const VectorXd x = p.x->col(0).tail(p.x->rows() - 500);  // t >= 5
  EXPECT_NEAR(sample_var(x), 0.03, 0.003);
}

TEST(SimulatePath, StationaryStart) {
  SimulationOptions o;
  o.init = InitKind::stationary_x;
  const int R = 4000;
  VectorXd x0(R);
  for (int r = 0; r < R; ++r) x0[r] = (*simulate_path(scalar_family({}), desk_truth(), {1, 0.01}, 100 + r, o).x)(0, 0);
  // Var of a sample variance from R normals: 2 sigma^4 / (R - 1).
  EXPECT_NEAR(sample_var(x0), 0.03, 5 * 0.03 * std::sqrt(2.0 / (R - 1)));
}

TEST(SimulatePath, OneStepMomentsMatchTransition) {
  const ModelSpec spec = scalar_family({});
  const double h = 0.05;
  const Transition tr = exact_transition(spec, desk_truth(), h);
  SimulationOptions o;
  o.x0 = VectorXd::Constant(1, 0.4);
  o.y0 = VectorXd::Constant(1, 0.1);
  Eigen::Vector2d z0(0.4, 0.1);
  const int R = 10000;
  MatrixXd z(R, 2);
  for (int r = 0; r < R; ++r) {
    const ObservationPath p = simulate_path(spec, desk_truth(), {1, h}, 7000 + r, o);
    z(r, 0) = (*p.x)(1, 0);
    z(r, 1) = p.y(1, 0);
  }
  const Eigen::Vector2d mean = z.colwise().mean();
  const Eigen::Vector2d expected = tr.Phi * z0;
  const MatrixXd centered = z.rowwise() - mean.transpose();
  const MatrixXd cov = centered.transpose() * centered / (R - 1);
  for (int i = 0; i < 2; ++i) {
    EXPECT_NEAR(mean[i], expected[i], 5 * std::sqrt(tr.Q(i, i) / R));
    for (int j = 0; j < 2; ++j) {
      const double se = std::sqrt((tr.Q(i, i) * tr.Q(j, j) + tr.Q(i, j) * tr.Q(i, j)) / R);
      EXPECT_NEAR(cov(i, j), tr.Q(i, j), 5 * se) << i << "," << j;
    }
  }
}

TEST(SimulatePath, IncrementVarianceScalesWithStep) {
  SimulationOptions o;
  o.init = InitKind::stationary_x;
  o.store_x = false;
  const double Sigma = 0.0004;
  double prev = 0.0;
  for (double h : {1e-2, 1e-3}) {
    const ObservationPath p = simulate_path(scalar_family({}), desk_truth(), {200000, h}, 11, o);
    const MatrixXd dy = increments(p);
    const double err = std::abs(sample_var(dy.col(0)) / h - Sigma);
    EXPECT_LT(err, 0.1 * h) << "h = " << h;
    if (prev > 0.0) EXPECT_LT(err, prev);
    prev = err;
  }
}

TEST(SimulatePath, EulerAgreesInDistribution) {
  SimulationOptions o;
  o.method = StepMethod::euler;
  o.init = InitKind::stationary_x;
  const ObservationPath p = simulate_path(scalar_family({}), desk_truth(), {100000, 1e-3}, 5, o);
  const MatrixXd dy = increments(p);
  EXPECT_NEAR(sample_var(dy.col(0)) / 1e-3, 0.0004, 5e-5);
}
