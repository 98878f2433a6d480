#include <gtest/gtest.h>

#include <random>

#include "hou/asymptotics.hpp"
#include "hou/errors.hpp"
#include "oracles.hpp"

using namespace hou;

namespace {

ThetaPoint desk_truth() {
  VectorXd t1(1), t2(2);
  t1 << 0.02;
  t2 << 1.5, 0.3;
  return {t1, t2};
}

const ModelSpec& desk_model() {
  static const ModelSpec s = scalar_family({});
  return s;
}

}  // namespace

TEST(Gamma1, ScalarNoiseScale) {
  const MatrixXd g = gamma1(desk_model(), desk_truth().theta1);
  EXPECT_NEAR(g(0, 0), 5000.0, 1e-9);
  const AsymptoticInfo info = asymptotic_info(desk_model(), desk_truth(), {1000000, 1e-4});
  EXPECT_TRUE(info.pd1);
  EXPECT_NEAR(info.se1[0], 0.02 / std::sqrt(2e6), 1e-10 * info.se1[0]);
  EXPECT_NEAR(info.se1[0], 1.41421e-5, 1e-10);
}

TEST(Gamma1, ConstantNoiseIsDegenerate) {
  ModelSpec spec = desk_model();
  spec.sigma = [](const VectorXd&) { return MatrixXd::Constant(1, 1, 0.02); };
  spec.dSigma = nullptr;
  EXPECT_NEAR(gamma1(spec, desk_truth().theta1)(0, 0), 0.0, 1e-12);
  const AsymptoticInfo info = asymptotic_info(spec, desk_truth(), {1000, 1e-3});
  EXPECT_FALSE(info.pd1);
  EXPECT_EQ(info.se1.size(), 0);
}

TEST(Gamma2, DeskModelClosedForm) {
  const MatrixXd g = gamma2_closed_form_1d(desk_model(), desk_truth());
  const Eigen::Matrix2d ref = oracle::scalar_gamma2(1.5, 0.3, 1.0, 0.02);
  EXPECT_LT((g - ref).cwiseAbs().maxCoeff(), 1e-10 * ref.norm());
  EXPECT_NEAR(g(0, 0), 0.3216, 1e-3 * 0.3216);
  EXPECT_NEAR(g(0, 1), -2.8373, 1e-3 * 2.8373);
  EXPECT_NEAR(g(1, 1), 82.09, 1e-3 * 82.09);
  EXPECT_EQ(g, gamma2(desk_model(), desk_truth()));
}

TEST(Gamma2, StandardErrorsAtUnitHorizon) {
  const AsymptoticInfo info = asymptotic_info(desk_model(), desk_truth(), {100000, 1e-3});
  ASSERT_TRUE(info.pd2);
  EXPECT_NEAR(info.se2[0], 0.2115, 0.005 * 0.2115);
  EXPECT_NEAR(info.se2[1], 0.01324, 0.005 * 0.01324);
}

TEST(Gamma2, SingleParameterSubmodel) {
  ScalarFamilyOptions o;
  o.free = {"a"};
  o.b = 0.3;
  o.theta2_box = Box({0.1}, {5.0});
  const ModelSpec spec = scalar_family(o);
  VectorXd t2(1);
  t2 << 1.5;
  const ThetaPoint t{desk_truth().theta1, t2};
  const Eigen::Matrix2d full = oracle::scalar_gamma2(1.5, 0.3, 1.0, 0.02);
  EXPECT_NEAR(gamma2_closed_form_1d(spec, t)(0, 0), full(0, 0), 1e-12);
  EXPECT_NEAR(gamma2_quadrature(spec, t)(0, 0), full(0, 0), 1e-6);
}

TEST(Gamma2, QuadratureMatchesClosedFormOnGrid) {
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      VectorXd t2(2);
      t2 << 1.3 + 0.1 * i, 0.26 + 0.02 * j;
      const ThetaPoint t{desk_truth().theta1, t2};
      const MatrixXd q = gamma2_quadrature(desk_model(), t);
      const MatrixXd c = gamma2_closed_form_1d(desk_model(), t);
      EXPECT_LT((q - c).cwiseAbs().maxCoeff(), 1e-6) << t2.transpose();
    }
  }
}

TEST(Gamma2, TruncationIsConverged) {
  const double T = gamma2_horizon(desk_model(), desk_truth());
  EXPECT_GT(T, 0.0);
  const MatrixXd g1 = gamma2_quadrature(desk_model(), desk_truth(), T);
  const MatrixXd g2 = gamma2_quadrature(desk_model(), desk_truth(), 2 * T);
  EXPECT_LT((g2 - g1).norm(), 1e-9 * g1.norm());
  EXPECT_EQ(g1, gamma2_quadrature(desk_model(), desk_truth()));
}

TEST(Gamma2, DiagonalModelDecouples) {
  const ModelSpec spec = diagonal_family(2, Eigen::Vector2d(1.0, 1.0), Box({0.001, 0.001}, {1, 1}),
                                         Box({0.1, 0.1, 0.05, 0.05}, {5, 5, 1, 1}));
  VectorXd t2(4);
  t2 << 1.5, 0.8, 0.3, 0.5;
  const ThetaPoint t{Eigen::Vector2d(0.02, 0.05), t2};
  const MatrixXd g = gamma2(spec, t);
  const Eigen::Matrix2d g1 = oracle::scalar_gamma2(1.5, 0.3, 1.0, 0.02);
  const Eigen::Matrix2d g2 = oracle::scalar_gamma2(0.8, 0.5, 1.0, 0.05);
  // Coordinates are (a1, a2, b1, b2).
  EXPECT_NEAR(g(0, 0), g1(0, 0), 1e-6 * g1.norm());
  EXPECT_NEAR(g(0, 2), g1(0, 1), 1e-6 * g1.norm());
  EXPECT_NEAR(g(2, 2), g1(1, 1), 1e-6 * g1.norm());
  EXPECT_NEAR(g(1, 1), g2(0, 0), 1e-6 * g2.norm());
  EXPECT_NEAR(g(3, 3), g2(1, 1), 1e-6 * g2.norm());
  EXPECT_NEAR(g(0, 1), 0.0, 1e-8);
  EXPECT_NEAR(g(2, 3), 0.0, 1e-8);
}

TEST(Gamma2, ThreeParameterScalarModelIsSingular) {
  ScalarFamilyOptions o;
  o.free = {"a", "b", "c"};
  o.theta2_box = Box({0.1, 0.05, 0.5}, {5, 1, 2});
  const ModelSpec spec = scalar_family(o);
  VectorXd t2(3);
  t2 << 1.5, 0.3, 1.0;
  const AsymptoticInfo info = asymptotic_info(spec, {desk_truth().theta1, t2}, {100000, 1e-3});
  EXPECT_FALSE(info.pd2);
  EXPECT_EQ(info.se2.size(), 0);
  EXPECT_TRUE(asymptotic_info(desk_model(), desk_truth(), {100000, 1e-3}).pd2);
}

TEST(StandardizedErrors, ZeroAtTruth) {
  const MatrixXd G = gamma2(desk_model(), desk_truth());
  MatrixXd est(4, 2);
  est.rowwise() = desk_truth().theta2.transpose();
  EXPECT_TRUE(standardized_errors(est, desk_truth().theta2, G, 10.0).isZero(0.0));
}

TEST(StandardizedErrors, GaussianDrawsBecomeStandard) {
  const MatrixXd G = gamma2(desk_model(), desk_truth());
  const double rate = 10.0;
  const MatrixXd cov = G.inverse() / (rate * rate);
  const Eigen::LLT<MatrixXd> llt(cov);
  const MatrixXd L = llt.matrixL();
  std::mt19937_64 rng(99);
  std::normal_distribution<double> z;
  const int R = 20000;
  MatrixXd est(R, 2);
  for (int r = 0; r < R; ++r) {
    const Eigen::Vector2d e(z(rng), z(rng));
    est.row(r) = (desk_truth().theta2 + L * e).transpose();
  }
  const MatrixXd zs = standardized_errors(est, desk_truth().theta2, G, rate);
  const Eigen::RowVector2d mean = zs.colwise().mean();
  const MatrixXd c = (zs.rowwise() - mean).transpose() * (zs.rowwise() - mean) / (R - 1);
  EXPECT_LT(mean.cwiseAbs().maxCoeff(), 5 / std::sqrt(R));
  EXPECT_LT((c - MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff(), 5 * std::sqrt(2.0 / R));
}

TEST(StandardizedErrors, SingularInformationIsRejected) {
  MatrixXd G(2, 2);
  G << 1, 1, 1, 1;
  try {
    standardized_errors(MatrixXd::Zero(3, 2), VectorXd::Zero(2), G, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::domain);
  }
}
