#include "hou/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include "hou/errors.hpp"
#include "hou/linalg.hpp"
#include "hou/quadrature.hpp"

namespace hou {

namespace {

constexpr double kGapStep = 1e-5;

MatrixXd inverse_spd(const MatrixXd& S) {
  Eigen::LLT<MatrixXd> llt(S);
  if (llt.info() != Eigen::Success) throw_assumption("A3 violated: Sigma is not positive definite");
  return llt.solve(MatrixXd::Identity(S.rows(), S.cols()));
}

VectorXd standard_errors(const MatrixXd& gamma, double scale) {
  const MatrixXd inv = gamma.ldlt().solve(MatrixXd::Identity(gamma.rows(), gamma.cols()));
  return (inv.diagonal() / scale).cwiseSqrt();
}

}  // namespace

MatrixXd gamma1(const ModelSpec& spec, const VectorXd& theta1) {
  const Coefficients k = eval_coeffs(spec, {theta1, spec.theta2_box.center()});
  const CoeffDerivatives d = coeff_derivatives(spec, {theta1, spec.theta2_box.center()});
  const MatrixXd P = inverse_spd(k.Sigma);
  const auto m1 = d.Sigma.size();
  std::vector<MatrixXd> w(m1);
  for (std::size_t i = 0; i < m1; ++i) w[i] = P * d.Sigma[i];
  MatrixXd g(m1, m1);
  for (std::size_t i = 0; i < m1; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double v = 0.5 * (w[i] * w[j]).trace();
      g(i, j) = g(j, i) = v;
    }
  }
  return g;
}

namespace {

// Integrand of Gamma2 (lower triangle, row-major) built from central
// differences of the drift gap.
struct Gamma2Integrand {
  std::vector<DriftGap> plus;
  std::vector<DriftGap> minus;
  std::vector<double> step;
  MatrixXd P;
  double rate = 0.0;

  Gamma2Integrand(const ModelSpec& spec, const ThetaPoint& truth) {
    rate = DriftGap(spec, truth, truth.theta2).decay_rate();
    for (Eigen::Index i = 0; i < spec.m2; ++i) {
      const double e = kGapStep * (1.0 + std::abs(truth.theta2[i]));
      VectorXd tp = truth.theta2;
      VectorXd tm = truth.theta2;
      tp[i] += e;
      tm[i] -= e;
      plus.emplace_back(spec, truth, tp);
      minus.emplace_back(spec, truth, tm);
      rate = std::min({rate, plus.back().decay_rate(), minus.back().decay_rate()});
      step.push_back(e);
    }
    P = inverse_spd(eval_coeffs(spec, truth).Sigma);
  }

  VecIntegrand integrand() const {
    return [this](double s) {
      const std::size_t m2 = step.size();
      std::vector<MatrixXd> dG(m2);
      std::vector<MatrixXd> PdGP(m2);
      for (std::size_t i = 0; i < m2; ++i) {
        dG[i] = (plus[i](s) - minus[i](s)) / (2.0 * step[i]);
        PdGP[i] = P * dG[i] * P;
      }
      VectorXd v(static_cast<Eigen::Index>(m2 * (m2 + 1) / 2));
      Eigen::Index k = 0;
      for (std::size_t i = 0; i < m2; ++i) {
        for (std::size_t j = 0; j <= i; ++j) v[k++] = (dG[i].array() * PdGP[j].array()).sum();
      }
      return v;
    };
  }

  double horizon() const { return tail_horizon(integrand(), 2.0 * rate, 1e-13); }
};

}  // namespace

double gamma2_horizon(const ModelSpec& spec, const ThetaPoint& truth) {
  if (spec.m2 == 0) return 0.0;
  return Gamma2Integrand(spec, truth).horizon();
}

MatrixXd gamma2_quadrature(const ModelSpec& spec, const ThetaPoint& truth, double t_max) {
  const auto m2 = static_cast<std::size_t>(spec.m2);
  MatrixXd g = MatrixXd::Zero(spec.m2, spec.m2);
  if (m2 == 0) return g;
  const Gamma2Integrand gi(spec, truth);
  const double T = t_max > 0.0 ? t_max : gi.horizon();
  QuadOptions qo;
  qo.rel_tol = 1e-11;
  const VectorXd v = integrate(gi.integrand(), 0.0, T, qo).value;
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < spec.m2; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) g(i, j) = g(j, i) = v[k++];
  }
  return g;
}

MatrixXd gamma2_closed_form_1d(const ModelSpec& spec, const ThetaPoint& truth) {
  if (!spec.is_scalar()) throw_domain("closed-form Gamma2 needs a scalar model");
  const Coefficients k = eval_coeffs(spec, truth);
  const CoeffDerivatives d = coeff_derivatives(spec, truth);
  const double a = k.a(0, 0);
  const double b = k.b(0, 0);
  const double c = k.c(0, 0);
  const double S = k.Sigma(0, 0);
  const double al = solve_are(k).alpha(0, 0);
  const Eigen::Index m2 = spec.m2;
  VectorXd da(m2);
  VectorXd dal(m2);
  for (Eigen::Index i = 0; i < m2; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    da[i] = d.a[ii](0, 0);
    const double db = d.b[ii](0, 0);
    const double dc = d.c[ii](0, 0);
    // alpha^2 = a^2 + b^2 c^2 / Sigma
    dal[i] = (a * da[i] + (b * c * c * db + b * b * c * dc) / S) / al;
  }
  const MatrixXd cross = dal * da.transpose() + da * dal.transpose();
  return dal * dal.transpose() / (2.0 * al) + da * da.transpose() / (2.0 * a) - cross / (al + a);
}

MatrixXd gamma2(const ModelSpec& spec, const ThetaPoint& truth) {
  if (spec.is_scalar()) return gamma2_closed_form_1d(spec, truth);
  return gamma2_quadrature(spec, truth);
}

bool is_positive_definite(const MatrixXd& M) {
  if (M.size() == 0) return false;
  const double tr = M.trace();
  if (!(tr > 0.0)) return false;
  const Eigen::SelfAdjointEigenSolver<MatrixXd> es(symmetrize(M));
  return es.eigenvalues().minCoeff() > 1e-10 * tr;
}

AsymptoticInfo asymptotic_info(const ModelSpec& spec, const ThetaPoint& truth,
                               const SamplingScheme& scheme) {
  AsymptoticInfo info;
  info.gamma1 = gamma1(spec, truth.theta1);
  info.gamma2 = spec.m2 > 0 ? gamma2(spec, truth) : MatrixXd(0, 0);
  info.pd1 = is_positive_definite(info.gamma1);
  info.pd2 = is_positive_definite(info.gamma2);
  if (info.pd1) info.se1 = standard_errors(info.gamma1, static_cast<double>(scheme.n));
  if (info.pd2) info.se2 = standard_errors(info.gamma2, scheme.t_n());
  return info;
}

MatrixXd standardized_errors(const MatrixXd& estimates, const VectorXd& theta_star,
                             const MatrixXd& gamma, double rate) {
  if (!is_positive_definite(gamma)) throw_domain("information matrix is not positive definite");
  if (estimates.cols() != theta_star.size() || gamma.rows() != theta_star.size()) {
    throw_domain("standardized_errors: dimension mismatch");
  }
  const MatrixXd root = sym_sqrt(gamma);
  // Rows are estimates, so z' = rate (theta - theta*)' Gamma^{1/2}.
  const MatrixXd centered = estimates.rowwise() - theta_star.transpose();
  return rate * centered * root;
}

}  // namespace hou
