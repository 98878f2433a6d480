#include "hou/filter.hpp"

#include "hou/errors.hpp"
#include "hou/linalg.hpp"

namespace hou {

DiscreteFilter::DiscreteFilter(const MatrixXd& alpha, const MatrixXd& gamma_plus,
                               const MatrixXd& c, const MatrixXd& Sigma, double h) {
  if (!(h > 0.0)) throw_domain("filter step must be positive");
  decay_ = expm(-alpha, h);
  Eigen::LLT<MatrixXd> llt(Sigma);
  if (llt.info() != Eigen::Success) throw_assumption("A3 violated: Sigma is not positive definite");
  // gamma c' Sigma^{-1} = (Sigma^{-1} c gamma)'
  const MatrixXd k = llt.solve(c * gamma_plus).transpose();
  gain_ = decay_ * k;
}

DiscreteFilter DiscreteFilter::from_model(const ModelSpec& spec, const ThetaPoint& theta, double h) {
  const Coefficients k = eval_coeffs(spec, theta);
  const RiccatiSolution r = solve_are(k);
  return DiscreteFilter(r.alpha, r.gamma_plus, k.c, k.Sigma, h);
}

VectorXd DiscreteFilter::step(const VectorXd& m_prev, const VectorXd& dy) const {
  return decay_ * m_prev + gain_ * dy;
}

VectorXd filter_step(const MatrixXd& alpha, const MatrixXd& gamma_plus, const MatrixXd& c,
                     const MatrixXd& Sigma, double h, const VectorXd& m_prev, const VectorXd& dy) {
  return DiscreteFilter(alpha, gamma_plus, c, Sigma, h).step(m_prev, dy);
}

FilterPath run_discrete_filter(const MatrixXd& dy, double h, const ModelSpec& spec,
                               const ThetaPoint& theta, const VectorXd& m0, std::size_t burn_in) {
  if (m0.size() != spec.d1) throw_config("filter.m0", "initial value has the wrong dimension");
  if (dy.cols() != spec.d2) throw_domain("increments have the wrong dimension");
  const DiscreteFilter f = DiscreteFilter::from_model(spec, theta, h);
  const Eigen::Index n = dy.rows();

  FilterPath out;
  out.theta = theta;
  out.m0 = m0;
  out.burn_in = burn_in;
  out.m_hat.resize(n + 1, spec.d1);
  out.m_hat.row(0) = m0.transpose();
  VectorXd m = m0;
  for (Eigen::Index i = 0; i < n; ++i) {
    m = f.decay() * m + f.gain() * dy.row(i).transpose();
    out.m_hat.row(i + 1) = m.transpose();
  }
  if (!out.m_hat.allFinite()) throw_numeric("filter produced non-finite values");
  return out;
}

FilterPath run_discrete_filter(const ObservationPath& path, const ModelSpec& spec,
                               const ThetaPoint& theta, const VectorXd& m0, std::size_t burn_in) {
  return run_discrete_filter(increments(path), path.h(), spec, theta, m0, burn_in);
}

ContinuousReference run_continuous_reference(const ObservationPath& path, const ModelSpec& spec,
                                             const ThetaPoint& theta, const VectorXd& m0,
                                             const MatrixXd& gamma0) {
  const Coefficients k = eval_coeffs(spec, theta);
  if (m0.size() != spec.d1) throw_config("filter.m0", "initial value has the wrong dimension");
  if (gamma0.rows() != spec.d1 || gamma0.cols() != spec.d1) throw_domain("gamma0 has the wrong shape");
  Eigen::LLT<MatrixXd> llt(k.Sigma);
  if (llt.info() != Eigen::Success) throw_assumption("A3 violated: Sigma is not positive definite");
  const MatrixXd Sinv_c = llt.solve(k.c);  // Sigma^{-1} c
  const double dt = path.h();
  const MatrixXd dy = increments(path);
  const Eigen::Index n = dy.rows();

  ContinuousReference out;
  out.t = path.times();
  out.m.resize(n + 1, spec.d1);
  out.gamma.reserve(static_cast<std::size_t>(n + 1));
  VectorXd m = m0;
  MatrixXd g = symmetrize(gamma0);
  out.m.row(0) = m.transpose();
  out.gamma.push_back(g);
  for (Eigen::Index i = 0; i < n; ++i) {
    const VectorXd innovation = dy.row(i).transpose() - k.c * m * dt;
    m = m - k.a * m * dt + g * Sinv_c.transpose() * innovation;
    const MatrixXd g_next = riccati_rk4_step(k, g, dt);
    if (!((g_next - g).norm() <= 1.0)) {
      throw_domain("continuous reference: grid too coarse for the covariance equation");
    }
    g = g_next;
    out.m.row(i + 1) = m.transpose();
    out.gamma.push_back(g);
  }
  return out;
}

}  // namespace hou
