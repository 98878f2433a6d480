#include "hou/riccati.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hou/errors.hpp"

namespace hou {

namespace {

/// c' Sigma^{-1} c via a Cholesky solve.
MatrixXd information_matrix(const Coefficients& k) {
  Eigen::LLT<MatrixXd> llt(k.Sigma);
  if (llt.info() != Eigen::Success) throw_assumption("A3 violated: Sigma is not positive definite");
  return symmetrize(k.c.transpose() * llt.solve(k.c));
}

MatrixXd subspace_solution(const MatrixXd& basis, Eigen::Index d) {
  const MatrixXd X1 = basis.topRows(d);
  const MatrixXd X2 = basis.bottomRows(d);
  Eigen::JacobiSVD<MatrixXd> svd(X1);
  const VectorXd sv = svd.singularValues();
  if (sv.size() == 0 || sv.minCoeff() <= 1e-12 * std::max(1.0, sv.maxCoeff())) {
    throw_numeric("subspace degenerate: leading block of the invariant basis is singular");
  }
  // g X1 = X2  <=>  X1' g' = X2'
  const MatrixXd gt = X1.transpose().partialPivLu().solve(X2.transpose());
  return symmetrize(gt.transpose());
}

}  // namespace

MatrixXd hamiltonian(const Coefficients& k) {
  const Eigen::Index d = k.a.rows();
  MatrixXd H(2 * d, 2 * d);
  H.topLeftCorner(d, d) = k.a.transpose();
  H.topRightCorner(d, d) = information_matrix(k);
  H.bottomLeftCorner(d, d) = k.b * k.b.transpose();
  H.bottomRightCorner(d, d) = -k.a;
  return H;
}

RiccatiSolution solve_are(const Coefficients& k, double tol) {
  const Eigen::Index d = k.a.rows();
  RiccatiSolution s;
  s.hamiltonian = hamiltonian(k);
  const SpectralSplit split = spectral_split(s.hamiltonian, tol);
  if (split.pos_basis.cols() != d) {
    throw_assumption("A4 violated: Hamiltonian has " + std::to_string(split.pos_basis.cols()) +
                     " eigenvalues in the right half-plane, expected " + std::to_string(d));
  }
  s.spectrum = split.eigenvalues;
  s.min_spectral_gap = split.min_abs_real;
  s.gamma_plus = subspace_solution(split.pos_basis, d);
  s.gamma_minus = subspace_solution(split.neg_basis, d);
  s.alpha = k.a + s.gamma_plus * information_matrix(k);
  return s;
}

RiccatiSolution solve_are(const ModelSpec& spec, const ThetaPoint& theta, double tol) {
  return solve_are(eval_coeffs(spec, theta), tol);
}

MatrixXd riccati_rhs(const Coefficients& k, const MatrixXd& g) {
  const MatrixXd P = information_matrix(k);
  return -k.a * g - g * k.a.transpose() - g * P * g + k.b * k.b.transpose();
}

MatrixXd are_residual(const Coefficients& k, const MatrixXd& g) { return riccati_rhs(k, g); }

ControllabilityReport check_controllability(const Coefficients& k) {
  const Eigen::Index d = k.a.rows();
  const MatrixXd S = k.c.transpose() * k.Sigma * k.c;
  MatrixXd K(d, d * (d + 1));
  MatrixXd block = S;
  for (Eigen::Index p = 0; p <= d; ++p) {
    K.middleCols(p * d, d) = block;
    block = k.a.transpose() * block;
  }
  Eigen::JacobiSVD<MatrixXd> svd(K);
  const VectorXd sv = svd.singularValues();
  ControllabilityReport r;
  r.required = static_cast<int>(d);
  const double smax = sv.size() ? sv.maxCoeff() : 0.0;
  const double cut = static_cast<double>(std::max(K.rows(), K.cols())) *
                     std::numeric_limits<double>::epsilon() * smax;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > cut && sv[i] > 0.0) ++r.rank;
  }
  return r;
}

ControllabilityReport check_controllability(const ModelSpec& spec, const ThetaPoint& theta) {
  return check_controllability(eval_coeffs(spec, theta));
}

MatrixXd riccati_rk4_step(const Coefficients& k, const MatrixXd& g, double dt) {
  const MatrixXd k1 = riccati_rhs(k, g);
  const MatrixXd k2 = riccati_rhs(k, g + 0.5 * dt * k1);
  const MatrixXd k3 = riccati_rhs(k, g + 0.5 * dt * k2);
  const MatrixXd k4 = riccati_rhs(k, g + dt * k3);
  return symmetrize(g + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

RiccatiTrajectory integrate_riccati_ode(const ModelSpec& spec, const ThetaPoint& theta,
                                        const MatrixXd& gamma0, double T, double dt) {
  const Coefficients k = eval_coeffs(spec, theta);
  const Eigen::Index d = k.a.rows();
  if (gamma0.rows() != d || gamma0.cols() != d) throw_domain("gamma0 has the wrong shape");
  const double scale = 1.0 + gamma0.norm();
  if ((gamma0 - gamma0.transpose()).norm() > 1e-12 * scale) throw_domain("gamma0 is not symmetric");
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(gamma0, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-12 * scale) throw_domain("gamma0 is not positive semidefinite");
  if (!(dt > 0.0) || !(T >= 0.0)) throw_domain("integration horizon and step must be positive");
  const RiccatiSolution are = solve_are(k);
  if (dt > 1e-2 / are.alpha.norm()) {
    throw_domain("step too large for the Riccati ODE: need dt <= 1e-2 / ||alpha||");
  }

  RiccatiTrajectory traj;
  const auto steps = static_cast<std::size_t>(std::ceil(T / dt - 1e-9));
  traj.t.reserve(steps + 1);
  traj.gamma.reserve(steps + 1);
  traj.t.push_back(0.0);
  traj.gamma.push_back(symmetrize(gamma0));
  MatrixXd g = traj.gamma.back();
  for (std::size_t i = 1; i <= steps; ++i) {
    const double t_prev = traj.t.back();
    const double step = std::min(dt, T - t_prev);
    g = riccati_rk4_step(k, g, step);
    if (!g.allFinite() || g.norm() > 1e6) {
      throw_numeric("Riccati ODE blew up at t = " + std::to_string(t_prev + step));
    }
    traj.t.push_back(i == steps ? T : t_prev + step);
    traj.gamma.push_back(g);
  }
  return traj;
}

}  // namespace hou
