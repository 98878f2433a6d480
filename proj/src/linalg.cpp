#include "hou/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <lapacke.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "hou/errors.hpp"

namespace hou {

namespace {

lapack_logical select_positive(const double* wr, const double* /*wi*/) { return *wr > 0.0; }
lapack_logical select_negative(const double* wr, const double* /*wi*/) { return *wr < 0.0; }

/// Leading `sdim` Schur vectors after reordering by `select`.
MatrixXd ordered_schur_basis(const MatrixXd& H, LAPACK_D_SELECT2 select, VectorXd& wr, VectorXd& wi) {
  const auto n = static_cast<lapack_int>(H.rows());
  MatrixXd work = H;
  MatrixXd vs(n, n);
  wr.resize(n);
  wi.resize(n);
  lapack_int sdim = 0;
  const lapack_int info = LAPACKE_dgees(LAPACK_COL_MAJOR, 'V', 'S', select, n, work.data(), n,
                                        &sdim, wr.data(), wi.data(), vs.data(), n);
  if (info != 0) {
    // info = n+2 flags rounding-induced reordering trouble; treat it like any other failure.
    throw_numeric("real Schur decomposition failed (dgees info " + std::to_string(info) + ")");
  }
  return vs.leftCols(sdim);
}

}  // namespace

bool all_finite(const MatrixXd& M) { return M.allFinite(); }

MatrixXd expm(const MatrixXd& A, double t) {
  if (A.rows() != A.cols()) throw_domain("expm: matrix must be square");
  if (!A.allFinite() || !std::isfinite(t)) throw_numeric("expm: non-finite input");
  if (t == 0.0) return MatrixXd::Identity(A.rows(), A.cols());
  MatrixXd E = (A * t).exp();
  if (!E.allFinite()) throw_numeric("expm: overflow");
  return E;
}

MatrixXd gramian(const MatrixXd& A, const MatrixXd& B, double h) {
  const Eigen::Index d = A.rows();
  if (A.cols() != d || B.rows() != d) throw_domain("gramian: dimension mismatch");
  if (h < 0.0) throw_domain("gramian: negative horizon");
  if (h == 0.0) return MatrixXd::Zero(d, d);
  // exp([[A, BB'], [0, -A']] h) = [[F, G], [0, F^{-T}]], and Q = G F'.
  MatrixXd M = MatrixXd::Zero(2 * d, 2 * d);
  M.topLeftCorner(d, d) = A;
  M.topRightCorner(d, d) = B * B.transpose();
  M.bottomRightCorner(d, d) = -A.transpose();
  const MatrixXd E = expm(M, h);
  const MatrixXd F = E.topLeftCorner(d, d);
  const MatrixXd G = E.topRightCorner(d, d);
  return symmetrize(G * F.transpose());
}

SpectralSplit spectral_split(const MatrixXd& H, double tol) {
  if (H.rows() != H.cols()) throw_domain("spectral_split: matrix must be square");
  if (!H.allFinite()) throw_numeric("spectral_split: non-finite input");
  if (tol < 0.0) tol = 1e-8 * H.norm();

  SpectralSplit out;
  VectorXd wr, wi;
  out.pos_basis = ordered_schur_basis(H, select_positive, wr, wi);
  out.eigenvalues.resize(wr.size());
  for (Eigen::Index i = 0; i < wr.size(); ++i) out.eigenvalues[i] = {wr[i], wi[i]};
  out.min_abs_real = wr.size() ? wr.cwiseAbs().minCoeff() : 0.0;
  if (out.min_abs_real <= tol) {
    throw_assumption("A4 violated: eigenvalue within " + std::to_string(tol) +
                     " of the imaginary axis (|Re| = " + std::to_string(out.min_abs_real) + ")");
  }
  out.neg_basis = ordered_schur_basis(H, select_negative, wr, wi);
  if (out.pos_basis.cols() + out.neg_basis.cols() != H.rows()) {
    throw_numeric("spectral_split: subspace dimensions do not add up");
  }
  return out;
}

MatrixXd lyapunov(const MatrixXd& A, const MatrixXd& Q) {
  const Eigen::Index d = A.rows();
  const MatrixXd I = MatrixXd::Identity(d, d);
  // vec(A V + V A') = (I kron A + A kron I) vec(V)
  MatrixXd K(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      K.block(i * d, j * d, d, d) = I(i, j) * A + A(i, j) * I;
    }
  }
  const VectorXd q = Eigen::Map<const VectorXd>(Q.data(), d * d);
  Eigen::FullPivLU<MatrixXd> lu(K);
  if (!lu.isInvertible()) throw_numeric("lyapunov: singular operator");
  const VectorXd v = lu.solve(q);
  return symmetrize(Eigen::Map<const MatrixXd>(v.data(), d, d));
}

MatrixXd psd_factor(const MatrixXd& Q) {
  const Eigen::Index d = Q.rows();
  if (d == 0) return MatrixXd(0, 0);
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(symmetrize(Q));
  if (es.info() != Eigen::Success) throw_numeric("psd_factor: eigendecomposition failed");
  VectorXd ev = es.eigenvalues();
  const double floor = -1e-12 * std::max(Q.norm(), std::numeric_limits<double>::min());
  for (Eigen::Index i = 0; i < d; ++i) {
    if (ev[i] < floor) throw_numeric("psd_factor: matrix is not positive semidefinite");
    ev[i] = std::sqrt(std::max(ev[i], 0.0));
  }
  return es.eigenvectors() * ev.asDiagonal();
}

MatrixXd sym_sqrt(const MatrixXd& S) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(symmetrize(S));
  if (es.info() != Eigen::Success) throw_numeric("sym_sqrt: eigendecomposition failed");
  const VectorXd r = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return symmetrize(es.eigenvectors() * r.asDiagonal() * es.eigenvectors().transpose());
}

}  // namespace hou
