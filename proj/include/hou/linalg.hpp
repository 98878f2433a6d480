#pragma once

#include <Eigen/Dense>

namespace hou {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// exp(A t) by scaling and squaring with a Pade core. exp(A * 0) is exactly I.
MatrixXd expm(const MatrixXd& A, double t = 1.0);

/// Q(h) = int_0^h exp(A s) B B' exp(A' s) ds, read off a block-augmented exponential.
MatrixXd gramian(const MatrixXd& A, const MatrixXd& B, double h);

/// Invariant subspaces of a real matrix split by the sign of Re(lambda).
struct SpectralSplit {
  MatrixXd pos_basis;  // orthonormal columns, Re(lambda) > 0
  MatrixXd neg_basis;  // orthonormal columns, Re(lambda) < 0
  Eigen::VectorXcd eigenvalues;
  double min_abs_real = 0.0;
};

/// Ordered real Schur split. A negative `tol` selects the default 1e-8 * ||H||_F.
/// Throws ErrorKind::assumption if any eigenvalue has |Re(lambda)| <= tol.
SpectralSplit spectral_split(const MatrixXd& H, double tol = -1.0);

/// Solves A V + V A' = Q for symmetric V (Kronecker form; small dimensions only).
MatrixXd lyapunov(const MatrixXd& A, const MatrixXd& Q);

/// Square-root factor L with L L' = Q for symmetric PSD Q. Eigenvalues down to
/// -1e-12 * ||Q|| are clipped to zero; anything more negative is a numeric error.
MatrixXd psd_factor(const MatrixXd& Q);

/// Unique symmetric PSD square root.
MatrixXd sym_sqrt(const MatrixXd& S);

inline MatrixXd symmetrize(const MatrixXd& M) { return 0.5 * (M + M.transpose()); }

bool all_finite(const MatrixXd& M);

}  // namespace hou
