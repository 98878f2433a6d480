#pragma once

#include <vector>

#include "hou/linalg.hpp"
#include "hou/model.hpp"

namespace hou {

struct RiccatiSolution {
  MatrixXd gamma_plus;   // maximal solution, steady-state filter covariance
  MatrixXd gamma_minus;  // minimal solution
  MatrixXd alpha;        // a + gamma_plus c' Sigma^{-1} c
  MatrixXd hamiltonian;
  Eigen::VectorXcd spectrum;  // eigenvalues of the Hamiltonian
  double min_spectral_gap = 0.0;
};

/// [[a', c' Sigma^{-1} c], [b b', -a]]
MatrixXd hamiltonian(const Coefficients& k);

/// Maximal and minimal solutions of
///   -a g - g a' - g c' Sigma^{-1} c g + b b' = 0
/// from the stable/antistable invariant subspaces of the Hamiltonian.
RiccatiSolution solve_are(const Coefficients& k, double tol = -1.0);
RiccatiSolution solve_are(const ModelSpec& spec, const ThetaPoint& theta, double tol = -1.0);

/// Left-hand side of the algebraic Riccati equation at g.
MatrixXd are_residual(const Coefficients& k, const MatrixXd& g);

struct ControllabilityReport {
  int rank = 0;
  int required = 0;
  bool pass() const { return rank == required; }
};

/// Numerical rank of [S, a'S, ..., a'^{d1} S] with S = c' Sigma c.
ControllabilityReport check_controllability(const Coefficients& k);
ControllabilityReport check_controllability(const ModelSpec& spec, const ThetaPoint& theta);

/// Right-hand side of the Riccati ODE.
MatrixXd riccati_rhs(const Coefficients& k, const MatrixXd& g);

/// One classical RK4 step of the Riccati ODE, symmetrized.
MatrixXd riccati_rk4_step(const Coefficients& k, const MatrixXd& g, double dt);

struct RiccatiTrajectory {
  std::vector<double> t;
  std::vector<MatrixXd> gamma;
};

/// Fixed-step RK4 integration from gamma0 over [0, T]. Requires a symmetric PSD
/// gamma0 and dt <= 1e-2 / ||alpha||. Throws ErrorKind::numeric once ||gamma_t|| > 1e6.
RiccatiTrajectory integrate_riccati_ode(const ModelSpec& spec, const ThetaPoint& theta,
                                        const MatrixXd& gamma0, double T, double dt);

}  // namespace hou
