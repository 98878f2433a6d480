#pragma once

#include "hou/estimate.hpp"

namespace hou {

/// Gamma1_ij = 1/2 Tr( Sigma^{-1} dSigma_i Sigma^{-1} dSigma_j ) at theta1.
MatrixXd gamma1(const ModelSpec& spec, const VectorXd& theta1);

/// Gamma2_ij = int_0^inf Tr( dG_i(s)' Sigma*^{-1} dG_j(s) Sigma*^{-1} ) ds, with dG the
/// central difference of the drift gap in theta2 (step 1e-5 (1 + |theta2_i|)).
/// t_max <= 0 picks the truncation from the decay rate.
MatrixXd gamma2_quadrature(const ModelSpec& spec, const ThetaPoint& truth, double t_max = 0.0);

/// Truncation point picked automatically by gamma2_quadrature.
double gamma2_horizon(const ModelSpec& spec, const ThetaPoint& truth);
/// Scalar closed form from the derivatives of a and alpha.
MatrixXd gamma2_closed_form_1d(const ModelSpec& spec, const ThetaPoint& truth);

/// Closed form for scalar models, quadrature otherwise.
MatrixXd gamma2(const ModelSpec& spec, const ThetaPoint& truth);

/// Smallest eigenvalue above 1e-10 times the trace.
bool is_positive_definite(const MatrixXd& M);

struct AsymptoticInfo {
  MatrixXd gamma1;
  MatrixXd gamma2;
  VectorXd se1;  // sqrt(diag(Gamma1^{-1}) / n); empty unless pd1
  VectorXd se2;  // sqrt(diag(Gamma2^{-1}) / t_n); empty unless pd2
  bool pd1 = false;
  bool pd2 = false;
};

AsymptoticInfo asymptotic_info(const ModelSpec& spec, const ThetaPoint& truth,
                               const SamplingScheme& scheme);

/// z_r = rate * Gamma^{1/2} (theta_r - theta*), one row per estimate.
/// Throws ErrorKind::domain unless Gamma is positive definite.
MatrixXd standardized_errors(const MatrixXd& estimates, const VectorXd& theta_star,
                             const MatrixXd& gamma, double rate);

}  // namespace hou
