#pragma once

#include <span>
#include <string>
#include <vector>

#include "hou/optimize.hpp"
#include "hou/riccati.hpp"
#include "hou/simulate.hpp"

namespace hou {

// --- noise-scale stage -----------------------------------------------------

/// Sum of dY_j dY_j' over all increments (d2 x d2).
MatrixXd scatter(const MatrixXd& dy);

/// H1(theta1) = -1/2 sum_j { (1/h) dY_j' Sigma^{-1} dY_j + log det Sigma }.
/// Throws ErrorKind::domain if Sigma(theta1) is not positive definite.
double h1_objective(const MatrixXd& dy, double h, const ModelSpec& spec, const VectorXd& theta1);
double h1_objective(const ObservationPath& path, const ModelSpec& spec, const VectorXd& theta1);
/// Same value from a precomputed scatter matrix over n increments.
double h1_from_scatter(const MatrixXd& S, std::size_t n, double h, const MatrixXd& Sigma);

struct ClosedFormTheta1 {
  VectorXd value;           // per observation coordinate
  bool degenerate = false;  // some coordinate had only zero increments
};

/// sqrt( sum_j dY_jk^2 / t_n ) per coordinate k; exact for sigma(theta1) = diag(theta1).
ClosedFormTheta1 theta1_hat_closed_form(const MatrixXd& dy, double h);
/// Scalar case; returns 0 (flagged) on an all-zero path.
ClosedFormTheta1 theta1_hat_closed_form_1d(const ObservationPath& path);

struct H1Fit {
  VectorXd theta1;
  double value = 0.0;
  bool converged = false;
  bool degenerate = false;
  bool closed_form = false;
  int iterations = 0;
};

/// Closed form clamped to the box when sigma is diagonal in theta1, otherwise
/// box-constrained Nelder-Mead on H1.
H1Fit maximize_h1(const MatrixXd& dy, double h, const ModelSpec& spec, const OptimOptions& opts = {});

// --- dynamics stage ----------------------------------------------------------

enum class H2Route {
  automatic,  ///< SIMD lane kernel for scalar models, matrix recursion otherwise
  kernel,     ///< lane kernel; scalar models only
  matrix,     ///< Eigen recursion
};

/// H2(theta2) = 1/2 sum_{j > burn_in} { -h |c m_{j-1}|^2_{Sigma^{-1}} + 2 m_{j-1}' c' Sigma^{-1} dY_j },
/// with m the discrete filter run at (theta1, theta2) from m0. An empty m0 means zero.
double h2_objective(const MatrixXd& dy, double h, const ModelSpec& spec, const VectorXd& theta1,
                    const VectorXd& theta2, const VectorXd& m0 = {}, std::size_t burn_in = 0,
                    H2Route route = H2Route::automatic);

/// Evaluates several theta2 candidates at once. Candidates whose Riccati
/// solution fails get -inf instead of throwing.
void h2_objective_batch(const MatrixXd& dy, double h, const ModelSpec& spec, const VectorXd& theta1,
                        std::span<const VectorXd> theta2s, std::span<double> out,
                        const VectorXd& m0 = {}, std::size_t burn_in = 0,
                        H2Route route = H2Route::automatic);

struct H2Options {
  VectorXd m0;  // empty means zero
  std::size_t burn_in = 0;
  OptimOptions optim;
  H2Route route = H2Route::automatic;
};

struct H2Fit {
  VectorXd theta2;
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
  int evaluations = 0;
  int starts_converged = 0;
};

H2Fit maximize_h2(const MatrixXd& dy, double h, const ModelSpec& spec, const VectorXd& theta1,
                  const H2Options& opts = {});

// --- two-stage pipeline ------------------------------------------------------

enum class Theta1Source { estimated, fixed };

struct EstimateOptions {
  Theta1Source theta1_source = Theta1Source::estimated;
  VectorXd theta1_fixed;  // used when theta1_source == fixed
  OptimOptions h1_optim;
  H2Options h2;
};

struct EstimationResult {
  VectorXd theta1_hat;
  VectorXd theta2_hat;
  double h1_value = 0.0;
  double h2_value = 0.0;
  bool converged1 = false;
  bool converged2 = false;
  bool theta1_degenerate = false;
  int iterations1 = 0;
  int iterations2 = 0;
  int evaluations2 = 0;
  std::size_t burn_in = 0;
  VectorXd se1;  // left empty here; filled from the asymptotic information
  VectorXd se2;

  bool converged() const { return converged1 && converged2; }
};

/// theta1 from H1, then theta2 from H2 with theta1 frozen.
EstimationResult estimate(const ObservationPath& path, const ModelSpec& spec,
                          const EstimateOptions& opts = {});

// --- identifiability ---------------------------------------------------------

/// Gap between the fitted and true filtered drifts, as a function of lag s:
///   G(s) = c I(s) gamma* c*' + c e^{-alpha s} gamma c' - c* e^{-a* s} gamma* c*'
///   I(s) = int_0^s e^{-alpha u} gamma c' Sigma*^{-1} c* e^{-a*(s-u)} du
/// Unstarred quantities are at (theta1*, theta2), starred ones at the truth.
/// G vanishes identically at theta2 = theta2*.
class DriftGap {
 public:
  DriftGap(const ModelSpec& spec, const ThetaPoint& truth, const VectorXd& theta2);

  MatrixXd operator()(double s) const;  // d2 x d2
  /// Smallest real part among the eigenvalues of alpha and a*.
  double decay_rate() const { return rate_; }

 private:
  MatrixXd block_;  // [[-alpha, M], [0, -a*]]
  MatrixXd c_;
  MatrixXd c_star_;
  MatrixXd gamma_ct_;       // gamma c'
  MatrixXd gamma_ct_star_;  // gamma* c*'
  int d1_ = 1;
  double rate_ = 0.0;
};

/// Y1(theta1) = -1/2 [ Tr(Sigma^{-1} Sigma*) - d2 + log det Sigma - log det Sigma* ].
double y1(const ModelSpec& spec, const VectorXd& theta1, const VectorXd& theta1_star);

/// Y2(theta2) = -1/2 int_0^inf Tr( G(s)' Sigma*^{-1} G(s) Sigma*^{-1} ) ds by quadrature.
/// t_max <= 0 picks the truncation from the decay rate.
double y2_quadrature(const ModelSpec& spec, const VectorXd& theta2, const ThetaPoint& truth,
                     double t_max = 0.0);
/// Scalar closed form in terms of a, alpha at theta2 and at the truth.
double y2_closed_form_1d(const ModelSpec& spec, const VectorXd& theta2, const ThetaPoint& truth);
/// Closed form for scalar models, quadrature otherwise.
double y2(const ModelSpec& spec, const VectorXd& theta2, const ThetaPoint& truth, double t_max = 0.0);

struct IdentifiabilityReport {
  double c1 = 0.0;  // largest c with Y1 <= -c |theta1 - theta1*|^2 on the grid
  double c2 = 0.0;
  double max_y1 = 0.0;  // largest value off the truth
  double max_y2 = 0.0;
  std::size_t points1 = 0;
  std::size_t points2 = 0;
  std::size_t skipped2 = 0;  // grid points where the Riccati solve failed
  std::vector<std::string> warnings;

  bool ok() const { return c1 > 0.0 && c2 > 0.0; }
};

/// Evaluates Y1 and Y2 on closed box grids with `per_dim` points per axis.
/// A non-positive fitted constant is reported as a warning, not thrown.
IdentifiabilityReport check_identifiability(const ModelSpec& spec, const ThetaPoint& truth,
                                            int per_dim = 7);

}  // namespace hou
