#pragma once

#include <vector>

#include "hou/model.hpp"
#include "hou/riccati.hpp"
#include "hou/simulate.hpp"

namespace hou {

/// Stationary-gain discrete filter
///   m_{i+1} = exp(-alpha h) m_i + exp(-alpha h) gamma_+ c' Sigma^{-1} dY_{i+1}.
/// The decay and gain matrices are formed once at construction.
class DiscreteFilter {
 public:
  DiscreteFilter(const MatrixXd& alpha, const MatrixXd& gamma_plus, const MatrixXd& c,
                 const MatrixXd& Sigma, double h);

  /// Solves the Riccati equation at theta (theta1 is whichever estimate the caller supplies).
  static DiscreteFilter from_model(const ModelSpec& spec, const ThetaPoint& theta, double h);

  VectorXd step(const VectorXd& m_prev, const VectorXd& dy) const;

  const MatrixXd& decay() const { return decay_; }
  const MatrixXd& gain() const { return gain_; }

 private:
  MatrixXd decay_;
  MatrixXd gain_;
};

VectorXd filter_step(const MatrixXd& alpha, const MatrixXd& gamma_plus, const MatrixXd& c,
                     const MatrixXd& Sigma, double h, const VectorXd& m_prev, const VectorXd& dy);

struct FilterPath {
  MatrixXd m_hat;  // (n+1) x d1, row i is the state after i increments
  ThetaPoint theta;
  VectorXd m0;
  std::size_t burn_in = 0;  // carried for downstream consumers; not applied here
};

/// Runs the recursion over n x d2 increments.
FilterPath run_discrete_filter(const MatrixXd& dy, double h, const ModelSpec& spec,
                               const ThetaPoint& theta, const VectorXd& m0,
                               std::size_t burn_in = 0);
FilterPath run_discrete_filter(const ObservationPath& path, const ModelSpec& spec,
                               const ThetaPoint& theta, const VectorXd& m0,
                               std::size_t burn_in = 0);

/// Kalman-Bucy filter with time-varying covariance, integrated on the path's own grid.
struct ContinuousReference {
  VectorXd t;
  MatrixXd m;                  // (n+1) x d1
  std::vector<MatrixXd> gamma; // n+1 covariance matrices
};

/// Euler-Maruyama for the conditional mean, RK4 for the covariance. The path is
/// expected to be dense relative to the grid it is compared against. Throws
/// ErrorKind::domain if a covariance step changes by more than 1 in norm.
ContinuousReference run_continuous_reference(const ObservationPath& path, const ModelSpec& spec,
                                             const ThetaPoint& theta, const VectorXd& m0,
                                             const MatrixXd& gamma0);

}  // namespace hou
