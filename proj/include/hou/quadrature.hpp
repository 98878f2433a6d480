#pragma once

#include <functional>

#include <Eigen/Dense>

namespace hou {

using Eigen::VectorXd;

/// Vector-valued integrand; every call must return the same length.
using VecIntegrand = std::function<VectorXd(double)>;

struct QuadOptions {
  double abs_tol = 1e-13;
  double rel_tol = 1e-12;
  int max_intervals = 4000;
  /// Initial uniform split of [a, b] before adaptive bisection.
  int initial_intervals = 8;
};

struct QuadResult {
  VectorXd value;
  double error = 0.0;  ///< max-norm error estimate summed over intervals
  int evaluations = 0;
  int intervals = 0;
};

/// Globally adaptive 7/15-point Gauss-Kronrod. Throws ErrorKind::nonconvergence
/// if the error target is not met within max_intervals.
QuadResult integrate(const VecIntegrand& f, double a, double b, const QuadOptions& opts = {});

/// Truncation point T for an integrand on [0, inf) whose max-norm decays at
/// least like exp(-rate s) times a polynomial. T grows from `start` until the
/// estimated tail f(T)/rate, sampled at a few points past T, is below `tol`.
double tail_horizon(const VecIntegrand& f, double rate, double tol, double start = 0.0);

}  // namespace hou
