#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hou {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Closed axis-aligned parameter box.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  Box() = default;
  Box(std::vector<double> lower, std::vector<double> upper);

  std::size_t dim() const { return lo.size(); }
  bool contains(const VectorXd& x) const;
  VectorXd clamp(const VectorXd& x) const;
  VectorXd center() const;
  /// Smallest distance from x to any face, in coordinate units.
  double margin(const VectorXd& x, std::size_t coord) const;

  /// Tensor grid with `per_dim` points per axis. With `interior` the points sit at
  /// k/(per_dim+1) of each side, otherwise they span the closed interval.
  std::vector<VectorXd> grid(int per_dim, bool interior) const;

  bool operator==(const Box&) const = default;
};

struct ThetaPoint {
  VectorXd theta1;
  VectorXd theta2;
};

struct SamplingScheme {
  std::size_t n = 0;
  double h = 0.0;

  double t_n() const { return static_cast<double>(n) * h; }
  /// Throws a config error unless n >= 1 and 0 < h <= 1.
  void validate() const;

  bool operator==(const SamplingScheme&) const = default;
};

using MatrixMap = std::function<MatrixXd(const VectorXd&)>;
/// Returns one matrix per parameter coordinate.
using JacobianMap = std::function<std::vector<MatrixXd>(const VectorXd&)>;

/// How the observation-noise scale depends on theta1. `diagonal` means
/// sigma(theta1) = diag(theta1), which admits a closed-form theta1 estimate.
enum class SigmaForm { general, diagonal };

/// Parametric hidden-OU model:
///   dX = -a(theta2) X dt + b(theta2) dW1,   dY = c(theta2) X dt + sigma(theta1) dW2.
/// Immutable after construction; safe to share between threads.
struct ModelSpec {
  std::string family;
  int d1 = 1;
  int d2 = 1;
  int m1 = 1;
  int m2 = 1;

  MatrixMap a;      // theta2 -> d1 x d1
  MatrixMap b;      // theta2 -> d1 x d1
  MatrixMap c;      // theta2 -> d2 x d1
  MatrixMap sigma;  // theta1 -> d2 x d2

  Box theta1_box;
  Box theta2_box;
  std::vector<std::string> theta1_names;
  std::vector<std::string> theta2_names;

  SigmaForm sigma_form = SigmaForm::general;

  // Optional analytic first derivatives; take precedence over finite differences.
  JacobianMap da;
  JacobianMap db;
  JacobianMap dc;
  JacobianMap dSigma;

  bool is_scalar() const { return d1 == 1 && d2 == 1; }
};

struct Coefficients {
  MatrixXd a;
  MatrixXd b;
  MatrixXd c;
  MatrixXd sigma;
  MatrixXd Sigma;  // sigma sigma'
};

/// Evaluates the coefficient maps and checks their shapes against the declared dimensions.
Coefficients eval_coeffs(const ModelSpec& spec, const ThetaPoint& theta);

/// First derivatives: a, b, c indexed by theta2 coordinate, Sigma by theta1 coordinate.
struct CoeffDerivatives {
  std::vector<MatrixXd> a;
  std::vector<MatrixXd> b;
  std::vector<MatrixXd> c;
  std::vector<MatrixXd> Sigma;
};

/// Second derivatives, [i][j] symmetric in (i, j).
struct CoeffSecondDerivatives {
  std::vector<std::vector<MatrixXd>> a;
  std::vector<std::vector<MatrixXd>> b;
  std::vector<std::vector<MatrixXd>> c;
  std::vector<std::vector<MatrixXd>> Sigma;
};

inline constexpr double kFirstDerivativeStep = 1e-6;
inline constexpr double kSecondDerivativeStep = 1e-4;

CoeffDerivatives coeff_derivatives(const ModelSpec& spec, const ThetaPoint& theta);
CoeffSecondDerivatives coeff_second_derivatives(const ModelSpec& spec, const ThetaPoint& theta);

/// Central-difference Jacobian of an arbitrary map, step eps * max(1, |x_i|).
std::vector<MatrixXd> fd_jacobian(const MatrixMap& f, const VectorXd& x, double eps);

struct A3Report {
  double min_re_eig_a = 0.0;
  double min_eig_bb = 0.0;
  double min_eig_Sigma = 0.0;
  std::size_t points = 0;
  bool ok() const { return min_re_eig_a > 0.0 && min_eig_bb > 0.0 && min_eig_Sigma > 0.0; }
};

/// Evaluates the positivity conditions on a grid of roughly `target_points` box points.
A3Report check_a3(const ModelSpec& spec, std::size_t target_points = 1000);
/// Same conditions at one point.
A3Report check_a3_at(const ModelSpec& spec, const ThetaPoint& theta);

// --- built-in families ---------------------------------------------------

/// Scalar family: sigma(theta1) = theta1, and each of a, b, c is either a free
/// coordinate of theta2 (in the order listed in `free`) or held at a fixed value.
struct ScalarFamilyOptions {
  std::vector<std::string> free = {"a", "b"};
  double a = 1.0;
  double b = 1.0;
  double c = 1.0;
  Box theta1_box{{1e-3}, {1.0}};
  Box theta2_box{{0.1, 0.05}, {5.0, 1.0}};
};
ModelSpec scalar_family(const ScalarFamilyOptions& opts);

/// Diagonal family of dimension d: theta2 = (a_1..a_d, b_1..b_d),
/// a = diag(a_i), b = diag(b_i), c = diag(c_diag), sigma = diag(theta1).
ModelSpec diagonal_family(int dim, const VectorXd& c_diag, Box theta1_box, Box theta2_box);

/// Model with no free theta2 (m2 = 0): the coefficient maps ignore theta2.
ModelSpec constant_model(const MatrixXd& a, const MatrixXd& b, const MatrixXd& c,
                         const MatrixXd& sigma);

}  // namespace hou
