#pragma once

// Reference computations that avoid the library's code paths: explicit sums,
// scalar closed forms and plain composite rules.

#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

namespace oracle {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct ScalarAre {
  double gamma_plus;
  double gamma_minus;
  double alpha;
};

/// Roots of -2 a g - (c^2 / S) g^2 + b^2 = 0.
inline ScalarAre scalar_are(double a, double b, double c, double sigma) {
  const double S = sigma * sigma;
  const double alpha = std::sqrt(a * a + b * b * c * c / S);
  return {S / (c * c) * (alpha - a), S / (c * c) * (-alpha - a), alpha};
}

/// Riccati ODE solution for the scalar model, from the cross-ratio identity
/// (g - g+)/(g - g-) = (g0 - g+)/(g0 - g-) exp(-2 alpha t).
inline double scalar_riccati_ode(double a, double b, double c, double sigma, double g0, double t) {
  const ScalarAre r = scalar_are(a, b, c, sigma);
  const double q = (g0 - r.gamma_plus) / (g0 - r.gamma_minus) * std::exp(-2.0 * r.alpha * t);
  return (r.gamma_plus - q * r.gamma_minus) / (1.0 - q);
}

/// m_i = exp(-alpha t_i) m0 + sum_{j<=i} exp(-alpha (t_i - t_{j-1})) K dY_j, term by term.
inline std::vector<double> direct_sum_filter(const std::vector<double>& dy, double h, double alpha,
                                             double K, double m0) {
  std::vector<double> m(dy.size() + 1);
  for (std::size_t i = 0; i <= dy.size(); ++i) {
    double v = std::exp(-alpha * h * static_cast<double>(i)) * m0;
    for (std::size_t j = 1; j <= i; ++j) v += std::exp(-alpha * h * static_cast<double>(i - j + 1)) * K * dy[j - 1];
    m[i] = v;
  }
  return m;
}

/// Matrix version; each exponential taken directly at its time lag.
inline MatrixXd direct_sum_filter(const MatrixXd& dy, double h, const MatrixXd& alpha, const MatrixXd& K,
                                  const VectorXd& m0) {
  const Eigen::Index n = dy.rows();
  MatrixXd out(n + 1, m0.size());
  for (Eigen::Index i = 0; i <= n; ++i) {
    VectorXd v = (-alpha * (h * static_cast<double>(i))).exp() * m0;
    for (Eigen::Index j = 1; j <= i; ++j) {
      const MatrixXd lag = -alpha * (h * static_cast<double>(i - j + 1));
      v += lag.exp() * K * dy.row(j - 1).transpose();
    }
    out.row(i) = v.transpose();
  }
  return out;
}

/// Composite Simpson rule with an even number of panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
  if (panels % 2) ++panels;
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int k = 1; k < panels; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
  return s * h / 3.0;
}

/// H2 for the scalar model written out as the defining sum over j > burn_in.
inline double h2_sum(const std::vector<double>& dy, double h, double c, double Sigma,
                     const std::vector<double>& m, std::size_t burn_in) {
  double acc = 0.0;
  for (std::size_t j = burn_in + 1; j <= dy.size(); ++j) {
    const double mm = m[j - 1];
    acc += -h * c * c * mm * mm / Sigma + 2.0 * mm * c * dy[j - 1] / Sigma;
  }
  return 0.5 * acc;
}

/// One-dimensional information matrix for theta2 = (a, b), c fixed.
inline Eigen::Matrix2d scalar_gamma2(double a, double b, double c, double sigma) {
  const double S = sigma * sigma;
  const double al = std::sqrt(a * a + b * b * c * c / S);
  const Eigen::Vector2d da(1.0, 0.0);
  const Eigen::Vector2d dal(a / al, b * c * c / (S * al));
  return dal * dal.transpose() / (2 * al) + da * da.transpose() / (2 * a) -
         (dal * da.transpose() + da * dal.transpose()) / (al + a);
}

}  // namespace oracle
