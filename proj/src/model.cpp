#include "hou/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hou/errors.hpp"

namespace hou {

Box::Box(std::vector<double> lower, std::vector<double> upper)
    : lo(std::move(lower)), hi(std::move(upper)) {
  if (lo.size() != hi.size()) throw_config("box", "lower and upper bounds differ in length");
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (!(lo[i] <= hi[i])) throw_config("box", "empty interval in coordinate " + std::to_string(i));
  }
}

bool Box::contains(const VectorXd& x) const {
  if (static_cast<std::size_t>(x.size()) != dim()) return false;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (x[i] < lo[i] || x[i] > hi[i]) return false;
  }
  return true;
}

VectorXd Box::clamp(const VectorXd& x) const {
  VectorXd y = x;
  for (std::size_t i = 0; i < dim(); ++i) y[i] = std::clamp(x[i], lo[i], hi[i]);
  return y;
}

VectorXd Box::center() const {
  VectorXd c(dim());
  for (std::size_t i = 0; i < dim(); ++i) c[i] = 0.5 * (lo[i] + hi[i]);
  return c;
}

double Box::margin(const VectorXd& x, std::size_t coord) const {
  return std::min(x[coord] - lo[coord], hi[coord] - x[coord]);
}

std::vector<VectorXd> Box::grid(int per_dim, bool interior) const {
  const std::size_t m = dim();
  std::vector<VectorXd> pts;
  if (m == 0) {
    pts.emplace_back(0);
    return pts;
  }
  per_dim = std::max(per_dim, 1);
  auto coord = [&](std::size_t axis, int k) {
    double frac;
    if (interior) {
      frac = static_cast<double>(k + 1) / (per_dim + 1);
    } else {
      frac = per_dim == 1 ? 0.5 : static_cast<double>(k) / (per_dim - 1);
    }
    return lo[axis] + frac * (hi[axis] - lo[axis]);
  };
  std::vector<int> idx(m, 0);
  while (true) {
    VectorXd p(m);
    for (std::size_t i = 0; i < m; ++i) p[i] = coord(i, idx[i]);
    pts.push_back(std::move(p));
    std::size_t axis = m;
    while (axis > 0) {
      --axis;
      if (++idx[axis] < per_dim) break;
      idx[axis] = 0;
      if (axis == 0) return pts;
    }
  }
}

void SamplingScheme::validate() const {
  if (n < 1) throw_config("scheme.n", "number of increments must be positive");
  if (!(h > 0.0)) throw_config("scheme.h", "step size must be positive");
  if (h > 1.0) throw_config("scheme.h", "step size must satisfy h <= 1 (assumption A1)");
}

namespace {

void check_shape(const MatrixXd& m, int rows, int cols, const char* what) {
  if (m.rows() != rows || m.cols() != cols) {
    throw_config(what, "coefficient map returned " + std::to_string(m.rows()) + "x" +
                           std::to_string(m.cols()) + ", expected " + std::to_string(rows) + "x" +
                           std::to_string(cols));
  }
}

void check_theta_dims(const ModelSpec& spec, const ThetaPoint& theta) {
  if (theta.theta1.size() != spec.m1) throw_config("theta1", "dimension mismatch");
  if (theta.theta2.size() != spec.m2) throw_config("theta2", "dimension mismatch");
}

double fd_step(double eps, double x) { return eps * std::max(1.0, std::abs(x)); }

void require_interior(const Box& box, const VectorXd& x, double eps, const char* which) {
  for (std::size_t i = 0; i < box.dim(); ++i) {
    if (box.margin(x, i) < fd_step(eps, x[i])) {
      throw_domain(std::string(which) + " coordinate " + std::to_string(i) +
                   " is too close to the box boundary for the difference stencil");
    }
  }
}

std::vector<std::vector<MatrixXd>> fd_hessian(const MatrixMap& f, const VectorXd& x, double eps) {
  const auto m = static_cast<std::size_t>(x.size());
  std::vector<std::vector<MatrixXd>> out(m, std::vector<MatrixXd>(m));
  const MatrixXd f0 = f(x);
  for (std::size_t i = 0; i < m; ++i) {
    const double hi = fd_step(eps, x[i]);
    VectorXd xp = x, xm = x;
    xp[i] += hi;
    xm[i] -= hi;
    out[i][i] = (f(xp) - 2.0 * f0 + f(xm)) / (hi * hi);
    for (std::size_t j = 0; j < i; ++j) {
      const double hj = fd_step(eps, x[j]);
      VectorXd pp = x, pm = x, mp = x, mm = x;
      pp[i] += hi; pp[j] += hj;
      pm[i] += hi; pm[j] -= hj;
      mp[i] -= hi; mp[j] += hj;
      mm[i] -= hi; mm[j] -= hj;
      out[i][j] = (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * hi * hj);
      out[j][i] = out[i][j];
    }
  }
  return out;
}

MatrixMap covariance_map(const ModelSpec& spec) {
  return [s = spec.sigma](const VectorXd& t1) {
    const MatrixXd sg = s(t1);
    return MatrixXd(sg * sg.transpose());
  };
}

}  // namespace

Coefficients eval_coeffs(const ModelSpec& spec, const ThetaPoint& theta) {
  check_theta_dims(spec, theta);
  Coefficients out;
  out.a = spec.a(theta.theta2);
  out.b = spec.b(theta.theta2);
  out.c = spec.c(theta.theta2);
  out.sigma = spec.sigma(theta.theta1);
  check_shape(out.a, spec.d1, spec.d1, "a");
  check_shape(out.b, spec.d1, spec.d1, "b");
  check_shape(out.c, spec.d2, spec.d1, "c");
  check_shape(out.sigma, spec.d2, spec.d2, "sigma");
  out.Sigma = out.sigma * out.sigma.transpose();
  return out;
}

std::vector<MatrixXd> fd_jacobian(const MatrixMap& f, const VectorXd& x, double eps) {
  std::vector<MatrixXd> out;
  out.reserve(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = fd_step(eps, x[i]);
    VectorXd xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    out.push_back((f(xp) - f(xm)) / (2.0 * h));
  }
  return out;
}

CoeffDerivatives coeff_derivatives(const ModelSpec& spec, const ThetaPoint& theta) {
  check_theta_dims(spec, theta);
  const bool need_fd2 = !(spec.da && spec.db && spec.dc);
  const bool need_fd1 = !spec.dSigma;
  if (need_fd2) require_interior(spec.theta2_box, theta.theta2, kFirstDerivativeStep, "theta2");
  if (need_fd1) require_interior(spec.theta1_box, theta.theta1, kFirstDerivativeStep, "theta1");

  CoeffDerivatives d;
  const double eps = kFirstDerivativeStep;
  d.a = spec.da ? spec.da(theta.theta2) : fd_jacobian(spec.a, theta.theta2, eps);
  d.b = spec.db ? spec.db(theta.theta2) : fd_jacobian(spec.b, theta.theta2, eps);
  d.c = spec.dc ? spec.dc(theta.theta2) : fd_jacobian(spec.c, theta.theta2, eps);
  d.Sigma = spec.dSigma ? spec.dSigma(theta.theta1)
                        : fd_jacobian(covariance_map(spec), theta.theta1, eps);
  return d;
}

CoeffSecondDerivatives coeff_second_derivatives(const ModelSpec& spec, const ThetaPoint& theta) {
  check_theta_dims(spec, theta);
  const double eps = kSecondDerivativeStep;
  require_interior(spec.theta2_box, theta.theta2, eps, "theta2");
  require_interior(spec.theta1_box, theta.theta1, eps, "theta1");
  CoeffSecondDerivatives d;
  d.a = fd_hessian(spec.a, theta.theta2, eps);
  d.b = fd_hessian(spec.b, theta.theta2, eps);
  d.c = fd_hessian(spec.c, theta.theta2, eps);
  d.Sigma = fd_hessian(covariance_map(spec), theta.theta1, eps);
  return d;
}

A3Report check_a3_at(const ModelSpec& spec, const ThetaPoint& theta) {
  const Coefficients k = eval_coeffs(spec, theta);
  A3Report r;
  r.points = 1;
  const Eigen::VectorXcd ev = k.a.eigenvalues();
  r.min_re_eig_a = ev.real().minCoeff();
  Eigen::SelfAdjointEigenSolver<MatrixXd> bb(k.b * k.b.transpose(), Eigen::EigenvaluesOnly);
  r.min_eig_bb = bb.eigenvalues().minCoeff();
  Eigen::SelfAdjointEigenSolver<MatrixXd> sg(k.Sigma, Eigen::EigenvaluesOnly);
  r.min_eig_Sigma = sg.eigenvalues().minCoeff();
  return r;
}

A3Report check_a3(const ModelSpec& spec, std::size_t target_points) {
  const int dims = std::max(1, spec.m1 + spec.m2);
  const int per_dim =
      std::max(2, static_cast<int>(std::ceil(std::pow(static_cast<double>(target_points), 1.0 / dims))));
  // theta2 governs a and bb', theta1 governs Sigma; the conditions separate.
  const auto g2 = spec.theta2_box.grid(per_dim, false);
  const auto g1 = spec.theta1_box.grid(per_dim, false);
  A3Report r;
  r.min_re_eig_a = r.min_eig_bb = r.min_eig_Sigma = std::numeric_limits<double>::infinity();
  const VectorXd t1c = spec.theta1_box.center();
  const VectorXd t2c = spec.theta2_box.center();
  for (const auto& t2 : g2) {
    const A3Report p = check_a3_at(spec, {t1c, t2});
    r.min_re_eig_a = std::min(r.min_re_eig_a, p.min_re_eig_a);
    r.min_eig_bb = std::min(r.min_eig_bb, p.min_eig_bb);
    ++r.points;
  }
  for (const auto& t1 : g1) {
    const A3Report p = check_a3_at(spec, {t1, t2c});
    r.min_eig_Sigma = std::min(r.min_eig_Sigma, p.min_eig_Sigma);
    ++r.points;
  }
  return r;
}

// --- families ---------------------------------------------------------------

ModelSpec scalar_family(const ScalarFamilyOptions& opts) {
  int ia = -1, ib = -1, ic = -1;
  for (std::size_t k = 0; k < opts.free.size(); ++k) {
    const auto& name = opts.free[k];
    int* slot = name == "a" ? &ia : name == "b" ? &ib : name == "c" ? &ic : nullptr;
    if (slot == nullptr) throw_config("model.free", "unknown scalar parameter '" + name + "'");
    if (*slot >= 0) throw_config("model.free", "parameter '" + name + "' listed twice");
    *slot = static_cast<int>(k);
  }
  ModelSpec s;
  s.family = "scalar";
  s.d1 = s.d2 = 1;
  s.m1 = 1;
  s.m2 = static_cast<int>(opts.free.size());
  s.theta1_box = opts.theta1_box;
  s.theta2_box = opts.theta2_box;
  if (s.theta1_box.dim() != 1) throw_config("model.theta1_box", "scalar family needs one interval");
  if (s.theta2_box.dim() != opts.free.size()) {
    throw_config("model.theta2_box", "needs one interval per free parameter");
  }
  s.theta1_names = {"sigma"};
  s.theta2_names = opts.free;
  s.sigma_form = SigmaForm::diagonal;

  auto pick = [](int idx, double fixed) {
    return [idx, fixed](const VectorXd& t2) {
      return MatrixXd::Constant(1, 1, idx >= 0 ? t2[idx] : fixed);
    };
  };
  auto unit = [m2 = s.m2](int idx) {
    return [idx, m2](const VectorXd&) {
      std::vector<MatrixXd> out(static_cast<std::size_t>(m2), MatrixXd::Zero(1, 1));
      if (idx >= 0) out[static_cast<std::size_t>(idx)](0, 0) = 1.0;
      return out;
    };
  };
  s.a = pick(ia, opts.a);
  s.b = pick(ib, opts.b);
  s.c = pick(ic, opts.c);
  s.sigma = [](const VectorXd& t1) { return MatrixXd::Constant(1, 1, t1[0]); };
  s.da = unit(ia);
  s.db = unit(ib);
  s.dc = unit(ic);
  s.dSigma = [](const VectorXd& t1) {
    return std::vector<MatrixXd>{MatrixXd::Constant(1, 1, 2.0 * t1[0])};
  };
  return s;
}

ModelSpec diagonal_family(int dim, const VectorXd& c_diag, Box theta1_box, Box theta2_box) {
  if (dim < 1) throw_config("model.dim", "dimension must be positive");
  if (c_diag.size() != dim) throw_config("model.c", "needs one entry per dimension");
  if (theta1_box.dim() != static_cast<std::size_t>(dim)) {
    throw_config("model.theta1_box", "needs one interval per dimension");
  }
  if (theta2_box.dim() != static_cast<std::size_t>(2 * dim)) {
    throw_config("model.theta2_box", "needs 2*dim intervals (a then b)");
  }
  ModelSpec s;
  s.family = "diagonal";
  s.d1 = s.d2 = dim;
  s.m1 = dim;
  s.m2 = 2 * dim;
  s.theta1_box = std::move(theta1_box);
  s.theta2_box = std::move(theta2_box);
  s.sigma_form = SigmaForm::diagonal;
  for (int i = 0; i < dim; ++i) {
    s.theta1_names.push_back("sigma" + std::to_string(i + 1));
  }
  for (int i = 0; i < dim; ++i) s.theta2_names.push_back("a" + std::to_string(i + 1));
  for (int i = 0; i < dim; ++i) s.theta2_names.push_back("b" + std::to_string(i + 1));

  s.a = [dim](const VectorXd& t2) { return MatrixXd(t2.head(dim).asDiagonal()); };
  s.b = [dim](const VectorXd& t2) { return MatrixXd(t2.segment(dim, dim).asDiagonal()); };
  s.c = [c_diag](const VectorXd&) { return MatrixXd(c_diag.asDiagonal()); };
  s.sigma = [](const VectorXd& t1) { return MatrixXd(t1.asDiagonal()); };
  s.da = [dim](const VectorXd&) {
    std::vector<MatrixXd> out(static_cast<std::size_t>(2 * dim), MatrixXd::Zero(dim, dim));
    for (int i = 0; i < dim; ++i) out[static_cast<std::size_t>(i)](i, i) = 1.0;
    return out;
  };
  s.db = [dim](const VectorXd&) {
    std::vector<MatrixXd> out(static_cast<std::size_t>(2 * dim), MatrixXd::Zero(dim, dim));
    for (int i = 0; i < dim; ++i) out[static_cast<std::size_t>(dim + i)](i, i) = 1.0;
    return out;
  };
  s.dc = [dim](const VectorXd&) {
    return std::vector<MatrixXd>(static_cast<std::size_t>(2 * dim), MatrixXd::Zero(dim, dim));
  };
  s.dSigma = [dim](const VectorXd& t1) {
    std::vector<MatrixXd> out(static_cast<std::size_t>(dim), MatrixXd::Zero(dim, dim));
    for (int i = 0; i < dim; ++i) out[static_cast<std::size_t>(i)](i, i) = 2.0 * t1[i];
    return out;
  };
  return s;
}

ModelSpec constant_model(const MatrixXd& a, const MatrixXd& b, const MatrixXd& c,
                         const MatrixXd& sigma) {
  ModelSpec s;
  s.family = "constant";
  s.d1 = static_cast<int>(a.rows());
  s.d2 = static_cast<int>(c.rows());
  s.m1 = 0;
  s.m2 = 0;
  s.a = [a](const VectorXd&) { return a; };
  s.b = [b](const VectorXd&) { return b; };
  s.c = [c](const VectorXd&) { return c; };
  s.sigma = [sigma](const VectorXd&) { return sigma; };
  return s;
}

}  // namespace hou
