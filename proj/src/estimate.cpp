#include "hou/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hou/errors.hpp"
#include "hou/filter.hpp"
#include "hou/linalg.hpp"
#include "hou/quadrature.hpp"
#include "hou/simd/kernels.hpp"

namespace hou {

namespace {

constexpr double kMinusInf = -std::numeric_limits<double>::infinity();

std::span<const double> column(const MatrixXd& m, Eigen::Index k) {
  return {m.col(k).data(), static_cast<std::size_t>(m.rows())};
}

VectorXd resolve_m0(const ModelSpec& spec, const VectorXd& m0) {
  if (m0.size() == 0) return VectorXd::Zero(spec.d1);
  if (m0.size() != spec.d1) throw_config("filter.m0", "initial value has the wrong dimension");
  return m0;
}

void check_burn_in(const MatrixXd& dy, std::size_t burn_in) {
  if (burn_in >= static_cast<std::size_t>(dy.rows())) {
    throw_config("filter.burn_in", "burn-in must be smaller than the number of increments");
  }
}

simd::FilterLane scalar_lane(const Coefficients& k, const RiccatiSolution& r, double h, double m0) {
  const double Sigma = k.Sigma(0, 0);
  const double c = k.c(0, 0);
  const double phi = std::exp(-r.alpha(0, 0) * h);
  simd::FilterLane lane;
  lane.phi = phi;
  lane.gain = phi * r.gamma_plus(0, 0) * c / Sigma;
  lane.quad = h * c * c / Sigma;
  lane.cross = 2.0 * c / Sigma;
  lane.m0 = m0;
  return lane;
}

double h2_matrix(const MatrixXd& dy, double h, const Coefficients& k, const RiccatiSolution& r,
                 const VectorXd& m0, std::size_t burn_in) {
  const DiscreteFilter f(r.alpha, r.gamma_plus, k.c, k.Sigma, h);
  Eigen::LLT<MatrixXd> llt(k.Sigma);
  const MatrixXd Q = llt.solve(k.c).transpose();  // c' Sigma^{-1}
  const MatrixXd P = Q * k.c;                     // c' Sigma^{-1} c
  const Eigen::Index n = dy.rows();
  VectorXd m = m0;
  VectorXd next(m.size());
  VectorXd d(dy.cols());
  double acc = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    d = dy.row(j).transpose();
    if (static_cast<std::size_t>(j) >= burn_in) {
      acc += 2.0 * m.dot(Q * d) - h * m.dot(P * m);
    }
    next.noalias() = f.decay() * m;
    next.noalias() += f.gain() * d;
    m.swap(next);
  }
  return 0.5 * acc;
}

H2Route pick_route(const ModelSpec& spec, H2Route route) {
  if (route == H2Route::automatic) return spec.is_scalar() ? H2Route::kernel : H2Route::matrix;
  if (route == H2Route::kernel && !spec.is_scalar()) {
    throw_domain("the lane kernel handles scalar models only");
  }
  return route;
}

double min_real_eig(const MatrixXd& A) {
  return A.eigenvalues().real().minCoeff();
}

MatrixXd inverse_spd(const MatrixXd& S) {
  Eigen::LLT<MatrixXd> llt(S);
  if (llt.info() != Eigen::Success) throw_assumption("A3 violated: Sigma is not positive definite");
  return llt.solve(MatrixXd::Identity(S.rows(), S.cols()));
}

}  // namespace

// --- noise-scale stage -------------------------------------------------------

MatrixXd scatter(const MatrixXd& dy) {
  const Eigen::Index d = dy.cols();
  MatrixXd S(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    for (Eigen::Index l = 0; l <= k; ++l) {
      S(k, l) = S(l, k) = simd::dot(column(dy, k), column(dy, l));
    }
  }
  return S;
}

double h1_from_scatter(const MatrixXd& S, std::size_t n, double h, const MatrixXd& Sigma) {
  Eigen::LLT<MatrixXd> llt(Sigma);
  if (llt.info() != Eigen::Success) throw_domain("Sigma(theta1) is not positive definite");
  const double logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  const double quad = llt.solve(S).trace();
  return -0.5 * (quad / h + static_cast<double>(n) * logdet);
}

double h1_objective(const MatrixXd& dy, double h, const ModelSpec& spec, const VectorXd& theta1) {
  const MatrixXd s = spec.sigma(theta1);
  return h1_from_scatter(scatter(dy), static_cast<std::size_t>(dy.rows()), h, s * s.transpose());
}

double h1_objective(const ObservationPath& path, const ModelSpec& spec, const VectorXd& theta1) {
  return h1_objective(increments(path), path.h(), spec, theta1);
}

ClosedFormTheta1 theta1_hat_closed_form(const MatrixXd& dy, double h) {
  ClosedFormTheta1 out;
  const double t_n = static_cast<double>(dy.rows()) * h;
  out.value.resize(dy.cols());
  for (Eigen::Index k = 0; k < dy.cols(); ++k) {
    const double ss = simd::sum_squares(column(dy, k));
    if (ss == 0.0) out.degenerate = true;
    out.value[k] = std::sqrt(ss / t_n);
  }
  return out;
}

ClosedFormTheta1 theta1_hat_closed_form_1d(const ObservationPath& path) {
  if (path.y.cols() != 1) throw_domain("closed-form theta1 needs a scalar observation");
  return theta1_hat_closed_form(increments(path), path.h());
}

H1Fit maximize_h1(const MatrixXd& dy, double h, const ModelSpec& spec, const OptimOptions& opts) {
  const MatrixXd S = scatter(dy);
  const auto n = static_cast<std::size_t>(dy.rows());
  auto value_at = [&](const VectorXd& t1) {
    const MatrixXd s = spec.sigma(t1);
    return h1_from_scatter(S, n, h, s * s.transpose());
  };

  H1Fit fit;
  if (spec.sigma_form == SigmaForm::diagonal) {
    const ClosedFormTheta1 cf = theta1_hat_closed_form(dy, h);
    fit.theta1 = spec.theta1_box.clamp(cf.value);
    fit.degenerate = cf.degenerate;
    fit.closed_form = true;
    fit.converged = true;
    fit.value = value_at(fit.theta1);
    return fit;
  }
  const OptimResult r = maximize_box(
      [&](const VectorXd& t1) {
        try {
          return value_at(t1);
        } catch (const Error&) {
          return kMinusInf;
        }
      },
      spec.theta1_box, opts);
  fit.theta1 = r.x;
  fit.value = r.value;
  fit.converged = r.converged;
  fit.iterations = r.iterations;
  return fit;
}

// --- dynamics stage ----------------------------------------------------------

void h2_objective_batch(const MatrixXd& dy, double h, const ModelSpec& spec, const VectorXd& theta1,
                        std::span<const VectorXd> theta2s, std::span<double> out, const VectorXd& m0,
                        std::size_t burn_in, H2Route route) {
  if (out.size() < theta2s.size()) throw_domain("h2_objective_batch: output too short");
  check_burn_in(dy, burn_in);
  const VectorXd m_init = resolve_m0(spec, m0);
  route = pick_route(spec, route);

  if (route == H2Route::matrix) {
    for (std::size_t i = 0; i < theta2s.size(); ++i) {
      try {
        const Coefficients k = eval_coeffs(spec, {theta1, theta2s[i]});
        out[i] = h2_matrix(dy, h, k, solve_are(k), m_init, burn_in);
      } catch (const Error&) {
        out[i] = kMinusInf;
      }
    }
    return;
  }

  std::vector<simd::FilterLane> lanes;
  std::vector<std::size_t> slot;
  lanes.reserve(theta2s.size());
  for (std::size_t i = 0; i < theta2s.size(); ++i) {
    try {
      const Coefficients k = eval_coeffs(spec, {theta1, theta2s[i]});
      lanes.push_back(scalar_lane(k, solve_are(k), h, m_init[0]));
      slot.push_back(i);
    } catch (const Error&) {
      out[i] = kMinusInf;
    }
  }
  std::vector<double> values(lanes.size());
  simd::filter_objective(column(dy, 0), burn_in, lanes, values);
  for (std::size_t k = 0; k < lanes.size(); ++k) {
    out[slot[k]] = std::isfinite(values[k]) ? values[k] : kMinusInf;
  }
}

double h2_objective(const MatrixXd& dy, double h, const ModelSpec& spec, const VectorXd& theta1,
                    const VectorXd& theta2, const VectorXd& m0, std::size_t burn_in, H2Route route) {
  check_burn_in(dy, burn_in);
  const VectorXd m_init = resolve_m0(spec, m0);
  const Coefficients k = eval_coeffs(spec, {theta1, theta2});
  const RiccatiSolution r = solve_are(k);
  double value = 0.0;
  if (pick_route(spec, route) == H2Route::kernel) {
    const simd::FilterLane lane = scalar_lane(k, r, h, m_init[0]);
    simd::filter_objective(column(dy, 0), burn_in, {&lane, 1}, {&value, 1});
  } else {
    value = h2_matrix(dy, h, k, r, m_init, burn_in);
  }
  if (!std::isfinite(value)) throw_numeric("H2 objective is not finite");
  return value;
}

H2Fit maximize_h2(const MatrixXd& dy, double h, const ModelSpec& spec, const VectorXd& theta1,
                  const H2Options& opts) {
  H2Fit fit;
  if (spec.m2 == 0) {
    fit.theta2 = VectorXd(0);
    fit.value = h2_objective(dy, h, spec, theta1, fit.theta2, opts.m0, opts.burn_in, opts.route);
    fit.converged = true;
    fit.evaluations = 1;
    return fit;
  }
  const BatchObjective f = [&](std::span<const VectorXd> pts, std::span<double> out) {
    h2_objective_batch(dy, h, spec, theta1, pts, out, opts.m0, opts.burn_in, opts.route);
  };
  const OptimResult r = maximize_box(f, spec.theta2_box, opts.optim);
  fit.theta2 = r.x;
  fit.value = r.value;
  fit.converged = r.converged;
  fit.iterations = r.iterations;
  fit.evaluations = r.evaluations;
  fit.starts_converged = r.starts_converged;
  return fit;
}

// --- two-stage pipeline ------------------------------------------------------

EstimationResult estimate(const ObservationPath& path, const ModelSpec& spec,
                          const EstimateOptions& opts) {
  const MatrixXd dy = increments(path);
  const double h = path.h();
  EstimationResult res;
  res.burn_in = opts.h2.burn_in;

  if (opts.theta1_source == Theta1Source::estimated) {
    const H1Fit f1 = maximize_h1(dy, h, spec, opts.h1_optim);
    res.theta1_hat = f1.theta1;
    res.h1_value = f1.value;
    res.converged1 = f1.converged;
    res.theta1_degenerate = f1.degenerate;
    res.iterations1 = f1.iterations;
  } else {
    if (opts.theta1_fixed.size() != spec.m1) {
      throw_config("estimation.theta1_fixed", "expected " + std::to_string(spec.m1) + " values");
    }
    res.theta1_hat = opts.theta1_fixed;
    const MatrixXd s = spec.sigma(res.theta1_hat);
    res.h1_value = h1_from_scatter(scatter(dy), static_cast<std::size_t>(dy.rows()), h,
                                   s * s.transpose());
    res.converged1 = true;
  }

  const H2Fit f2 = maximize_h2(dy, h, spec, res.theta1_hat, opts.h2);
  res.theta2_hat = f2.theta2;
  res.h2_value = f2.value;
  res.converged2 = f2.converged;
  res.iterations2 = f2.iterations;
  res.evaluations2 = f2.evaluations;
  return res;
}

// --- identifiability ---------------------------------------------------------

DriftGap::DriftGap(const ModelSpec& spec, const ThetaPoint& truth, const VectorXd& theta2)
    : d1_(spec.d1) {
  const Coefficients k = eval_coeffs(spec, {truth.theta1, theta2});
  const Coefficients ks = eval_coeffs(spec, truth);
  const RiccatiSolution r = solve_are(k);
  const RiccatiSolution rs = solve_are(ks);
  const MatrixXd Sinv = inverse_spd(ks.Sigma);

  c_ = k.c;
  c_star_ = ks.c;
  gamma_ct_ = r.gamma_plus * k.c.transpose();
  gamma_ct_star_ = rs.gamma_plus * ks.c.transpose();

  block_ = MatrixXd::Zero(2 * d1_, 2 * d1_);
  block_.topLeftCorner(d1_, d1_) = -r.alpha;
  block_.topRightCorner(d1_, d1_) = gamma_ct_ * Sinv * ks.c;
  block_.bottomRightCorner(d1_, d1_) = -ks.a;
  rate_ = std::min(min_real_eig(r.alpha), min_real_eig(ks.a));
}

MatrixXd DriftGap::operator()(double s) const {
  const MatrixXd E = expm(block_, s);
  return c_ * E.topRightCorner(d1_, d1_) * gamma_ct_star_ + c_ * E.topLeftCorner(d1_, d1_) * gamma_ct_ -
         c_star_ * E.bottomRightCorner(d1_, d1_) * gamma_ct_star_;
}

double y1(const ModelSpec& spec, const VectorXd& theta1, const VectorXd& theta1_star) {
  const MatrixXd s = spec.sigma(theta1);
  const MatrixXd s_star = spec.sigma(theta1_star);
  const MatrixXd Sigma = s * s.transpose();
  const MatrixXd Sigma_star = s_star * s_star.transpose();
  Eigen::LLT<MatrixXd> llt(Sigma);
  Eigen::LLT<MatrixXd> llt_star(Sigma_star);
  if (llt.info() != Eigen::Success || llt_star.info() != Eigen::Success) {
    throw_assumption("A3 violated: Sigma is not positive definite");
  }
  auto logdet = [](const Eigen::LLT<MatrixXd>& f) {
    return 2.0 * f.matrixL().toDenseMatrix().diagonal().array().log().sum();
  };
  const double tr = llt.solve(Sigma_star).trace();
  return -0.5 * (tr - static_cast<double>(Sigma.rows()) + logdet(llt) - logdet(llt_star));
}

double y2_quadrature(const ModelSpec& spec, const VectorXd& theta2, const ThetaPoint& truth,
                     double t_max) {
  const DriftGap gap(spec, truth, theta2);
  const Coefficients ks = eval_coeffs(spec, truth);
  const MatrixXd P = inverse_spd(ks.Sigma);
  const VecIntegrand f = [&](double s) {
    const MatrixXd G = gap(s);
    VectorXd v(1);
    v[0] = (G.array() * (P * G * P).array()).sum();
    return v;
  };
  const double T = t_max > 0.0 ? t_max : tail_horizon(f, 2.0 * gap.decay_rate(), 1e-13);
  return -0.5 * integrate(f, 0.0, T).value[0];
}

double y2_closed_form_1d(const ModelSpec& spec, const VectorXd& theta2, const ThetaPoint& truth) {
  if (!spec.is_scalar()) throw_domain("closed-form Y2 needs a scalar model");
  const Coefficients k = eval_coeffs(spec, {truth.theta1, theta2});
  const Coefficients ks = eval_coeffs(spec, truth);
  const double a = k.a(0, 0);
  const double al = solve_are(k).alpha(0, 0);
  const double as = ks.a(0, 0);
  const double als = solve_are(ks).alpha(0, 0);
  const double u = as * al - a * als;
  const double v = al - a - als + as;
  return -(u * u + as * al * v * v) / (4.0 * as * al * (al + as));
}

double y2(const ModelSpec& spec, const VectorXd& theta2, const ThetaPoint& truth, double t_max) {
  if (spec.is_scalar()) return y2_closed_form_1d(spec, theta2, truth);
  return y2_quadrature(spec, theta2, truth, t_max);
}

IdentifiabilityReport check_identifiability(const ModelSpec& spec, const ThetaPoint& truth,
                                            int per_dim) {
  IdentifiabilityReport rep;
  rep.c1 = rep.c2 = std::numeric_limits<double>::infinity();
  rep.max_y1 = rep.max_y2 = kMinusInf;
  double top1 = 0.0, top2 = 0.0;  // largest ratios, to judge the smallest against rounding

  for (const VectorXd& t1 : spec.theta1_box.grid(per_dim, false)) {
    const double dist2 = (t1 - truth.theta1).squaredNorm();
    if (dist2 < 1e-24) continue;
    const double v = y1(spec, t1, truth.theta1);
    rep.c1 = std::min(rep.c1, -v / dist2);
    top1 = std::max(top1, -v / dist2);
    rep.max_y1 = std::max(rep.max_y1, v);
    ++rep.points1;
  }
  if (spec.m2 > 0) {
    for (const VectorXd& t2 : spec.theta2_box.grid(per_dim, false)) {
      const double dist2 = (t2 - truth.theta2).squaredNorm();
      if (dist2 < 1e-24) continue;
      double v = 0.0;
      try {
        v = y2(spec, t2, truth);
      } catch (const Error&) {
        ++rep.skipped2;
        continue;
      }
      rep.c2 = std::min(rep.c2, -v / dist2);
      top2 = std::max(top2, -v / dist2);
      rep.max_y2 = std::max(rep.max_y2, v);
      ++rep.points2;
    }
  }
  if (rep.points1 == 0 || rep.c1 <= 1e-8 * top1) rep.c1 = std::min(rep.c1, 0.0);
  if (rep.points2 == 0 || rep.c2 <= 1e-8 * top2) rep.c2 = std::min(rep.c2, 0.0);
  if (!(rep.c1 > 0.0)) rep.warnings.push_back("Y1 is not dominated by a negative quadratic on the grid");
  if (!(rep.c2 > 0.0)) rep.warnings.push_back("Y2 is not dominated by a negative quadratic on the grid");
  if (rep.skipped2 > 0) {
    rep.warnings.push_back(std::to_string(rep.skipped2) + " grid points skipped (Riccati solve failed)");
  }
  return rep;
}

}  // namespace hou
