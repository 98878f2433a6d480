#include "hou/simulate.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "hou/errors.hpp"
#include "hou/linalg.hpp"

namespace hou {

VectorXd ObservationPath::times() const {
  VectorXd t(static_cast<Eigen::Index>(scheme.n + 1));
  for (Eigen::Index i = 0; i < t.size(); ++i) t[i] = static_cast<double>(i) * scheme.h;
  return t;
}

MatrixXd increments(const ObservationPath& path) {
  const Eigen::Index n = path.y.rows() - 1;
  if (n < 1) throw_domain("path has no increments");
  return path.y.bottomRows(n) - path.y.topRows(n);
}

namespace {

struct Augmented {
  MatrixXd A;
  MatrixXd B;
};

Augmented augmented_system(const Coefficients& k) {
  const Eigen::Index d1 = k.a.rows(), d2 = k.c.rows(), D = d1 + d2;
  Augmented s{MatrixXd::Zero(D, D), MatrixXd::Zero(D, D)};
  s.A.topLeftCorner(d1, d1) = -k.a;
  s.A.bottomLeftCorner(d2, d1) = k.c;
  s.B.topLeftCorner(d1, d1) = k.b;
  s.B.bottomRightCorner(d2, d2) = k.sigma;
  return s;
}

VectorXd or_zero(const VectorXd& v, int dim, const char* key) {
  if (v.size() == 0) return VectorXd::Zero(dim);
  if (v.size() != dim) throw_config(key, "initial value has the wrong dimension");
  return v;
}

}  // namespace

Transition exact_transition(const ModelSpec& spec, const ThetaPoint& theta, double h) {
  if (!(h > 0.0)) throw_domain("exact_transition: step must be positive");
  const Augmented s = augmented_system(eval_coeffs(spec, theta));
  return {expm(s.A, h), gramian(s.A, s.B, h)};
}

ObservationPath simulate_path(const ModelSpec& spec, const ThetaPoint& theta_true,
                              const SamplingScheme& scheme, std::uint64_t seed,
                              const SimulationOptions& opts) {
  scheme.validate();
  const Coefficients k = eval_coeffs(spec, theta_true);
  const int d1 = spec.d1, d2 = spec.d2, D = d1 + d2;
  const auto n = scheme.n;
  const double h = scheme.h;

  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  VectorXd z(D);
  z.head(d1) = or_zero(opts.x0, d1, "simulation.x0");
  z.tail(d2) = or_zero(opts.y0, d2, "simulation.y0");
  if (opts.init == InitKind::stationary_x) {
    const MatrixXd V = lyapunov(k.a, k.b * k.b.transpose());
    const MatrixXd L0 = psd_factor(V);
    VectorXd xi(d1);
    for (int j = 0; j < d1; ++j) xi[j] = normal(gen);
    z.head(d1) = L0 * xi;
  }

  // Row-major copies of the step maps keep the inner loop free of temporaries.
  std::vector<double> M(static_cast<std::size_t>(D * D)), L(static_cast<std::size_t>(D * D));
  if (opts.method == StepMethod::exact) {
    const Augmented s = augmented_system(k);
    const MatrixXd Phi = expm(s.A, h);
    const MatrixXd Lq = psd_factor(gramian(s.A, s.B, h));
    for (int r = 0; r < D; ++r) {
      for (int c = 0; c < D; ++c) {
        M[static_cast<std::size_t>(r * D + c)] = Phi(r, c);
        L[static_cast<std::size_t>(r * D + c)] = Lq(r, c);
      }
    }
  } else {
    // Euler-Maruyama: Z += A Z h + B sqrt(h) xi
    const Augmented s = augmented_system(k);
    const MatrixXd Phi = MatrixXd::Identity(D, D) + s.A * h;
    const MatrixXd Lq = s.B * std::sqrt(h);
    for (int r = 0; r < D; ++r) {
      for (int c = 0; c < D; ++c) {
        M[static_cast<std::size_t>(r * D + c)] = Phi(r, c);
        L[static_cast<std::size_t>(r * D + c)] = Lq(r, c);
      }
    }
  }

  ObservationPath path;
  path.scheme = scheme;
  path.seed = seed;
  path.theta_true = theta_true;
  path.y.resize(static_cast<Eigen::Index>(n + 1), d2);
  if (opts.store_x) path.x = MatrixXd(static_cast<Eigen::Index>(n + 1), d1);

  std::vector<double> cur(z.data(), z.data() + D), next(static_cast<std::size_t>(D)),
      xi(static_cast<std::size_t>(D));
  auto record = [&](Eigen::Index row) {
    for (int j = 0; j < d2; ++j) path.y(row, j) = cur[static_cast<std::size_t>(d1 + j)];
    if (path.x) {
      for (int j = 0; j < d1; ++j) (*path.x)(row, j) = cur[static_cast<std::size_t>(j)];
    }
  };
  record(0);
  for (std::size_t i = 1; i <= n; ++i) {
    for (auto& v : xi) v = normal(gen);
    for (int r = 0; r < D; ++r) {
      double acc = 0.0;
      const double* mr = &M[static_cast<std::size_t>(r * D)];
      const double* lr = &L[static_cast<std::size_t>(r * D)];
      for (int c = 0; c < D; ++c) acc += mr[c] * cur[static_cast<std::size_t>(c)];
      for (int c = 0; c < D; ++c) acc += lr[c] * xi[static_cast<std::size_t>(c)];
      next[static_cast<std::size_t>(r)] = acc;
    }
    cur.swap(next);
    record(static_cast<Eigen::Index>(i));
  }
  return path;
}

}  // namespace hou
