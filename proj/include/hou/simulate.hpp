#pragma once

#include <cstdint>
#include <optional>

#include "hou/model.hpp"

namespace hou {

/// Discretely sampled observation path Y_{ih}, i = 0..n, with optional latent truth.
struct ObservationPath {
  SamplingScheme scheme;
  MatrixXd y;                     // (n+1) x d2
  std::optional<MatrixXd> x;      // (n+1) x d1 when stored
  std::uint64_t seed = 0;
  ThetaPoint theta_true;

  std::size_t n() const { return scheme.n; }
  double h() const { return scheme.h; }
  /// Observation times i*h.
  VectorXd times() const;
};

/// Y increments, n x d2 (column-major, so each column is contiguous).
MatrixXd increments(const ObservationPath& path);

/// Exact one-step law of Z = (X, Y): Z_{t+h} | Z_t ~ N(Phi Z_t, Q).
struct Transition {
  MatrixXd Phi;
  MatrixXd Q;
};

Transition exact_transition(const ModelSpec& spec, const ThetaPoint& theta, double h);

enum class InitKind {
  fixed,         ///< X0 and Y0 as given
  stationary_x,  ///< X0 ~ N(0, V) with a V + V a' = b b'; Y0 as given
};

enum class StepMethod { exact, euler };

struct SimulationOptions {
  InitKind init = InitKind::fixed;
  VectorXd x0;  // empty means zero
  VectorXd y0;  // empty means zero
  bool store_x = true;
  StepMethod method = StepMethod::exact;
};

/// Simulates the joint process on the grid. Pure given the seed.
ObservationPath simulate_path(const ModelSpec& spec, const ThetaPoint& theta_true,
                              const SamplingScheme& scheme, std::uint64_t seed,
                              const SimulationOptions& opts = {});

}  // namespace hou
