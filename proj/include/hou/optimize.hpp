#pragma once

#include <functional>
#include <span>
#include <vector>

#include "hou/model.hpp"

namespace hou {

struct OptimOptions {
  double xtol = 1e-8;          ///< simplex diameter (max-norm) at convergence
  int max_iter = 500;          ///< per start
  int grid_points = 3;         ///< multistart grid points per coordinate
  double initial_step = 0.05;  ///< initial simplex edge as a fraction of the box width

  bool operator==(const OptimOptions&) const = default;
};

struct OptimResult {
  VectorXd x;
  double value = 0.0;
  bool converged = false;   ///< the start that produced `x` met xtol
  int iterations = 0;       ///< iterations of that start
  int evaluations = 0;      ///< over all starts
  int starts = 0;
  int starts_converged = 0;
};

/// Evaluates the objective at every point; non-finite values count as worst.
using BatchObjective = std::function<void(std::span<const VectorXd>, std::span<double>)>;
using Objective = std::function<double(const VectorXd&)>;

BatchObjective batched(Objective f);

/// Nelder-Mead maximization with every trial point projected onto the box. All
/// starts advance in lockstep so their pending evaluations reach `f` as one batch.
/// The winner is the highest value; ties go to the lexicographically smallest x.
OptimResult maximize_box(const BatchObjective& f, const Box& box, const std::vector<VectorXd>& starts,
                         const OptimOptions& opts = {});

/// Multistart from the interior grid with opts.grid_points points per coordinate.
OptimResult maximize_box(const BatchObjective& f, const Box& box, const OptimOptions& opts = {});
OptimResult maximize_box(const Objective& f, const Box& box, const OptimOptions& opts = {});

}  // namespace hou
