#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hou/asymptotics.hpp"
#include "hou/estimate.hpp"

namespace hou {

/// Filter initialization scenarios: (i) m0 = 0; (ii) m0 = 1; (iii) m0 = 1 with
/// the first 100 filter terms dropped from H2.
enum class Scenario { i, ii, iii };

const char* to_string(Scenario s) noexcept;
/// Accepts "i", "ii", "iii". Throws a config error otherwise.
Scenario parse_scenario(const std::string& s);

struct ScenarioSettings {
  double m0 = 0.0;
  std::size_t burn_in = 0;
  double gamma0 = 0.1;  // recorded only; the stationary filter does not use it
};
ScenarioSettings scenario_settings(Scenario s);

struct McConfig {
  ModelSpec spec;
  ThetaPoint truth;
  SamplingScheme scheme;
  std::size_t replications = 200;
  std::uint64_t base_seed = 1;  // replication r uses base_seed + r
  Scenario scenario = Scenario::i;
  VectorXd m0;  // filled from the scenario when empty
  std::size_t burn_in = 0;
  double gamma0 = 0.1;
  int workers = 1;
  OptimOptions optim;
  SimulationOptions simulation;

  /// Sets m0 (every coordinate), burn_in and gamma0 from the scenario.
  void apply_scenario(Scenario s);
};

struct McRecord {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  VectorXd theta1;
  VectorXd theta2;
  double h1 = 0.0;
  double h2 = 0.0;
  bool converged = false;
  std::string error;  // non-empty if the replication threw
};

struct Histogram {
  std::vector<double> edges;  // bins + 1
  std::vector<std::size_t> counts;
};

struct ParamSummary {
  std::string name;
  double truth = 0.0;
  double mean = 0.0;
  double sd = 0.0;  // divides by R - 1
  double bias = 0.0;
  double se_theory = 0.0;
  // Moments of the standardized errors.
  double z_mean = 0.0;
  double z_sd = 0.0;
  double z_skewness = 0.0;
  double z_excess_kurtosis = 0.0;
  Histogram histogram;
};

struct McSummary {
  std::string scenario;
  std::size_t n = 0;
  double h = 0.0;
  std::uint64_t base_seed = 0;
  VectorXd m0;
  std::size_t burn_in = 0;
  double gamma0 = 0.0;
  std::size_t replications = 0;
  std::size_t effective = 0;  // converged replications used in the moments
  std::vector<ParamSummary> params;  // theta1 coordinates, then theta2
};

/// One simulate-then-estimate replication.
McRecord run_replication(const McConfig& cfg, std::size_t index);

/// Runs every replication on cfg.workers threads. Records come back in
/// replication order, so the result does not depend on the worker count.
std::vector<McRecord> run_replications(const McConfig& cfg);

/// Moments, standardized errors and histograms of the converged records.
/// Throws ErrorKind::nonconvergence if none converged.
McSummary summarize(const McConfig& cfg, const std::vector<McRecord>& records,
                    const AsymptoticInfo& info);

struct McRun {
  std::vector<McRecord> records;
  AsymptoticInfo info;
  McSummary summary;
};

McRun run_mc(const McConfig& cfg);

// Statistics helpers, exposed for testing.
struct Moments {
  double mean = 0.0;
  double sd = 0.0;  // divides by R - 1; 0 when R = 1
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
};
Moments moments(const std::vector<double>& x);
/// Linear-interpolation quantile of sorted data.
double quantile_sorted(const std::vector<double>& sorted, double p);
/// Freedman-Diaconis bin width 2 IQR / R^{1/3}; falls back to Sturges' bin
/// count when the IQR is zero and to a single bin when all values coincide.
Histogram fd_histogram(const std::vector<double>& x);

}  // namespace hou
