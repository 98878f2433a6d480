#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hou/mc.hpp"

namespace hou {

struct ModelConfig {
  std::string family = "scalar";  // "scalar" or "diagonal"
  // scalar family
  std::vector<std::string> free = {"a", "b"};
  std::map<std::string, double> fixed = {{"c", 1.0}};  // values of a, b, c not in `free`
  // diagonal family
  int dim = 1;
  std::vector<double> c_diag;

  Box theta1_box;
  Box theta2_box;

  bool operator==(const ModelConfig&) const = default;
};

struct SimulationConfig {
  std::uint64_t seed = 1;
  std::string init = "fixed";  // or "stationary_x"
  std::vector<double> x0;      // empty means zero
  std::vector<double> y0;
  std::string method = "exact";  // or "euler"
  bool store_x = true;

  bool operator==(const SimulationConfig&) const = default;
};

struct FilterConfig {
  std::vector<double> m0;  // empty means zero
  std::size_t burn_in = 0;
  double gamma0 = 0.1;  // initial covariance of the continuous reference filter

  bool operator==(const FilterConfig&) const = default;
};

struct EstimationConfig {
  std::string theta1_source = "estimated";  // or "fixed"
  std::vector<double> theta1_fixed;
  OptimOptions optim;

  bool operator==(const EstimationConfig&) const = default;
};

struct McSection {
  std::size_t replications = 200;
  std::uint64_t base_seed = 1;
  std::string scenario = "i";
  int workers = 1;

  bool operator==(const McSection&) const = default;
};

/// Everything a run needs, with defaults applied.
struct RunConfig {
  ModelConfig model;
  std::vector<double> theta1_true;
  std::vector<double> theta2_true;
  SamplingScheme scheme;
  SimulationConfig simulation;
  FilterConfig filter;
  EstimationConfig estimation;
  McSection mc;
  std::string output_dir = "out";

  bool operator==(const RunConfig&) const = default;
};

/// Validates and applies defaults. Unknown keys, missing required keys, h > 1,
/// and truth values outside their boxes are config errors naming the key.
RunConfig parse_config(const nlohmann::json& j);
RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& file);

/// Fully resolved form; parse_config(to_json(c)) == c.
nlohmann::json to_json(const RunConfig& c);

ModelSpec build_model(const RunConfig& c);
ThetaPoint truth_point(const RunConfig& c);
SimulationOptions simulation_options(const RunConfig& c);
EstimateOptions estimate_options(const RunConfig& c);
McConfig mc_config(const RunConfig& c);

/// n = 10^6, h = 10^-4, R = 10^4.
void apply_full_scale(RunConfig& c);

}  // namespace hou
