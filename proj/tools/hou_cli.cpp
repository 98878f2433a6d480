// hou: command-line front end for simulation, filtering and estimation of the
// hidden OU model. Every run writes resolved_config.json into the output dir.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "hou/config.hpp"
#include "hou/errors.hpp"
#include "hou/io.hpp"
#include "hou/simd/kernels.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using Eigen::VectorXd;

namespace {

enum Exit { kOk = 0, kConfig = 2, kNumeric = 3, kNonconvergence = 4 };

int exit_code(hou::ErrorKind k) {
  switch (k) {
    case hou::ErrorKind::config: return kConfig;
    case hou::ErrorKind::nonconvergence: return kNonconvergence;
    case hou::ErrorKind::domain:
    case hou::ErrorKind::numeric:
    case hou::ErrorKind::assumption: return kNumeric;
  }
  return kNumeric;
}

int report(const std::string& kind, const std::string& message, const std::string& key, int code) {
  json e = {{"error", kind}, {"message", message}, {"exit_code", code}};
  if (!key.empty()) e["key"] = key;
  std::cerr << e.dump() << '\n';
  return code;
}

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> workers;
  bool full_scale = false;
};

struct Extra {
  std::string path;                     // filter, estimate
  std::optional<std::string> scenario;  // mc
  std::optional<std::size_t> reps;      // mc
};

hou::RunConfig resolve(const Common& c, const Extra& x) {
  hou::RunConfig cfg = hou::load_config(c.config);
  if (c.full_scale) {
    hou::apply_full_scale(cfg);
    std::cerr << "warning: --paper-scale selects n=1e6, h=1e-4, R=1e4; expect hours of runtime\n";
  }
  if (c.seed) {
    cfg.simulation.seed = *c.seed;
    cfg.mc.base_seed = *c.seed;
  }
  if (c.out) cfg.output_dir = *c.out;
  if (c.workers) cfg.mc.workers = *c.workers;
  if (x.scenario) cfg.mc.scenario = *x.scenario;
  if (x.reps) cfg.mc.replications = *x.reps;
  // Re-validate the overridden values.
  cfg = hou::parse_config(hou::to_json(cfg));

  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec) hou::throw_config("output.dir", "cannot create '" + cfg.output_dir + "': " + ec.message());
  json resolved = hou::to_json(cfg);
  resolved["version"] = HOU_VERSION;
  hou::write_json((fs::path(cfg.output_dir) / "resolved_config.json").string(), resolved);
  return cfg;
}

std::string out_file(const hou::RunConfig& cfg, const std::string& name) {
  return (fs::path(cfg.output_dir) / name).string();
}

hou::ModelSpec checked_model(const hou::RunConfig& cfg) {
  hou::ModelSpec spec = hou::build_model(cfg);
  const hou::A3Report a3 = hou::check_a3(spec);
  if (!a3.ok()) {
    hou::throw_assumption("A3 violated on the parameter boxes (min Re eig a = " +
                          std::to_string(a3.min_re_eig_a) + ", min eig bb' = " +
                          std::to_string(a3.min_eig_bb) + ", min eig Sigma = " +
                          std::to_string(a3.min_eig_Sigma) + ")");
  }
  return spec;
}

hou::ObservationPath load_or_simulate(const hou::RunConfig& cfg, const hou::ModelSpec& spec,
                                      const std::string& path) {
  if (!path.empty()) {
    hou::ObservationPath p = hou::read_path_csv(path);
    if (p.y.cols() != spec.d2) hou::throw_config("--path", "observation dimension does not match the model");
    p.theta_true = hou::truth_point(cfg);
    return p;
  }
  return hou::simulate_path(spec, hou::truth_point(cfg), cfg.scheme, cfg.simulation.seed,
                            hou::simulation_options(cfg));
}

int cmd_simulate(const hou::RunConfig& cfg) {
  const hou::ModelSpec spec = checked_model(cfg);
  const hou::ObservationPath p = hou::simulate_path(spec, hou::truth_point(cfg), cfg.scheme,
                                                    cfg.simulation.seed, hou::simulation_options(cfg));
  hou::write_path_csv(out_file(cfg, "path.csv"), p);
  std::cout << out_file(cfg, "path.csv") << '\n';
  return kOk;
}

VectorXd theta1_for_filter(const hou::RunConfig& cfg, const hou::ModelSpec& spec, const hou::ObservationPath& p) {
  const hou::EstimateOptions eo = hou::estimate_options(cfg);
  if (eo.theta1_source == hou::Theta1Source::fixed) return eo.theta1_fixed;
  return hou::maximize_h1(hou::increments(p), p.h(), spec, eo.h1_optim).theta1;
}

int cmd_filter(const hou::RunConfig& cfg, const std::string& path) {
  const hou::ModelSpec spec = checked_model(cfg);
  const hou::ObservationPath p = load_or_simulate(cfg, spec, path);
  const hou::ThetaPoint theta{theta1_for_filter(cfg, spec, p), hou::truth_point(cfg).theta2};
  const hou::EstimateOptions eo = hou::estimate_options(cfg);
  const VectorXd m0 = eo.h2.m0.size() ? eo.h2.m0 : VectorXd::Zero(spec.d1);
  const hou::FilterPath f = hou::run_discrete_filter(p, spec, theta, m0, cfg.filter.burn_in);
  hou::write_filter_csv(out_file(cfg, "filter.csv"), p.times(), f, p.x ? &*p.x : nullptr);
  std::cout << out_file(cfg, "filter.csv") << '\n';
  return kOk;
}

int cmd_estimate(const hou::RunConfig& cfg, const std::string& path) {
  const hou::ModelSpec spec = checked_model(cfg);
  const hou::ObservationPath p = load_or_simulate(cfg, spec, path);
  hou::EstimationResult r = hou::estimate(p, spec, hou::estimate_options(cfg));
  const hou::AsymptoticInfo info = hou::asymptotic_info(spec, hou::truth_point(cfg), p.scheme);
  r.se1 = info.se1;
  r.se2 = info.se2;
  const json j = hou::to_json(r);
  hou::write_json(out_file(cfg, "estimate.json"), j);
  std::cout << j.dump(2) << '\n';
  if (!r.converged()) {
    return report("nonconvergence", "optimizer did not reach the tolerance; estimates still written", "", kNonconvergence);
  }
  return kOk;
}

int cmd_asymptotics(const hou::RunConfig& cfg) {
  const hou::ModelSpec spec = checked_model(cfg);
  const hou::AsymptoticInfo info = hou::asymptotic_info(spec, hou::truth_point(cfg), cfg.scheme);
  json j = hou::to_json(info);
  j["n"] = cfg.scheme.n;
  j["t_n"] = cfg.scheme.t_n();
  hou::write_json(out_file(cfg, "asymptotics.json"), j);
  std::cout << j.dump(2) << '\n';
  return kOk;
}

int cmd_riccati(const hou::RunConfig& cfg) {
  const hou::ModelSpec spec = checked_model(cfg);
  const hou::ThetaPoint t = hou::truth_point(cfg);
  const json j = hou::to_json(hou::solve_are(spec, t), hou::check_controllability(spec, t));
  hou::write_json(out_file(cfg, "riccati.json"), j);
  std::cout << j.dump(2) << '\n';
  return kOk;
}

int cmd_mc(const hou::RunConfig& cfg) {
  const hou::McConfig mc = hou::mc_config(cfg);
  checked_model(cfg);
  const hou::McRun run = hou::run_mc(mc);
  hou::write_json(out_file(cfg, "summary.json"), hou::to_json(run.summary));
  hou::write_estimates_csv(out_file(cfg, "estimates.csv"), run.records, mc.spec);
  for (const auto& p : run.summary.params) {
    hou::write_histogram_csv(out_file(cfg, "hist_" + p.name + ".csv"), p.histogram);
  }
  for (const auto& p : run.summary.params) {
    std::printf("%-8s mean %.6g  sd %.4g  se %.4g  z-mean %.3f  z-sd %.3f\n", p.name.c_str(), p.mean, p.sd,
                p.se_theory, p.z_mean, p.z_sd);
  }
  std::printf("effective %zu / %zu\n", run.summary.effective, run.summary.replications);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasi-likelihood estimation for the hidden Ornstein-Uhlenbeck model"};
  app.set_version_flag("--version", std::string(HOU_VERSION));
  app.require_subcommand(1);

  Common common;
  Extra extra;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "JSON run configuration")->required();
    sub->add_option("--seed", common.seed, "simulation seed (and mc base seed)");
    sub->add_option("--out", common.out, "output directory");
    sub->add_option("--workers", common.workers, "mc worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("--paper-scale", common.full_scale, "n=1e6, h=1e-4, R=1e4");
  };

  auto* simulate = app.add_subcommand("simulate", "simulate a path and write path.csv");
  auto* filter = app.add_subcommand("filter", "run the discrete filter and write filter.csv");
  auto* estimate = app.add_subcommand("estimate", "two-stage estimation, writes estimate.json");
  auto* asymptotics = app.add_subcommand("asymptotics", "information matrices and standard errors");
  auto* riccati = app.add_subcommand("riccati", "Riccati solution at the true parameter");
  auto* mc = app.add_subcommand("mc", "Monte Carlo replications");
  for (auto* s : {simulate, filter, estimate, asymptotics, riccati, mc}) add_common(s);
  for (auto* s : {filter, estimate}) s->add_option("--path", extra.path, "observation CSV (default: simulate)");
  mc->add_option("--scenario", extra.scenario, "i, ii or iii");
  mc->add_option("--reps", extra.reps, "number of replications");
  app.add_option_function<std::string>(
      "--isa", [](const std::string& v) { hou::simd::set_isa(v == "scalar" ? hou::simd::Isa::scalar : hou::simd::Isa::avx2); },
      "kernel instruction set (scalar or avx2)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report("config", e.what(), "", kConfig);
  } catch (const std::invalid_argument& e) {
    return report("config", e.what(), "--isa", kConfig);
  }

  try {
    const hou::RunConfig cfg = resolve(common, extra);
    if (*simulate) return cmd_simulate(cfg);
    if (*filter) return cmd_filter(cfg, extra.path);
    if (*estimate) return cmd_estimate(cfg, extra.path);
    if (*asymptotics) return cmd_asymptotics(cfg);
    if (*riccati) return cmd_riccati(cfg);
    if (*mc) return cmd_mc(cfg);
  } catch (const hou::Error& e) {
    return report(hou::to_string(e.kind()), e.what(), e.key(), exit_code(e.kind()));
  } catch (const std::exception& e) {
    return report("numeric", e.what(), "", kNumeric);
  }
  return kOk;
}
