#include "hou/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "hou/errors.hpp"

namespace hou {

const char* to_string(Scenario s) noexcept {
  switch (s) {
    case Scenario::i: return "i";
    case Scenario::ii: return "ii";
    case Scenario::iii: return "iii";
  }
  return "?";
}

Scenario parse_scenario(const std::string& s) {
  if (s == "i") return Scenario::i;
  if (s == "ii") return Scenario::ii;
  if (s == "iii") return Scenario::iii;
  throw_config("mc.scenario", "expected one of i, ii, iii (got '" + s + "')");
}

ScenarioSettings scenario_settings(Scenario s) {
  switch (s) {
    case Scenario::i: return {0.0, 0, 0.1};
    case Scenario::ii: return {1.0, 0, 0.1};
    case Scenario::iii: return {1.0, 100, 0.1};
  }
  return {};
}

void McConfig::apply_scenario(Scenario s) {
  const ScenarioSettings st = scenario_settings(s);
  scenario = s;
  m0 = VectorXd::Constant(spec.d1, st.m0);
  burn_in = st.burn_in;
  gamma0 = st.gamma0;
}

McRecord run_replication(const McConfig& cfg, std::size_t index) {
  McRecord rec;
  rec.index = index;
  rec.seed = cfg.base_seed + index;
  rec.theta1 = VectorXd::Constant(cfg.spec.m1, std::numeric_limits<double>::quiet_NaN());
  rec.theta2 = VectorXd::Constant(cfg.spec.m2, std::numeric_limits<double>::quiet_NaN());
  try {
    SimulationOptions sim = cfg.simulation;
    sim.store_x = false;
    const ObservationPath path = simulate_path(cfg.spec, cfg.truth, cfg.scheme, rec.seed, sim);
    EstimateOptions eo;
    eo.h1_optim = cfg.optim;
    eo.h2.optim = cfg.optim;
    eo.h2.m0 = cfg.m0;
    eo.h2.burn_in = cfg.burn_in;
    const EstimationResult r = estimate(path, cfg.spec, eo);
    rec.theta1 = r.theta1_hat;
    rec.theta2 = r.theta2_hat;
    rec.h1 = r.h1_value;
    rec.h2 = r.h2_value;
    rec.converged = r.converged();
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  return rec;
}

std::vector<McRecord> run_replications(const McConfig& cfg) {
  if (cfg.replications < 1) throw_config("mc.replications", "must be at least 1");
  if (cfg.burn_in >= cfg.scheme.n) throw_config("filter.burn_in", "must be smaller than n");
  std::vector<McRecord> out(cfg.replications);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t r = next++; r < cfg.replications; r = next++) out[r] = run_replication(cfg, r);
  };
  const auto workers = static_cast<std::size_t>(std::max(1, cfg.workers));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < std::min(workers, cfg.replications); ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return out;
}

Moments moments(const std::vector<double>& x) {
  Moments m;
  const auto R = static_cast<double>(x.size());
  if (x.empty()) return m;
  double s = 0.0;
  for (double v : x) s += v;
  m.mean = s / R;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = v - m.mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  if (x.size() > 1) m.sd = std::sqrt(m2 / (R - 1.0));
  m2 /= R;
  m3 /= R;
  m4 /= R;
  if (m2 > 0.0) {
    m.skewness = m3 / std::pow(m2, 1.5);
    m.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  }
  return m;
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw_domain("quantile of an empty sample");
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

Histogram fd_histogram(const std::vector<double>& x) {
  Histogram hist;
  if (x.empty()) return hist;
  std::vector<double> s = x;
  std::sort(s.begin(), s.end());
  const double lo = s.front();
  const double hi = s.back();
  if (!(hi > lo)) {
    hist.edges = {lo, hi};
    hist.counts = {s.size()};
    return hist;
  }
  const double iqr = quantile_sorted(s, 0.75) - quantile_sorted(s, 0.25);
  std::size_t bins = 0;
  if (iqr > 0.0) {
    const double width = 2.0 * iqr / std::cbrt(static_cast<double>(s.size()));
    bins = static_cast<std::size_t>(std::ceil((hi - lo) / width));
  } else {
    bins = static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(s.size())))) + 1;
  }
  bins = std::clamp<std::size_t>(bins, 1, 10000);
  const double width = (hi - lo) / static_cast<double>(bins);
  hist.edges.resize(bins + 1);
  for (std::size_t k = 0; k <= bins; ++k) hist.edges[k] = lo + width * static_cast<double>(k);
  hist.edges.back() = hi;
  hist.counts.assign(bins, 0);
  for (double v : s) {
    auto k = static_cast<std::size_t>((v - lo) / width);
    hist.counts[std::min(k, bins - 1)]++;
  }
  return hist;
}

McSummary summarize(const McConfig& cfg, const std::vector<McRecord>& records,
                    const AsymptoticInfo& info) {
  McSummary sum;
  sum.scenario = to_string(cfg.scenario);
  sum.n = cfg.scheme.n;
  sum.h = cfg.scheme.h;
  sum.base_seed = cfg.base_seed;
  sum.m0 = cfg.m0.size() ? cfg.m0 : VectorXd::Zero(cfg.spec.d1);
  sum.burn_in = cfg.burn_in;
  sum.gamma0 = cfg.gamma0;
  sum.replications = records.size();

  std::vector<const McRecord*> ok;
  for (const auto& r : records) {
    if (r.converged) ok.push_back(&r);
  }
  sum.effective = ok.size();
  if (ok.empty()) throw_nonconvergence("no replication converged");

  const Eigen::Index m1 = cfg.spec.m1;
  const Eigen::Index m2 = cfg.spec.m2;
  const auto R = static_cast<Eigen::Index>(ok.size());
  MatrixXd est1(R, m1);
  MatrixXd est2(R, m2);
  for (Eigen::Index r = 0; r < R; ++r) {
    est1.row(r) = ok[static_cast<std::size_t>(r)]->theta1.transpose();
    est2.row(r) = ok[static_cast<std::size_t>(r)]->theta2.transpose();
  }
  MatrixXd z1;
  MatrixXd z2;
  if (info.pd1) {
    z1 = standardized_errors(est1, cfg.truth.theta1, info.gamma1, std::sqrt(static_cast<double>(cfg.scheme.n)));
  }
  if (info.pd2) z2 = standardized_errors(est2, cfg.truth.theta2, info.gamma2, std::sqrt(cfg.scheme.t_n()));

  auto add = [&](const std::string& name, const MatrixXd& est, const MatrixXd& z, Eigen::Index j,
                 double truth, const VectorXd& se) {
    ParamSummary p;
    p.name = name;
    p.truth = truth;
    std::vector<double> v(est.col(j).data(), est.col(j).data() + est.rows());
    const Moments m = moments(v);
    p.mean = m.mean;
    p.sd = m.sd;
    p.bias = m.mean - truth;
    p.se_theory = se.size() ? se[j] : std::numeric_limits<double>::quiet_NaN();
    if (z.size()) {
      std::vector<double> zv(z.col(j).data(), z.col(j).data() + z.rows());
      const Moments mz = moments(zv);
      p.z_mean = mz.mean;
      p.z_sd = mz.sd;
      p.z_skewness = mz.skewness;
      p.z_excess_kurtosis = mz.excess_kurtosis;
    } else {
      p.z_mean = p.z_sd = p.z_skewness = p.z_excess_kurtosis = std::numeric_limits<double>::quiet_NaN();
    }
    p.histogram = fd_histogram(v);
    sum.params.push_back(std::move(p));
  };
  for (Eigen::Index j = 0; j < m1; ++j) {
    add(cfg.spec.theta1_names.at(static_cast<std::size_t>(j)), est1, z1, j, cfg.truth.theta1[j], info.se1);
  }
  for (Eigen::Index j = 0; j < m2; ++j) {
    add(cfg.spec.theta2_names.at(static_cast<std::size_t>(j)), est2, z2, j, cfg.truth.theta2[j], info.se2);
  }
  return sum;
}

McRun run_mc(const McConfig& cfg) {
  McRun run;
  run.info = asymptotic_info(cfg.spec, cfg.truth, cfg.scheme);
  run.records = run_replications(cfg);
  run.summary = summarize(cfg, run.records, run.info);
  return run;
}

}  // namespace hou
