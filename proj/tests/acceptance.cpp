// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hou/asymptotics.hpp"
#include "hou/io.hpp"
#include "hou/mc.hpp"
#include "hou/riccati.hpp"
#include "oracles.hpp"

using namespace hou;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void verdict(int id, bool ok, const std::string& title, const std::string& detail) {
  std::printf("%s %2d %s: %s\n", ok ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

ThetaPoint desk_truth() {
  VectorXd t1(1), t2(2);
  t1 << 0.02;
  t2 << 1.5, 0.3;
  return {t1, t2};
}

const ModelSpec& desk_model() {
  static const ModelSpec s = scalar_family({});
  return s;
}

McConfig desk_mc(Scenario s, std::size_t reps) {
  McConfig c;
  c.spec = desk_model();
  c.truth = desk_truth();
  c.scheme = {100000, 1e-3};
  c.replications = reps;
  c.base_seed = 1;
  c.apply_scenario(s);
  return c;
}

void riccati_closed_form() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      const double a = 0.5 + 2.5 * i / 9.0, b = 0.1 + 0.9 * j / 9.0, s = 0.02;
      VectorXd t1(1), t2(2);
      t1 << s;
      t2 << a, b;
      const double g = solve_are(desk_model(), {t1, t2}).gamma_plus(0, 0);
      const double closed = (s * s * a) * (std::sqrt(1 + b * b / (s * s * a * a)) - 1);
      worst = std::max(worst, std::abs(g - closed));
    }
  }
  const double dt = seconds_since(t0);
  verdict(1, worst < 1e-10 && dt < 1.0, "Riccati closed form on 10x10 grid",
          "max |err| " + fmt("%.3g", worst) + ", " + fmt("%.3f", dt) + " s");
}

void riccati_ode_rate() {
  const auto t0 = Clock::now();
  const RiccatiSolution r = solve_are(desk_model(), desk_truth());
  const RiccatiTrajectory tr =
      integrate_riccati_ode(desk_model(), desk_truth(), MatrixXd::Constant(1, 1, 0.1), 0.5, 1e-4);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    if (tr.t[i] < 0.1 - 1e-12) continue;
    const double y = std::log((tr.gamma[i] - r.gamma_plus).norm());
    sx += tr.t[i];
    sy += y;
    sxx += tr.t[i] * tr.t[i];
    sxy += tr.t[i] * y;
    ++n;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double target = -2.0 * r.alpha(0, 0);
  const double dt = seconds_since(t0);
  verdict(2, std::abs(slope / target - 1) < 0.1 && dt < 5.0, "Riccati ODE decay rate",
          "slope " + fmt("%.4f", slope) + " vs -2 alpha " + fmt("%.4f", target) + ", " + fmt("%.3f", dt) + " s");
}

void sigma_standard_error() {
  const AsymptoticInfo info = asymptotic_info(desk_model(), desk_truth(), {1000000, 1e-4});
  const double exact = 0.02 / std::sqrt(2e6);
  const double se = info.se1[0];
  verdict(3, std::abs(se / exact - 1) < 1e-10 && std::abs(se - 1.41421e-5) < 5e-11, "sigma standard error at n = 1e6",
          "se " + fmt("%.6e", se) + ", rel err vs 0.02/sqrt(2n) " + fmt("%.2e", std::abs(se / exact - 1)));
}

void theta2_standard_errors() {
  const auto t0 = Clock::now();
  const double tn = 100.0;
  const MatrixXd closed = gamma2_closed_form_1d(desk_model(), desk_truth());
  const MatrixXd quad = gamma2_quadrature(desk_model(), desk_truth());
  const MatrixXd oracle_g = oracle::scalar_gamma2(1.5, 0.3, 1.0, 0.02);
  auto se = [&](const MatrixXd& g) { return (g.inverse().diagonal() / tn).cwiseSqrt().eval(); };
  const VectorXd s_closed = se(closed), s_quad = se(quad);
  const double rel_a = std::abs(s_closed[0] / 0.2115 - 1), rel_b = std::abs(s_closed[1] / 0.01324 - 1);
  const double cross = (closed - quad).cwiseAbs().maxCoeff();
  const double oracle_gap = (closed - oracle_g).cwiseAbs().maxCoeff();
  const double dt = seconds_since(t0);
  const bool ok = rel_a < 0.005 && rel_b < 0.005 && std::abs(s_quad[0] / 0.2115 - 1) < 0.005 &&
                  std::abs(s_quad[1] / 0.01324 - 1) < 0.005 && cross < 1e-6 && oracle_gap < 1e-9 && dt < 5.0;
  verdict(4, ok, "theta2 standard errors at t_n = 100",
          "se (" + fmt("%.5f", s_closed[0]) + ", " + fmt("%.6f", s_closed[1]) + "), quadrature gap " +
              fmt("%.2e", cross) + ", " + fmt("%.2f", dt) + " s");
}

struct Stats {
  double mean = 0, sd = 0;
};

Stats stats(const std::vector<McRecord>& recs, std::size_t count, int coord) {
  std::vector<double> v;
  for (std::size_t r = 0; r < count; ++r) {
    if (!recs[r].converged) continue;
    v.push_back(coord == 0 ? recs[r].theta1[0] : recs[r].theta2[coord - 1]);
  }
  const Moments m = moments(v);
  return {m.mean, m.sd};
}

void consistency_and_normality() {
  const McConfig cfg = desk_mc(Scenario::i, 500);
  const auto t0 = Clock::now();
  const std::vector<McRecord> first = [&] {
    McConfig c = cfg;
    c.replications = 200;
    return run_replications(c);
  }();
  const double dt200 = seconds_since(t0);
  std::vector<McRecord> all = first;
  {
    McConfig rest = cfg;
    rest.base_seed = cfg.base_seed + 200;
    rest.replications = 300;
    for (McRecord r : run_replications(rest)) {
      r.index += 200;
      all.push_back(std::move(r));
    }
  }
  const AsymptoticInfo info = asymptotic_info(cfg.spec, cfg.truth, cfg.scheme);

  // Consistency over the first 200 replications.
  const double se[3] = {info.se1[0], info.se2[0], info.se2[1]};
  const double truth[3] = {0.02, 1.5, 0.3};
  const char* names[3] = {"sigma", "a", "b"};
  const double bound[3] = {3 * 0.02 / std::sqrt(2e5 * 200), 3 * 0.2115 / std::sqrt(200.0), 3 * 0.01324 / std::sqrt(200.0)};
  bool ok5 = dt200 < 600.0;
  std::ostringstream d5;
  for (int k = 0; k < 3; ++k) {
    const Stats s = stats(first, first.size(), k);
    const double ratio = s.sd / se[k];
    const bool mean_ok = std::abs(s.mean - truth[k]) < bound[k];
    const bool sd_ok = ratio >= 0.8 && ratio <= 1.25;
    ok5 = ok5 && mean_ok && sd_ok;
    d5 << names[k] << " mean " << fmt("%.6g", s.mean) << (mean_ok ? "" : " (out)") << " sd/se " << fmt("%.3f", ratio)
       << (sd_ok ? "" : " (out)") << "; ";
  }
  d5 << fmt("%.1f", dt200) << " s";
  verdict(5, ok5, "desk-scale consistency, scenario i, R = 200", d5.str());

  // Standardized errors over all 500.
  const McSummary sum = summarize(cfg, all, info);
  bool ok6 = sum.effective == 500;
  std::ostringstream d6;
  for (const ParamSummary& p : sum.params) {
    const bool ok = std::abs(p.z_mean) < 0.15 && p.z_sd >= 0.85 && p.z_sd <= 1.15;
    ok6 = ok6 && ok;
    d6 << p.name << " z-mean " << fmt("%.3f", p.z_mean) << " z-sd " << fmt("%.3f", p.z_sd) << (ok ? "" : " (out)") << "; ";
  }
  d6 << "effective " << sum.effective;
  verdict(6, ok6, "standardized errors, R = 500", d6.str());
}

void initial_value_ordering() {
  const McRun ii = run_mc(desk_mc(Scenario::ii, 200));
  const McRun iii = run_mc(desk_mc(Scenario::iii, 200));
  const ParamSummary &a2 = ii.summary.params[1], &b2 = ii.summary.params[2];
  const ParamSummary &a3 = iii.summary.params[1], &b3 = iii.summary.params[2];
  const bool ok = a2.bias > 0 && b2.bias > 0 && std::abs(a3.bias) < std::abs(a2.bias) &&
                  std::abs(b3.bias) < std::abs(b2.bias);
  verdict(7, ok, "wrong initial value and burn-in ordering",
          "(ii) mean a " + fmt("%.4f", a2.mean) + ", b " + fmt("%.5f", b2.mean) + "; (iii) mean a " +
              fmt("%.4f", a3.mean) + ", b " + fmt("%.5f", b3.mean));
}

void filter_equivalence() {
  const RiccatiSolution r = solve_are(desk_model(), desk_truth());
  const double alpha = r.alpha(0, 0), K = r.gamma_plus(0, 0) / 4e-4, h = 1e-3;
  double worst = 0.0;
  bool envelope = true;
  for (int p = 0; p < 100; ++p) {
    const ObservationPath path = simulate_path(desk_model(), desk_truth(), {1000, h}, 10000 + p);
    const MatrixXd dy = increments(path);
    const FilterPath f0 = run_discrete_filter(dy, h, desk_model(), desk_truth(), VectorXd::Zero(1));
    const FilterPath f1 = run_discrete_filter(dy, h, desk_model(), desk_truth(), VectorXd::Ones(1));
    const std::vector<double> dyv(dy.data(), dy.data() + dy.size());
    const auto ref = oracle::direct_sum_filter(dyv, h, alpha, K, 1.0);
    for (std::size_t i = 0; i < ref.size(); ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      worst = std::max(worst, std::abs(f1.m_hat(ii, 0) - ref[i]) / (1 + std::abs(ref[i])));
      const double gap = std::abs(f1.m_hat(ii, 0) - f0.m_hat(ii, 0));
      if (gap > std::exp(-alpha * static_cast<double>(i) * h) * (1 + 1e-6)) envelope = false;
    }
  }
  verdict(8, worst < 1e-10 && envelope, "recursive filter equals direct sum",
          "max rel err " + fmt("%.2e", worst) + ", forgetting envelope " + (envelope ? "held" : "violated"));
}

void identifiability() {
  const IdentifiabilityReport rep = check_identifiability(desk_model(), desk_truth(), 7);
  const double at_truth =
      std::abs(y1(desk_model(), desk_truth().theta1, desk_truth().theta1)) +
      std::abs(y2(desk_model(), desk_truth().theta2, desk_truth()));
  double worst = 0.0;
  for (const VectorXd& t2 : desk_model().theta2_box.grid(7, false)) {
    worst = std::max(worst, std::abs(y2_quadrature(desk_model(), t2, desk_truth()) -
                                     y2_closed_form_1d(desk_model(), t2, desk_truth())));
  }
  const bool ok = rep.ok() && rep.max_y1 < 0 && rep.max_y2 < 0 && at_truth == 0.0 && worst < 1e-8;
  verdict(9, ok, "identifiability diagnostics",
          "c1 " + fmt("%.4g", rep.c1) + ", c2 " + fmt("%.4g", rep.c2) + ", quadrature vs closed form " +
              fmt("%.2e", worst));
}

std::string slurp(const std::filesystem::path& f) {
  std::ifstream in(f, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void determinism() {
  McConfig cfg = desk_mc(Scenario::i, 12);
  cfg.scheme = {20000, 5e-3};
  const auto dir = std::filesystem::temp_directory_path() / "hou_acceptance";
  std::filesystem::create_directories(dir);
  cfg.workers = 1;
  write_json((dir / "summary_w1.json").string(), to_json(run_mc(cfg).summary));
  cfg.workers = 3;
  write_json((dir / "summary_w3.json").string(), to_json(run_mc(cfg).summary));
  const std::string a = slurp(dir / "summary_w1.json"), b = slurp(dir / "summary_w3.json");
  verdict(10, !a.empty() && a == b, "worker count does not change summary.json",
          std::to_string(a.size()) + " bytes, " + (a == b ? "identical" : "different"));
}

}  // namespace

int main() {
  riccati_closed_form();
  riccati_ode_rate();
  sigma_standard_error();
  theta2_standard_errors();
  filter_equivalence();
  identifiability();
  determinism();
  initial_value_ordering();
  consistency_and_normality();
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
