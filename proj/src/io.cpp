#include "hou/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hou/errors.hpp"

namespace hou {

using nlohmann::json;

namespace {

std::ofstream open_out(const std::string& file) {
  std::ofstream out(file);
  if (!out) throw_config("--out", "cannot write '" + file + "'");
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_path_csv(const std::string& file, const ObservationPath& path) {
  std::ofstream out = open_out(file);
  const Eigen::Index d2 = path.y.cols();
  const Eigen::Index d1 = path.x ? path.x->cols() : 0;
  out << "t";
  for (Eigen::Index k = 0; k < d2; ++k) out << ",y" << k + 1;
  for (Eigen::Index k = 0; k < d1; ++k) out << ",x" << k + 1;
  out << '\n';
  for (Eigen::Index i = 0; i < path.y.rows(); ++i) {
    out << format_double(static_cast<double>(i) * path.h());
    for (Eigen::Index k = 0; k < d2; ++k) out << ',' << format_double(path.y(i, k));
    for (Eigen::Index k = 0; k < d1; ++k) out << ',' << format_double((*path.x)(i, k));
    out << '\n';
  }
}

ObservationPath read_path_csv(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw_config("--path", "cannot open '" + file + "'");
  std::string line;
  if (!std::getline(in, line)) throw_config("--path", "empty file");
  const auto header = split(line);
  if (header.empty() || header[0] != "t") throw_config("--path", "first column must be t");
  std::vector<int> ycols, xcols;
  for (std::size_t c = 1; c < header.size(); ++c) {
    if (!header[c].empty() && header[c][0] == 'y') ycols.push_back(static_cast<int>(c));
    else if (!header[c].empty() && header[c][0] == 'x') xcols.push_back(static_cast<int>(c));
    else throw_config("--path", "unexpected column '" + header[c] + "'");
  }
  if (ycols.empty()) throw_config("--path", "no y columns");

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) throw_config("--path", "ragged row " + std::to_string(rows.size() + 2));
    std::vector<double> r;
    for (const auto& c : cells) {
      try {
        r.push_back(std::stod(c));
      } catch (const std::exception&) {
        throw_config("--path", "bad number '" + c + "'");
      }
    }
    rows.push_back(std::move(r));
  }
  if (rows.size() < 2) throw_config("--path", "need at least two rows");

  ObservationPath p;
  p.scheme.n = rows.size() - 1;
  p.scheme.h = (rows.back()[0] - rows.front()[0]) / static_cast<double>(p.scheme.n);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double step = rows[i][0] - rows[i - 1][0];
    if (std::abs(step - p.scheme.h) > 1e-9 * p.scheme.h + 1e-12) {
      throw_config("--path", "time grid is not uniform at row " + std::to_string(i + 1));
    }
  }
  p.scheme.validate();
  p.y.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(ycols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t k = 0; k < ycols.size(); ++k) {
      p.y(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][static_cast<std::size_t>(ycols[k])];
    }
  }
  if (!xcols.empty()) {
    MatrixXd x(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(xcols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t k = 0; k < xcols.size(); ++k) {
        x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][static_cast<std::size_t>(xcols[k])];
      }
    }
    p.x = std::move(x);
  }
  return p;
}

void write_filter_csv(const std::string& file, const VectorXd& t, const FilterPath& f,
                      const MatrixXd* x_truth) {
  std::ofstream out = open_out(file);
  out << "t";
  for (Eigen::Index k = 0; k < f.m_hat.cols(); ++k) out << ",m" << k + 1;
  if (x_truth) {
    for (Eigen::Index k = 0; k < x_truth->cols(); ++k) out << ",x" << k + 1;
  }
  out << '\n';
  for (Eigen::Index i = 0; i < f.m_hat.rows(); ++i) {
    out << format_double(t[i]);
    for (Eigen::Index k = 0; k < f.m_hat.cols(); ++k) out << ',' << format_double(f.m_hat(i, k));
    if (x_truth) {
      for (Eigen::Index k = 0; k < x_truth->cols(); ++k) out << ',' << format_double((*x_truth)(i, k));
    }
    out << '\n';
  }
}

void write_estimates_csv(const std::string& file, const std::vector<McRecord>& records,
                         const ModelSpec& spec) {
  std::ofstream out = open_out(file);
  out << "seed";
  for (const auto& n : spec.theta1_names) out << ',' << n;
  for (const auto& n : spec.theta2_names) out << ',' << n;
  out << ",converged\n";
  for (const auto& r : records) {
    out << r.seed;
    for (Eigen::Index k = 0; k < r.theta1.size(); ++k) out << ',' << format_double(r.theta1[k]);
    for (Eigen::Index k = 0; k < r.theta2.size(); ++k) out << ',' << format_double(r.theta2[k]);
    out << ',' << (r.converged ? 1 : 0) << '\n';
  }
}

void write_histogram_csv(const std::string& file, const Histogram& h) {
  std::ofstream out = open_out(file);
  out << "bin_left,bin_right,count\n";
  for (std::size_t k = 0; k < h.counts.size(); ++k) {
    out << format_double(h.edges[k]) << ',' << format_double(h.edges[k + 1]) << ',' << h.counts[k] << '\n';
  }
}

json matrix_json(const MatrixXd& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(number(m(i, k)));
    a.push_back(std::move(row));
  }
  return a;
}

json vector_json(const VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number(v[i]));
  return a;
}

json to_json(const RiccatiSolution& r, const ControllabilityReport& ctrl) {
  json spectrum = json::array();
  for (Eigen::Index i = 0; i < r.spectrum.size(); ++i) {
    spectrum.push_back({{"re", r.spectrum[i].real()}, {"im", r.spectrum[i].imag()}});
  }
  return {{"gamma_plus", matrix_json(r.gamma_plus)},
          {"gamma_minus", matrix_json(r.gamma_minus)},
          {"alpha", matrix_json(r.alpha)},
          {"hamiltonian", matrix_json(r.hamiltonian)},
          {"spectrum", spectrum},
          {"min_spectral_gap", r.min_spectral_gap},
          {"controllability", {{"rank", ctrl.rank}, {"required", ctrl.required}, {"pass", ctrl.pass()}}}};
}

json to_json(const EstimationResult& r) {
  return {{"theta1_hat", vector_json(r.theta1_hat)},
          {"theta2_hat", vector_json(r.theta2_hat)},
          {"h1", number(r.h1_value)},
          {"h2", number(r.h2_value)},
          {"converged", r.converged()},
          {"converged_theta1", r.converged1},
          {"converged_theta2", r.converged2},
          {"theta1_degenerate", r.theta1_degenerate},
          {"iterations", {{"theta1", r.iterations1}, {"theta2", r.iterations2}}},
          {"burn_in", r.burn_in},
          {"se1", vector_json(r.se1)},
          {"se2", vector_json(r.se2)}};
}

json to_json(const AsymptoticInfo& info) {
  return {{"gamma1", matrix_json(info.gamma1)}, {"gamma2", matrix_json(info.gamma2)},
          {"se1", vector_json(info.se1)},       {"se2", vector_json(info.se2)},
          {"pd_flag1", info.pd1},               {"pd_flag2", info.pd2}};
}

json to_json(const McSummary& s) {
  json params = json::array();
  for (const auto& p : s.params) {
    json edges = json::array();
    for (double e : p.histogram.edges) edges.push_back(number(e));
    params.push_back({{"name", p.name},
                      {"truth", p.truth},
                      {"mean", number(p.mean)},
                      {"sd", number(p.sd)},
                      {"bias", number(p.bias)},
                      {"se_theory", number(p.se_theory)},
                      {"standardized",
                       {{"mean", number(p.z_mean)},
                        {"sd", number(p.z_sd)},
                        {"skewness", number(p.z_skewness)},
                        {"excess_kurtosis", number(p.z_excess_kurtosis)}}},
                      {"histogram", {{"edges", edges}, {"counts", p.histogram.counts}}}});
  }
  return {{"scenario", s.scenario},
          {"n", s.n},
          {"h", s.h},
          {"t_n", static_cast<double>(s.n) * s.h},
          {"base_seed", s.base_seed},
          {"m0", vector_json(s.m0)},
          {"burn_in", s.burn_in},
          {"gamma0", s.gamma0},
          {"replications", s.replications},
          {"effective", s.effective},
          {"params", params}};
}

void write_json(const std::string& file, const json& j) {
  std::ofstream out = open_out(file);
  out << j.dump(2) << '\n';
}

}  // namespace hou
