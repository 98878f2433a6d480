#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hou/asymptotics.hpp"
#include "hou/filter.hpp"
#include "hou/mc.hpp"

namespace hou {

/// %.17g, which round-trips every double.
std::string format_double(double v);

/// Header `t,y1..y{d2}[,x1..x{d1}]`, one row per grid point.
void write_path_csv(const std::string& file, const ObservationPath& path);
/// Reads what write_path_csv wrote. The step is taken from the time column,
/// which must be uniform to 1e-9 relative.
ObservationPath read_path_csv(const std::string& file);

/// Header `t,m1..[,x1..]`.
void write_filter_csv(const std::string& file, const VectorXd& t, const FilterPath& f,
                      const MatrixXd* x_truth = nullptr);

/// Header `seed,<theta1 names>,<theta2 names>,converged`.
void write_estimates_csv(const std::string& file, const std::vector<McRecord>& records,
                         const ModelSpec& spec);
/// Header `bin_left,bin_right,count`.
void write_histogram_csv(const std::string& file, const Histogram& h);

nlohmann::json matrix_json(const MatrixXd& m);  // array of rows
nlohmann::json vector_json(const VectorXd& v);

nlohmann::json to_json(const RiccatiSolution& r, const ControllabilityReport& ctrl);
nlohmann::json to_json(const EstimationResult& r);
nlohmann::json to_json(const AsymptoticInfo& info);
nlohmann::json to_json(const McSummary& s);

/// Writes `j.dump(2)` plus a trailing newline.
void write_json(const std::string& file, const nlohmann::json& j);

}  // namespace hou
