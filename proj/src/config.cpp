#include "hou/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "hou/errors.hpp"

namespace hou {

using nlohmann::json;

namespace {

/// Read-side view of one JSON object that remembers which keys were consumed.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw_config(path_, "expected an object");
  }

  std::string key(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }
  bool has(const std::string& k) const { return j_.contains(k); }

  const json& raw(const std::string& k) {
    seen_.insert(k);
    return j_.at(k);
  }

  template <class T>
  T get(const std::string& k, T fallback) {
    if (!has(k)) return fallback;
    return as<T>(k);
  }

  template <class T>
  T require(const std::string& k) {
    if (!has(k)) throw_config(key(k), "missing required key");
    return as<T>(k);
  }

  Section sub(const std::string& k) {
    seen_.insert(k);
    return Section(j_.at(k), key(k));
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw_config(key(it.key()), "unknown key");
    }
  }

 private:
  template <class T>
  T as(const std::string& k) {
    seen_.insert(k);
    try {
      return j_.at(k).get<T>();
    } catch (const json::exception&) {
      throw_config(key(k), "value has the wrong type");
    }
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

Box parse_box(Section& s, const std::string& k) {
  const auto rows = s.require<std::vector<std::vector<double>>>(k);
  std::vector<double> lo, hi;
  for (const auto& r : rows) {
    if (r.size() != 2) throw_config(s.key(k), "each interval must be [lower, upper]");
    if (!(r[0] < r[1])) throw_config(s.key(k), "lower bound must be below upper bound");
    lo.push_back(r[0]);
    hi.push_back(r[1]);
  }
  return Box(lo, hi);
}

json box_json(const Box& b) {
  json a = json::array();
  for (std::size_t i = 0; i < b.dim(); ++i) a.push_back({b.lo[i], b.hi[i]});
  return a;
}

VectorXd to_vec(const std::vector<double>& v) {
  return Eigen::Map<const VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

void check_in_box(const std::vector<double>& v, const Box& box, const std::string& key) {
  if (v.size() != box.dim()) {
    throw_config(key, "expected " + std::to_string(box.dim()) + " values, got " + std::to_string(v.size()));
  }
  if (!box.contains(to_vec(v))) throw_config(key, "value lies outside its parameter box");
}

void check_size(const std::vector<double>& v, std::size_t n, const std::string& key) {
  if (!v.empty() && v.size() != n) {
    throw_config(key, "expected " + std::to_string(n) + " values, got " + std::to_string(v.size()));
  }
}

}  // namespace

RunConfig parse_config(const json& j) {
  RunConfig c;
  Section root(j, "");
  if (root.has("version")) root.raw("version");  // written into resolved configs; ignored

  {
    Section m = root.sub("model");
    c.model.family = m.get<std::string>("family", "scalar");
    if (c.model.family == "scalar") {
      c.model.free = m.get("free", c.model.free);
      if (m.has("fixed")) {
        c.model.fixed = m.get("fixed", c.model.fixed);
      } else {
        for (const auto& name : c.model.free) c.model.fixed.erase(name);
      }
      for (const auto& name : c.model.free) {
        if (name != "a" && name != "b" && name != "c") {
          throw_config("model.free", "unknown coefficient '" + name + "'");
        }
        if (c.model.fixed.count(name)) throw_config("model.fixed." + name, "coefficient is also free");
      }
      for (const auto& [name, v] : c.model.fixed) {
        if (name != "a" && name != "b" && name != "c") throw_config("model.fixed." + name, "unknown key");
        (void)v;
      }
      for (const char* name : {"a", "b", "c"}) {
        const bool is_free = std::find(c.model.free.begin(), c.model.free.end(), name) != c.model.free.end();
        if (!is_free && !c.model.fixed.count(name)) {
          throw_config(std::string("model.fixed.") + name, "missing value for a coefficient that is not free");
        }
      }
    } else if (c.model.family == "diagonal") {
      c.model.free.clear();
      c.model.fixed.clear();
      c.model.dim = m.require<int>("dim");
      if (c.model.dim < 1) throw_config("model.dim", "must be positive");
      c.model.c_diag = m.get("c", std::vector<double>(static_cast<std::size_t>(c.model.dim), 1.0));
      if (c.model.c_diag.size() != static_cast<std::size_t>(c.model.dim)) {
        throw_config("model.c", "expected one value per dimension");
      }
    } else {
      throw_config("model.family", "unknown family '" + c.model.family + "' (expected scalar or diagonal)");
    }
    c.model.theta1_box = parse_box(m, "theta1_box");
    c.model.theta2_box = parse_box(m, "theta2_box");
    m.finish();
  }

  {
    Section t = root.sub("truth");
    c.theta1_true = t.require<std::vector<double>>("theta1");
    c.theta2_true = t.require<std::vector<double>>("theta2");
    t.finish();
  }

  {
    Section s = root.sub("scheme");
    c.scheme.n = s.require<std::size_t>("n");
    c.scheme.h = s.require<double>("h");
    s.finish();
    c.scheme.validate();
  }

  if (root.has("simulation")) {
    Section s = root.sub("simulation");
    c.simulation.seed = s.get<std::uint64_t>("seed", c.simulation.seed);
    c.simulation.init = s.get<std::string>("init", c.simulation.init);
    c.simulation.x0 = s.get("x0", c.simulation.x0);
    c.simulation.y0 = s.get("y0", c.simulation.y0);
    c.simulation.method = s.get<std::string>("method", c.simulation.method);
    c.simulation.store_x = s.get<bool>("store_x", c.simulation.store_x);
    s.finish();
    if (c.simulation.init != "fixed" && c.simulation.init != "stationary_x") {
      throw_config("simulation.init", "expected fixed or stationary_x");
    }
    if (c.simulation.method != "exact" && c.simulation.method != "euler") {
      throw_config("simulation.method", "expected exact or euler");
    }
  }

  if (root.has("filter")) {
    Section s = root.sub("filter");
    c.filter.m0 = s.get("m0", c.filter.m0);
    c.filter.burn_in = s.get<std::size_t>("burn_in", c.filter.burn_in);
    c.filter.gamma0 = s.get<double>("gamma0", c.filter.gamma0);
    s.finish();
  }

  if (root.has("estimation")) {
    Section s = root.sub("estimation");
    c.estimation.theta1_source = s.get<std::string>("theta1_source", c.estimation.theta1_source);
    c.estimation.theta1_fixed = s.get("theta1_fixed", c.estimation.theta1_fixed);
    c.estimation.optim.xtol = s.get<double>("xtol", c.estimation.optim.xtol);
    c.estimation.optim.max_iter = s.get<int>("max_iter", c.estimation.optim.max_iter);
    c.estimation.optim.grid_points = s.get<int>("grid_points", c.estimation.optim.grid_points);
    c.estimation.optim.initial_step = s.get<double>("initial_step", c.estimation.optim.initial_step);
    s.finish();
    if (c.estimation.theta1_source != "estimated" && c.estimation.theta1_source != "fixed") {
      throw_config("estimation.theta1_source", "expected estimated or fixed");
    }
    if (!(c.estimation.optim.xtol > 0.0)) throw_config("estimation.xtol", "must be positive");
    if (c.estimation.optim.max_iter < 1) throw_config("estimation.max_iter", "must be positive");
    if (c.estimation.optim.grid_points < 1) throw_config("estimation.grid_points", "must be positive");
  }

  if (root.has("mc")) {
    Section s = root.sub("mc");
    c.mc.replications = s.get<std::size_t>("replications", c.mc.replications);
    c.mc.base_seed = s.get<std::uint64_t>("base_seed", c.mc.base_seed);
    c.mc.scenario = s.get<std::string>("scenario", c.mc.scenario);
    c.mc.workers = s.get<int>("workers", c.mc.workers);
    s.finish();
    parse_scenario(c.mc.scenario);
    if (c.mc.replications < 1) throw_config("mc.replications", "must be at least 1");
    if (c.mc.workers < 1) throw_config("mc.workers", "must be at least 1");
  }

  if (root.has("output")) {
    Section s = root.sub("output");
    c.output_dir = s.get<std::string>("dir", c.output_dir);
    s.finish();
  }
  root.finish();

  // Cross-field checks.
  const int d1 = c.model.family == "scalar" ? 1 : c.model.dim;
  const std::size_t m2 = c.model.family == "scalar" ? c.model.free.size() : 2 * static_cast<std::size_t>(d1);
  if (c.model.theta1_box.dim() != static_cast<std::size_t>(d1)) {
    throw_config("model.theta1_box", "expected " + std::to_string(d1) + " intervals");
  }
  if (c.model.theta2_box.dim() != m2) {
    throw_config("model.theta2_box", "expected " + std::to_string(m2) + " intervals");
  }
  check_in_box(c.theta1_true, c.model.theta1_box, "truth.theta1");
  check_in_box(c.theta2_true, c.model.theta2_box, "truth.theta2");
  check_size(c.simulation.x0, static_cast<std::size_t>(d1), "simulation.x0");
  check_size(c.simulation.y0, static_cast<std::size_t>(d1), "simulation.y0");
  check_size(c.filter.m0, static_cast<std::size_t>(d1), "filter.m0");
  if (c.filter.burn_in >= c.scheme.n) throw_config("filter.burn_in", "must be smaller than scheme.n");
  if (c.estimation.theta1_source == "fixed") {
    check_in_box(c.estimation.theta1_fixed, c.model.theta1_box, "estimation.theta1_fixed");
  }
  return c;
}

RunConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw_config("", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(j);
}

RunConfig load_config(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw_config("--config", "cannot open '" + file + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

json to_json(const RunConfig& c) {
  json model = {{"family", c.model.family},
                {"theta1_box", box_json(c.model.theta1_box)},
                {"theta2_box", box_json(c.model.theta2_box)}};
  if (c.model.family == "scalar") {
    model["free"] = c.model.free;
    model["fixed"] = c.model.fixed;
  } else {
    model["dim"] = c.model.dim;
    model["c"] = c.model.c_diag;
  }
  return {
      {"model", model},
      {"truth", {{"theta1", c.theta1_true}, {"theta2", c.theta2_true}}},
      {"scheme", {{"n", c.scheme.n}, {"h", c.scheme.h}}},
      {"simulation",
       {{"seed", c.simulation.seed},
        {"init", c.simulation.init},
        {"x0", c.simulation.x0},
        {"y0", c.simulation.y0},
        {"method", c.simulation.method},
        {"store_x", c.simulation.store_x}}},
      {"filter", {{"m0", c.filter.m0}, {"burn_in", c.filter.burn_in}, {"gamma0", c.filter.gamma0}}},
      {"estimation",
       {{"theta1_source", c.estimation.theta1_source},
        {"theta1_fixed", c.estimation.theta1_fixed},
        {"xtol", c.estimation.optim.xtol},
        {"max_iter", c.estimation.optim.max_iter},
        {"grid_points", c.estimation.optim.grid_points},
        {"initial_step", c.estimation.optim.initial_step}}},
      {"mc",
       {{"replications", c.mc.replications},
        {"base_seed", c.mc.base_seed},
        {"scenario", c.mc.scenario},
        {"workers", c.mc.workers}}},
      {"output", {{"dir", c.output_dir}}},
  };
}

ModelSpec build_model(const RunConfig& c) {
  if (c.model.family == "scalar") {
    ScalarFamilyOptions o;
    o.free = c.model.free;
    const auto fixed = [&](const char* k, double fallback) {
      const auto it = c.model.fixed.find(k);
      return it == c.model.fixed.end() ? fallback : it->second;
    };
    o.a = fixed("a", 1.0);
    o.b = fixed("b", 1.0);
    o.c = fixed("c", 1.0);
    o.theta1_box = c.model.theta1_box;
    o.theta2_box = c.model.theta2_box;
    return scalar_family(o);
  }
  return diagonal_family(c.model.dim, to_vec(c.model.c_diag), c.model.theta1_box, c.model.theta2_box);
}

ThetaPoint truth_point(const RunConfig& c) { return {to_vec(c.theta1_true), to_vec(c.theta2_true)}; }

SimulationOptions simulation_options(const RunConfig& c) {
  SimulationOptions o;
  o.init = c.simulation.init == "stationary_x" ? InitKind::stationary_x : InitKind::fixed;
  o.x0 = to_vec(c.simulation.x0);
  o.y0 = to_vec(c.simulation.y0);
  o.store_x = c.simulation.store_x;
  o.method = c.simulation.method == "euler" ? StepMethod::euler : StepMethod::exact;
  return o;
}

EstimateOptions estimate_options(const RunConfig& c) {
  EstimateOptions o;
  o.theta1_source = c.estimation.theta1_source == "fixed" ? Theta1Source::fixed : Theta1Source::estimated;
  o.theta1_fixed = to_vec(c.estimation.theta1_fixed);
  o.h1_optim = c.estimation.optim;
  o.h2.optim = c.estimation.optim;
  o.h2.m0 = to_vec(c.filter.m0);
  o.h2.burn_in = c.filter.burn_in;
  return o;
}

McConfig mc_config(const RunConfig& c) {
  McConfig m;
  m.spec = build_model(c);
  m.truth = truth_point(c);
  m.scheme = c.scheme;
  m.replications = c.mc.replications;
  m.base_seed = c.mc.base_seed;
  m.workers = c.mc.workers;
  m.optim = c.estimation.optim;
  m.simulation = simulation_options(c);
  m.apply_scenario(parse_scenario(c.mc.scenario));
  if (m.burn_in >= m.scheme.n) throw_config("mc.scenario", "scenario burn-in must be smaller than scheme.n");
  return m;
}

void apply_full_scale(RunConfig& c) {
  c.scheme.n = 1000000;
  c.scheme.h = 1e-4;
  c.mc.replications = 10000;
}

}  // namespace hou
