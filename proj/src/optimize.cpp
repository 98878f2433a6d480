#include "hou/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hou/errors.hpp"

namespace hou {

namespace {

constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;

bool lex_less(const VectorXd& a, const VectorXd& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

/// Minimizes cost = -value. Drives itself through pending()/tell() so the caller
/// controls when and how objective values are produced.
class NelderMead {
 public:
  NelderMead(const Box& box, const VectorXd& x0, const OptimOptions& opts)
      : box_(box), opts_(opts), dim_(x0.size()) {
    const VectorXd start = box_.clamp(x0);
    pending_.push_back(start);
    for (Eigen::Index i = 0; i < dim_; ++i) {
      const auto axis = static_cast<std::size_t>(i);
      const double width = box_.hi[axis] - box_.lo[axis];
      double step = opts_.initial_step * width;
      if (start[i] + step > box_.hi[axis]) step = -step;
      VectorXd v = start;
      v[i] += step;
      pending_.push_back(box_.clamp(v));
    }
    phase_ = Phase::init;
  }

  bool done() const { return done_; }
  bool converged() const { return converged_; }
  int iterations() const { return iter_; }
  const std::vector<VectorXd>& pending() const { return pending_; }
  const VectorXd& best_x() const { return verts_[order_[0]]; }
  double best_cost() const { return cost_[order_[0]]; }

  void tell(std::span<const double> values) {
    std::vector<double> c(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      c[i] = std::isfinite(values[i]) ? -values[i] : std::numeric_limits<double>::infinity();
    }
    switch (phase_) {
      case Phase::init:
        verts_ = pending_;
        cost_ = c;
        order_.resize(verts_.size());
        next_iteration();
        break;
      case Phase::reflect: on_reflect(c[0]); break;
      case Phase::expand: on_expand(c[0]); break;
      case Phase::contract_out: on_contract_out(c[0]); break;
      case Phase::contract_in: on_contract_in(c[0]); break;
      case Phase::shrink: {
        std::size_t k = 0;
        for (std::size_t i = 0; i < verts_.size(); ++i) {
          if (i == order_[0]) continue;
          verts_[i] = pending_[k];
          cost_[i] = c[k];
          ++k;
        }
        finish_iteration();
        break;
      }
    }
  }

 private:
  enum class Phase { init, reflect, expand, contract_out, contract_in, shrink };

  void sort_vertices() {
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
      if (cost_[a] != cost_[b]) return cost_[a] < cost_[b];
      return lex_less(verts_[a], verts_[b]);
    });
  }

  double diameter() const {
    double d = 0.0;
    const VectorXd& best = verts_[order_[0]];
    for (const auto& v : verts_) d = std::max(d, (v - best).cwiseAbs().maxCoeff());
    return d;
  }

  void finish_iteration() {
    ++iter_;
    next_iteration();
  }

  void next_iteration() {
    sort_vertices();
    pending_.clear();
    if (dim_ == 0 || diameter() <= opts_.xtol) {
      converged_ = true;
      done_ = true;
      return;
    }
    if (iter_ >= opts_.max_iter) {
      done_ = true;
      return;
    }
    centroid_ = VectorXd::Zero(dim_);
    for (std::size_t k = 0; k + 1 < order_.size(); ++k) centroid_ += verts_[order_[k]];
    centroid_ /= static_cast<double>(order_.size() - 1);
    const VectorXd& worst = verts_[order_.back()];
    reflected_ = box_.clamp(centroid_ + kReflect * (centroid_ - worst));
    pending_.push_back(reflected_);
    phase_ = Phase::reflect;
  }

  void replace_worst(const VectorXd& x, double c) {
    verts_[order_.back()] = x;
    cost_[order_.back()] = c;
    finish_iteration();
  }

  void on_reflect(double fr) {
    reflected_cost_ = fr;
    const double fbest = cost_[order_[0]];
    const double fsecond = cost_[order_[order_.size() - 2]];
    const double fworst = cost_[order_.back()];
    pending_.clear();
    if (fr < fbest) {
      pending_.push_back(box_.clamp(centroid_ + kExpand * (reflected_ - centroid_)));
      phase_ = Phase::expand;
    } else if (fr < fsecond) {
      replace_worst(reflected_, fr);
    } else if (fr < fworst) {
      pending_.push_back(box_.clamp(centroid_ + kContract * (reflected_ - centroid_)));
      phase_ = Phase::contract_out;
    } else {
      pending_.push_back(box_.clamp(centroid_ + kContract * (verts_[order_.back()] - centroid_)));
      phase_ = Phase::contract_in;
    }
  }

  void on_expand(double fe) {
    const VectorXd xe = pending_[0];
    if (fe < reflected_cost_) {
      replace_worst(xe, fe);
    } else {
      replace_worst(reflected_, reflected_cost_);
    }
  }

  void on_contract_out(double fc) {
    if (fc <= reflected_cost_) {
      replace_worst(pending_[0], fc);
    } else {
      start_shrink();
    }
  }

  void on_contract_in(double fc) {
    if (fc < cost_[order_.back()]) {
      replace_worst(pending_[0], fc);
    } else {
      start_shrink();
    }
  }

  void start_shrink() {
    pending_.clear();
    const VectorXd& best = verts_[order_[0]];
    for (std::size_t i = 0; i < verts_.size(); ++i) {
      if (i == order_[0]) continue;
      pending_.push_back(box_.clamp(best + kShrink * (verts_[i] - best)));
    }
    phase_ = Phase::shrink;
  }

  const Box& box_;
  OptimOptions opts_;
  Eigen::Index dim_;
  Phase phase_ = Phase::init;
  std::vector<VectorXd> verts_;
  std::vector<double> cost_;
  std::vector<std::size_t> order_;
  std::vector<VectorXd> pending_;
  VectorXd centroid_;
  VectorXd reflected_;
  double reflected_cost_ = 0.0;
  int iter_ = 0;
  bool done_ = false;
  bool converged_ = false;
};

}  // namespace

BatchObjective batched(Objective f) {
  return [f = std::move(f)](std::span<const VectorXd> pts, std::span<double> out) {
    for (std::size_t i = 0; i < pts.size(); ++i) out[i] = f(pts[i]);
  };
}

OptimResult maximize_box(const BatchObjective& f, const Box& box, const std::vector<VectorXd>& starts,
                         const OptimOptions& opts) {
  if (starts.empty()) throw_domain("maximize_box: no starting points");
  std::vector<NelderMead> runs;
  runs.reserve(starts.size());
  for (const auto& s : starts) {
    if (static_cast<std::size_t>(s.size()) != box.dim()) throw_domain("maximize_box: start dimension");
    runs.emplace_back(box, s, opts);
  }

  OptimResult res;
  res.starts = static_cast<int>(starts.size());
  std::vector<VectorXd> batch;
  std::vector<double> values;
  while (true) {
    batch.clear();
    for (const auto& r : runs) {
      if (!r.done()) batch.insert(batch.end(), r.pending().begin(), r.pending().end());
    }
    if (batch.empty()) break;
    values.assign(batch.size(), 0.0);
    f(batch, values);
    res.evaluations += static_cast<int>(batch.size());
    std::size_t offset = 0;
    for (auto& r : runs) {
      if (r.done()) continue;
      const std::size_t k = r.pending().size();
      r.tell(std::span<const double>(values).subspan(offset, k));
      offset += k;
    }
  }

  const NelderMead* best = nullptr;
  for (const auto& r : runs) {
    if (r.converged()) ++res.starts_converged;
    if (best == nullptr || r.best_cost() < best->best_cost() ||
        (r.best_cost() == best->best_cost() && lex_less(r.best_x(), best->best_x()))) {
      best = &r;
    }
  }
  res.x = best->best_x();
  res.value = -best->best_cost();
  res.converged = best->converged() && std::isfinite(res.value);
  res.iterations = best->iterations();
  return res;
}

OptimResult maximize_box(const BatchObjective& f, const Box& box, const OptimOptions& opts) {
  return maximize_box(f, box, box.grid(opts.grid_points, true), opts);
}

OptimResult maximize_box(const Objective& f, const Box& box, const OptimOptions& opts) {
  return maximize_box(batched(f), box, opts);
}

}  // namespace hou
