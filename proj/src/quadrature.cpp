#include "hou/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "hou/errors.hpp"

namespace hou {

namespace {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes.
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  VectorXd value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const VecIntegrand& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  VectorXd fc = f(mid);
  VectorXd kron = kWgk[7] * fc;
  VectorXd gauss = kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[static_cast<std::size_t>(j)];
    const VectorXd s = f(mid - dx) + f(mid + dx);
    kron += kWgk[static_cast<std::size_t>(j)] * s;
    if (j % 2 == 1) gauss += kWg[static_cast<std::size_t>(j / 2)] * s;
  }
  Panel p{a, b, half * kron, 0.0};
  p.error = (half * (kron - gauss)).cwiseAbs().maxCoeff();
  if (!p.value.allFinite()) throw_numeric("integrand returned non-finite values");
  return p;
}

}  // namespace

QuadResult integrate(const VecIntegrand& f, double a, double b, const QuadOptions& opts) {
  if (!(b > a)) throw_domain("integrate: empty interval");
  std::priority_queue<Panel> heap;
  QuadResult res;
  const int init = std::max(1, opts.initial_intervals);
  for (int k = 0; k < init; ++k) {
    const double lo = a + (b - a) * k / init;
    const double hi = (k + 1 == init) ? b : a + (b - a) * (k + 1) / init;
    heap.push(gk15(f, lo, hi));
  }
  res.evaluations = 15 * init;

  auto totals = [&heap](VectorXd& value, double& error) {
    auto copy = heap;
    value.setZero();
    error = 0.0;
    while (!copy.empty()) {
      value += copy.top().value;
      error += copy.top().error;
      copy.pop();
    }
  };

  VectorXd value = VectorXd::Zero(heap.top().value.size());
  double error = 0.0;
  totals(value, error);
  while (error > std::max(opts.abs_tol, opts.rel_tol * value.cwiseAbs().maxCoeff())) {
    if (static_cast<int>(heap.size()) >= opts.max_intervals) {
      throw_nonconvergence("integrate: error estimate " + std::to_string(error) + " after " +
                           std::to_string(heap.size()) + " intervals on [" + std::to_string(a) +
                           ", " + std::to_string(b) + "]");
    }
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Panel left = gk15(f, worst.a, mid);
    Panel right = gk15(f, mid, worst.b);
    res.evaluations += 30;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(std::move(left));
    heap.push(std::move(right));
    // Running sums drift; refresh them now and then.
    if (heap.size() % 64 == 0) totals(value, error);
  }
  totals(value, error);
  res.value = value;
  res.error = error;
  res.intervals = static_cast<int>(heap.size());
  return res;
}

double tail_horizon(const VecIntegrand& f, double rate, double tol, double start) {
  if (!(rate > 0.0)) throw_domain("tail_horizon: decay rate must be positive");
  double T = std::max(start, 1.0 / rate);
  const double cap = 2000.0 / rate;
  while (T < cap) {
    double peak = 0.0;
    for (double s : {1.0, 1.05, 1.1, 1.2}) peak = std::max(peak, f(s * T).cwiseAbs().maxCoeff());
    // Generous factor for polynomial prefactors in the tail.
    if (10.0 * (1.0 + T) * peak / rate < tol) return T;
    T *= 1.25;
  }
  throw_nonconvergence("tail_horizon: integrand does not decay at the stated rate");
}

}  // namespace hou
