#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>

#include "hou/simd/kernels.hpp"

namespace hou::simd {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(HOU_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa initial_isa() noexcept {
  if (const char* env = std::getenv("HOU_ISA")) {
    const std::string_view v(env);
    if (v == "scalar") return Isa::scalar;
    if (v == "avx2" && isa_available(Isa::avx2)) return Isa::avx2;
  }
  return best_available_isa();
}

std::atomic<Isa>& current() noexcept {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

const char* to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2: return cpu_has_avx2();
  }
  return false;
}

Isa best_available_isa() noexcept { return cpu_has_avx2() ? Isa::avx2 : Isa::scalar; }

Isa active_isa() noexcept { return current().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
  if (!isa_available(isa)) {
    throw std::invalid_argument(std::string("instruction set not available: ") + to_string(isa));
  }
  current().store(isa, std::memory_order_relaxed);
}

double dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("dot: length mismatch");
#if defined(HOU_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::dot(x.data(), y.data(), x.size());
#endif
  return scalar::dot(x.data(), y.data(), x.size());
}

double sum_squares(std::span<const double> x) { return dot(x, x); }

void filter_objective(std::span<const double> dy, std::size_t burn_in,
                      std::span<const FilterLane> lanes, std::span<double> out) {
  if (out.size() < lanes.size()) throw std::invalid_argument("filter_objective: output too short");
#if defined(HOU_HAVE_AVX2)
  if (active_isa() == Isa::avx2) {
    avx2::filter_objective(dy.data(), dy.size(), burn_in, lanes.data(), lanes.size(), out.data());
    return;
  }
#endif
  scalar::filter_objective(dy.data(), dy.size(), burn_in, lanes.data(), lanes.size(), out.data());
}

}  // namespace hou::simd
