#pragma once

// Data-parallel inner loops with a scalar reference and ISA-specific variants.
// The variant is picked once at startup from CPU features (override with the
// HOU_ISA environment variable or set_isa()). All variants produce bitwise
// identical results: lane arithmetic is performed in the same order, and the
// kernel sources are compiled without floating-point contraction.

#include <cstddef>
#include <span>

namespace hou::simd {

enum class Isa { scalar, avx2 };

const char* to_string(Isa isa) noexcept;
bool isa_available(Isa isa) noexcept;
Isa best_available_isa() noexcept;
Isa active_isa() noexcept;
/// Throws std::invalid_argument if the ISA was not compiled in or is not supported by the CPU.
void set_isa(Isa isa);

/// Coefficients of one scalar filter-objective lane. With m_0 = m0:
///   value = 1/2 sum_{j > burn_in} ( cross * m_{j-1} * dy_j - quad * m_{j-1}^2 )
///   m_j   = phi * m_{j-1} + gain * dy_j
struct FilterLane {
  double phi = 0.0;
  double gain = 0.0;
  double quad = 0.0;
  double cross = 0.0;
  double m0 = 0.0;
};

/// Sum of x_i y_i with eight strided partial sums.
double dot(std::span<const double> x, std::span<const double> y);
double sum_squares(std::span<const double> x);

/// Evaluates `lanes.size()` independent filter objectives over the same increments.
void filter_objective(std::span<const double> dy, std::size_t burn_in,
                      std::span<const FilterLane> lanes, std::span<double> out);

namespace scalar {
double dot(const double* x, const double* y, std::size_t n) noexcept;
void filter_objective(const double* dy, std::size_t n, std::size_t burn_in, const FilterLane* lanes,
                      std::size_t count, double* out) noexcept;
}  // namespace scalar

#if defined(HOU_HAVE_AVX2)
namespace avx2 {
double dot(const double* x, const double* y, std::size_t n) noexcept;
void filter_objective(const double* dy, std::size_t n, std::size_t burn_in, const FilterLane* lanes,
                      std::size_t count, double* out) noexcept;
}  // namespace avx2
#endif

}  // namespace hou::simd
