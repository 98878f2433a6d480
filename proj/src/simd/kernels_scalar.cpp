#include <algorithm>

#include "hou/simd/kernels.hpp"

namespace hou::simd::scalar {

double dot(const double* x, const double* y, std::size_t n) noexcept {
  double acc[8] = {0, 0, 0, 0, 0, 0, 0, 0};
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    for (int k = 0; k < 8; ++k) acc[k] = acc[k] + x[i + k] * y[i + k];
  }
  double v[4];
  for (int k = 0; k < 4; ++k) v[k] = acc[k] + acc[k + 4];
  double s = (v[0] + v[1]) + (v[2] + v[3]);
  for (; i < n; ++i) s = s + x[i] * y[i];
  return s;
}

namespace {

constexpr std::size_t kBlock = 8;

void run_block(const double* dy, std::size_t n, std::size_t burn_in, const FilterLane* lanes,
               std::size_t count, double* out) noexcept {
  double phi[kBlock], gain[kBlock], quad[kBlock], cross[kBlock], m[kBlock], acc[kBlock];
  for (std::size_t l = 0; l < count; ++l) {
    phi[l] = lanes[l].phi;
    gain[l] = lanes[l].gain;
    quad[l] = lanes[l].quad;
    cross[l] = lanes[l].cross;
    m[l] = lanes[l].m0;
    acc[l] = 0.0;
  }
  const std::size_t skip = std::min(burn_in, n);
  for (std::size_t j = 0; j < skip; ++j) {
    const double d = dy[j];
    for (std::size_t l = 0; l < count; ++l) m[l] = phi[l] * m[l] + gain[l] * d;
  }
  for (std::size_t j = skip; j < n; ++j) {
    const double d = dy[j];
    for (std::size_t l = 0; l < count; ++l) {
      const double t1 = (quad[l] * m[l]) * m[l];
      const double t2 = (cross[l] * m[l]) * d;
      acc[l] = acc[l] + (t2 - t1);
      m[l] = phi[l] * m[l] + gain[l] * d;
    }
  }
  for (std::size_t l = 0; l < count; ++l) out[l] = 0.5 * acc[l];
}

}  // namespace

void filter_objective(const double* dy, std::size_t n, std::size_t burn_in, const FilterLane* lanes,
                      std::size_t count, double* out) noexcept {
  for (std::size_t first = 0; first < count; first += kBlock) {
    const std::size_t len = std::min(kBlock, count - first);
    run_block(dy, n, burn_in, lanes + first, len, out + first);
  }
}

}  // namespace hou::simd::scalar
