#include <immintrin.h>

#include <algorithm>

#include "hou/simd/kernels.hpp"

namespace hou::simd::avx2 {

double dot(const double* x, const double* y, std::size_t n) noexcept {
  __m256d lo = _mm256_setzero_pd();
  __m256d hi = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    lo = _mm256_add_pd(lo, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    hi = _mm256_add_pd(hi, _mm256_mul_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4)));
  }
  alignas(32) double v[4];
  _mm256_store_pd(v, _mm256_add_pd(lo, hi));
  double s = (v[0] + v[1]) + (v[2] + v[3]);
  for (; i < n; ++i) s = s + x[i] * y[i];
  return s;
}

namespace {

struct Lanes4 {
  __m256d phi, gain, quad, cross, m, acc;
};

Lanes4 load4(const FilterLane* l) noexcept {
  Lanes4 v;
  v.phi = _mm256_setr_pd(l[0].phi, l[1].phi, l[2].phi, l[3].phi);
  v.gain = _mm256_setr_pd(l[0].gain, l[1].gain, l[2].gain, l[3].gain);
  v.quad = _mm256_setr_pd(l[0].quad, l[1].quad, l[2].quad, l[3].quad);
  v.cross = _mm256_setr_pd(l[0].cross, l[1].cross, l[2].cross, l[3].cross);
  v.m = _mm256_setr_pd(l[0].m0, l[1].m0, l[2].m0, l[3].m0);
  v.acc = _mm256_setzero_pd();
  return v;
}

inline void advance(Lanes4& v, __m256d d) noexcept {
  v.m = _mm256_add_pd(_mm256_mul_pd(v.phi, v.m), _mm256_mul_pd(v.gain, d));
}

inline void accumulate(Lanes4& v, __m256d d) noexcept {
  const __m256d t1 = _mm256_mul_pd(_mm256_mul_pd(v.quad, v.m), v.m);
  const __m256d t2 = _mm256_mul_pd(_mm256_mul_pd(v.cross, v.m), d);
  v.acc = _mm256_add_pd(v.acc, _mm256_sub_pd(t2, t1));
}

void store_half(const Lanes4& v, double* out, std::size_t count) noexcept {
  alignas(32) double tmp[4];
  _mm256_store_pd(tmp, _mm256_mul_pd(_mm256_set1_pd(0.5), v.acc));
  for (std::size_t l = 0; l < count; ++l) out[l] = tmp[l];
}

// Two independent register sets hide the latency of the serial recursion.
void run8(const double* dy, std::size_t n, std::size_t skip, const FilterLane* lanes,
          double* out) noexcept {
  Lanes4 a = load4(lanes);
  Lanes4 b = load4(lanes + 4);
  for (std::size_t j = 0; j < skip; ++j) {
    const __m256d d = _mm256_broadcast_sd(dy + j);
    advance(a, d);
    advance(b, d);
  }
  for (std::size_t j = skip; j < n; ++j) {
    const __m256d d = _mm256_broadcast_sd(dy + j);
    accumulate(a, d);
    accumulate(b, d);
    advance(a, d);
    advance(b, d);
  }
  store_half(a, out, 4);
  store_half(b, out + 4, 4);
}

void run4(const double* dy, std::size_t n, std::size_t skip, const FilterLane* lanes,
          std::size_t count, double* out) noexcept {
  FilterLane padded[4];
  std::copy(lanes, lanes + count, padded);
  Lanes4 a = load4(padded);
  for (std::size_t j = 0; j < skip; ++j) advance(a, _mm256_broadcast_sd(dy + j));
  for (std::size_t j = skip; j < n; ++j) {
    const __m256d d = _mm256_broadcast_sd(dy + j);
    accumulate(a, d);
    advance(a, d);
  }
  store_half(a, out, count);
}

}  // namespace

void filter_objective(const double* dy, std::size_t n, std::size_t burn_in, const FilterLane* lanes,
                      std::size_t count, double* out) noexcept {
  const std::size_t skip = std::min(burn_in, n);
  std::size_t first = 0;
  for (; first + 8 <= count; first += 8) run8(dy, n, skip, lanes + first, out + first);
  for (; first < count; first += 4) {
    run4(dy, n, skip, lanes + first, std::min<std::size_t>(4, count - first), out + first);
  }
}

}  // namespace hou::simd::avx2
