// AVX2 variants of the inner kernels. This translation unit is compiled with
// -mavx2; execution is gated by the runtime dispatch in simd_dispatch.cpp.

#include "bubblelab/simd/kernels.hpp"

#if BUBBLELAB_X86

#include <immintrin.h>

#include <cmath>

namespace bubblelab::simd::avx2 {

namespace {

// t^(k/2) lane-wise, same multiply chain as the scalar reference
static inline __m256d half_pow4(__m256d t, int k) {
  __m256d p = _mm256_set1_pd(1.0);
  __m256d base = t;
  for (int e = k / 2; e > 0; e >>= 1) {
    if (e & 1) p = _mm256_mul_pd(p, base);
    base = _mm256_mul_pd(base, base);
  }
  if (k & 1) p = _mm256_mul_pd(p, _mm256_sqrt_pd(t));
  return p;
}

static inline double scalar_half_pow(double t, int k) {
  double p = 1.0, base = t;
  for (int e = k / 2; e > 0; e >>= 1) {
    if (e & 1) p *= base;
    base *= base;
  }
  if (k & 1) p *= std::sqrt(t);
  return p;
}

}  // namespace

void pow_ratio_accumulate(const double* x, double* out, std::size_t n, double coef,
                          double scale, int k) {
  const __m256d vcoef = _mm256_set1_pd(coef);
  const __m256d vscale = _mm256_set1_pd(scale);
  const __m256d vone = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xv = _mm256_loadu_pd(x + i);
    const __m256d t = _mm256_add_pd(vone, _mm256_mul_pd(vscale, xv));
    const __m256d q = _mm256_div_pd(vcoef, half_pow4(t, k));
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(out + i), q));
  }
  for (; i < n; ++i) out[i] += coef / scalar_half_pow(1.0 + scale * x[i], k);
}

double kernel_moment_sum(const double* c, const double* w, std::size_t n, double A,
                         double B, int k) {
  const __m256d vA = _mm256_set1_pd(A);
  const __m256d vB = _mm256_set1_pd(B);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d cv = _mm256_loadu_pd(c + i);
    const __m256d t = _mm256_sub_pd(vA, _mm256_mul_pd(vB, cv));
    const __m256d q = _mm256_div_pd(_mm256_loadu_pd(w + i), half_pow4(t, k));
    acc = _mm256_add_pd(acc, q);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double sum = (lanes[0] + lanes[2]) + (lanes[1] + lanes[3]);
  for (; i < n; ++i) sum += w[i] / scalar_half_pow(A - B * c[i], k);
  return sum;
}

}  // namespace bubblelab::simd::avx2

#endif  // BUBBLELAB_X86
