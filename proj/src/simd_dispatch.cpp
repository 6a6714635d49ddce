#include "bubblelab/simd/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>

namespace bubblelab::simd {

namespace {

Isa detect() {
  const char* env = std::getenv("BUBBLELAB_SIMD");
  bool want_avx2 = true;
  if (env != nullptr) {
    if (std::strcmp(env, "scalar") == 0) return Isa::scalar;
    want_avx2 = std::strcmp(env, "avx2") == 0;
  }
#if BUBBLELAB_X86
  if (want_avx2 && __builtin_cpu_supports("avx2")) return Isa::avx2;
#endif
  (void)want_avx2;
  return Isa::scalar;
}

}  // namespace

Isa active_isa() {
  static const Isa isa = detect();
  return isa;
}

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

namespace scalar {

// t^(k/2) via repeated multiply; sqrt only for odd k
static inline double half_pow(double t, int k) {
  double p = 1.0;
  double base = t;
  for (int e = k / 2; e > 0; e >>= 1) {
    if (e & 1) p *= base;
    base *= base;
  }
  if (k & 1) p *= std::sqrt(t);
  return p;
}

void pow_ratio_accumulate(const double* x, double* out, std::size_t n, double coef,
                          double scale, int k) {
  for (std::size_t i = 0; i < n; ++i) out[i] += coef / half_pow(1.0 + scale * x[i], k);
}

double kernel_moment_sum(const double* c, const double* w, std::size_t n, double A,
                         double B, int k) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += w[i] / half_pow(A - B * c[i], k);
  return acc;
}

}  // namespace scalar

void pow_ratio_accumulate(const double* x, double* out, std::size_t n, double coef,
                          double scale, int k) {
#if BUBBLELAB_X86
  if (active_isa() == Isa::avx2) {
    avx2::pow_ratio_accumulate(x, out, n, coef, scale, k);
    return;
  }
#endif
  scalar::pow_ratio_accumulate(x, out, n, coef, scale, k);
}

double kernel_moment_sum(const double* c, const double* w, std::size_t n, double A,
                         double B, int k) {
#if BUBBLELAB_X86
  if (active_isa() == Isa::avx2) return avx2::kernel_moment_sum(c, w, n, A, B, k);
#endif
  return scalar::kernel_moment_sum(c, w, n, A, B, k);
}

}  // namespace bubblelab::simd
