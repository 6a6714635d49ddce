#pragma once

// Data-parallel inner kernels shared by field synthesis and the ring-Green
// convolution. All exponents are half-integers k/2 with t > 0, so both paths
// are sqrt/multiply arithmetic. The AVX2 variants are bit-compatible with the
// scalar reference up to reassociation of the lane sums; equivalence is
// asserted in tests/test_simd_kernels.cpp.

#include <cstddef>

namespace bubblelab::simd {

enum class Isa { scalar, avx2 };

// Resolved once per process: BUBBLELAB_SIMD=scalar|avx2 overrides, otherwise
// CPU detection. Requesting avx2 on hardware without it falls back to scalar.
Isa active_isa();
const char* isa_name(Isa isa);

// out[i] += coef * (1 + scale * x[i])^(-k/2); requires 1 + scale*x[i] > 0.
void pow_ratio_accumulate(const double* x, double* out, std::size_t n, double coef,
                          double scale, int k);

// sum_i w[i] * (A - B * c[i])^(-k/2); requires A - B*c[i] > 0.
double kernel_moment_sum(const double* c, const double* w, std::size_t n, double A,
                         double B, int k);

namespace scalar {
void pow_ratio_accumulate(const double* x, double* out, std::size_t n, double coef,
                          double scale, int k);
double kernel_moment_sum(const double* c, const double* w, std::size_t n, double A,
                         double B, int k);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define BUBBLELAB_X86 1
namespace avx2 {
void pow_ratio_accumulate(const double* x, double* out, std::size_t n, double coef,
                          double scale, int k);
double kernel_moment_sum(const double* c, const double* w, std::size_t n, double A,
                         double B, int k);
}  // namespace avx2
#else
#define BUBBLELAB_X86 0
#endif

}  // namespace bubblelab::simd
