#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "bubblelab/simd/kernels.hpp"

using namespace bubblelab;

TEST_CASE("scalar kernel matches std::pow") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> X(0.0, 200.0), S(0.01, 5.0), C(-3.0, 3.0);
  for (int k = 1; k <= 12; ++k) {
    std::vector<double> x(37), out(37, 0.0);
    for (auto& v : x) v = X(rng);
    const double coef = C(rng), scale = S(rng);
    simd::scalar::pow_ratio_accumulate(x.data(), out.data(), x.size(), coef, scale, k);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double ref = coef * std::pow(1.0 + scale * x[i], -0.5 * k);
      CHECK(out[i] == doctest::Approx(ref).epsilon(1e-13));
    }
  }
}

#if BUBBLELAB_X86
TEST_CASE("avx2 variants agree with the scalar reference") {
  if (!__builtin_cpu_supports("avx2")) return;  // fallback covered elsewhere
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> X(0.0, 500.0), S(0.01, 2.0), C(-2.0, 2.0), W(-1.0, 1.0);
  for (int k = 1; k <= 12; ++k) {
    for (std::size_t n : {1u, 3u, 4u, 17u, 1024u}) {
      std::vector<double> x(n), a(n, 0.0), b(n, 0.0);
      for (auto& v : x) v = X(rng);
      const double coef = C(rng), scale = S(rng);
      simd::scalar::pow_ratio_accumulate(x.data(), a.data(), n, coef, scale, k);
      simd::avx2::pow_ratio_accumulate(x.data(), b.data(), n, coef, scale, k);
      for (std::size_t i = 0; i < n; ++i)
        CHECK(b[i] == doctest::Approx(a[i]).epsilon(1e-13));

      std::vector<double> c(n), w(n);
      for (auto& v : c) v = W(rng);
      for (auto& v : w) v = W(rng);
      const double A = 3.0 + X(rng) * 0.01, B = 1.0;
      const double s0 = simd::scalar::kernel_moment_sum(c.data(), w.data(), n, A, B, k);
      const double s1 = simd::avx2::kernel_moment_sum(c.data(), w.data(), n, A, B, k);
      CHECK(s1 == doctest::Approx(s0).epsilon(1e-12));
    }
  }
}
#endif

TEST_CASE("dispatch honors the environment override") {
  // the resolved ISA is cached per process; we only check it is a valid value
  const auto isa = simd::active_isa();
  CHECK((isa == simd::Isa::scalar || isa == simd::Isa::avx2));
  CHECK(simd::isa_name(isa) != nullptr);
  std::vector<double> x{1.0, 2.0, 3.0, 4.0, 5.0};
  std::vector<double> out(5, 0.0), ref(5, 0.0);
  simd::pow_ratio_accumulate(x.data(), out.data(), x.size(), 2.0, 0.5, 5);
  simd::scalar::pow_ratio_accumulate(x.data(), ref.data(), x.size(), 2.0, 0.5, 5);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(out[i] == doctest::Approx(ref[i]).epsilon(1e-13));
}
