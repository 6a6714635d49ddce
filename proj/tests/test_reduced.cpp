#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "bubblelab/reduced.hpp"

using namespace bubblelab;

namespace {

struct Setup {
  DimensionParams dims;
  PotentialSpec pot;
  UniversalConstants uc;
  DerivedConstants dc;
};

Setup make_setup(int N, double beta, int m = 1, bool wrapped = false) {
  Setup s{DimensionParams::make(N), {}, {}, {}};
  s.pot.beta = beta;
  s.pot.period_L = 10.0;
  s.pot.a = 1.0;
  QuadratureSpec qs;
  s.uc = compute_universal(s.dims, s.pot, qs);
  s.dc = derive_constants(s.uc, s.dims, s.pot, m, wrapped);
  return s;
}

}  // namespace

TEST_CASE("two-bubble balance: closed form, plug-back, monotonicity") {
  auto s = make_setup(7, 4.0);
  LatticeState st;
  st.m = 1;
  st.L = 8.0;
  const double mu = solve_balanced_height(st, s.dc, s.dims, 4.0);
  const double expect = std::pow(s.dc.C4.value / std::pow(st.L, 5.0), 1.0 / (7.0 - 4.0 - 4.0));
  CHECK(mu == doctest::Approx(expect).epsilon(1e-12));
  st.mu = mu;
  const auto res = height_balance_residual(st, s.dc, s.dims, 4.0);
  for (double r : res) CHECK(std::abs(r) < 1e-12 * std::pow(mu, -6.0) * 1e6);
  // exponent of L: (N-2)/(beta-N+4) = 5
  LatticeState st2 = st;
  st2.L = 16.0;
  const double mu2 = solve_balanced_height(st2, s.dc, s.dims, 4.0);
  CHECK(std::log2(mu2 / mu) == doctest::Approx(5.0).epsilon(1e-10));
  CHECK(mu2 > mu);  // increasing L increases mu
}

TEST_CASE("height balance rejects coincident centers") {
  auto s = make_setup(7, 4.0);
  LatticeState st;
  st.m = 1;
  st.L = 8.0;
  st.mu = 16.0;
  st.shifts_y1 = {0.0, -8.0};  // second bubble dragged onto the first
  CHECK_THROWS(height_balance_residual(st, s.dc, s.dims, 4.0));
}

TEST_CASE("scaling fit: slopes for the three acceptance configurations") {
  struct Row {
    int N;
    double beta, expect;
  };
  for (const Row row : {Row{7, 4.0, 5.0}, Row{7, 4.5, 10.0 / 3.0}, Row{5, 2.0, 3.0}}) {
    auto s = make_setup(row.N, row.beta);
    const std::vector<double> Ls{8.0, 16.0, 32.0, 64.0};
    const auto fit = scaling_fit(s.dims, row.beta, s.dc, Ls);
    CHECK(std::abs(fit.slope - row.expect) < 0.02 * row.expect);
    CHECK(fit.prefactor_residual < 1e-8);
    CHECK(fit.mu_values.size() == 4);
  }
  auto s = make_setup(7, 4.0);
  CHECK_THROWS(scaling_fit(s.dims, 4.0, s.dc, {8.0, 16.0, 32.0}));
}

TEST_CASE("amplitude fixed point: symmetric pair closed form and random starts") {
  const auto dims = DimensionParams::make(7);
  const double beta = 4.0, B = 2.3;
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> U(0.1, 10.0);
  for (int t = 0; t < 10; ++t) {
    std::vector<double> start{U(rng), U(rng)};
    auto sol = solve_lattice_amplitudes(1, dims, beta, B, 1e-12, false, &start);
    CHECK(sol.converged);
    // a^beta = B a  =>  a = B^{1/(beta-1)}
    const double exact = std::pow(B, 1.0 / (beta - 1.0));
    CHECK(sol.a[0] == doctest::Approx(exact).epsilon(1e-9));
    CHECK(sol.a[1] == doctest::Approx(exact).epsilon(1e-9));
  }
}

TEST_CASE("amplitude solution: reflection symmetry and m-uniform bracketing") {
  const auto dims = DimensionParams::make(7);
  const double beta = 4.0, B = 1.7;
  double c0_prev = 0.0, c1_prev = 0.0;
  for (int m : {4, 8, 16, 32, 64}) {
    auto sol = solve_lattice_amplitudes(m, dims, beta, B, 1e-12);
    CHECK(sol.converged);
    CHECK(sol.c0 > 0.0);
    for (int j = 0; j <= m; ++j) CHECK(sol.a[j] == doctest::Approx(sol.a[m - j]).epsilon(1e-10));
    if (c0_prev > 0.0) {
      CHECK(std::abs(sol.c0 - c0_prev) < 0.05 * c0_prev);
      CHECK(std::abs(sol.c1 - c1_prev) < 0.05 * c1_prev);
    }
    c0_prev = sol.c0;
    c1_prev = sol.c1;
  }
}

TEST_CASE("shifts: interior cancellation, end-bubble scaling on balanced pairs") {
  auto s = make_setup(7, 4.0);
  for (double L : {8.0, 10.0, 12.0}) {
    LatticeState st;
    st.m = 2;
    st.L = L;
    st.mu = solve_balanced_height(st, s.dc, s.dims, 4.0);
    auto sh = solve_shifts(st, s.dc, s.dims, 4.0);
    CHECK(std::abs(sh.shifts[1]) < 1e-14);  // middle bubble pinned by symmetry
    CHECK(sh.shifts[0] == doctest::Approx(-sh.shifts[2]).epsilon(1e-12));
    CHECK(sh.shifts[0] != 0.0);
  }
  double prev = INFINITY;
  for (double L : {8.0, 16.0, 32.0}) {
    LatticeState st;
    st.m = 1;
    st.L = L;
    st.mu = solve_balanced_height(st, s.dc, s.dims, 4.0);
    auto sh = solve_shifts(st, s.dc, s.dims, 4.0);
    CHECK(sh.max_shift_mu2 < 1.0);
    CHECK(sh.max_shift_mu2 < prev);  // decays like 1/L on balanced pairs
    prev = sh.max_shift_mu2;
  }
}

TEST_CASE("feasibility window over a 20-point beta grid") {
  for (int N : {5, 7}) {
    const auto dims = DimensionParams::make(N);
    for (int k = 0; k < 20; ++k) {
      const double beta = (N - 4.0) - 1.0 + 3.0 * k / 19.0;  // below, inside and above
      const auto r = feasibility_check(dims, beta);
      const bool inside = beta > N - 4.0 && beta < N - 2.0;
      if (inside) {
        CHECK(r.verdict == FeasibilityVerdict::accept);
      } else if (beta <= N - 4.0) {
        CHECK(r.verdict == FeasibilityVerdict::reject_low);
        CHECK(r.diagnostic.find("beta+3") != std::string::npos);
      } else {
        CHECK(r.verdict == FeasibilityVerdict::reject_high);
      }
    }
    CHECK(feasibility_check(dims, static_cast<double>(N) - 2.0).verdict !=
          FeasibilityVerdict::accept);  // boundary excluded
  }
  CHECK(feasibility_check(DimensionParams::make(5), 2.0).verdict == FeasibilityVerdict::accept);
  CHECK(feasibility_check(DimensionParams::make(7), 3.0).verdict == FeasibilityVerdict::reject_low);
  CHECK(feasibility_check(DimensionParams::make(5), 3.0).verdict ==
        FeasibilityVerdict::reject_high);
}

TEST_CASE("nonexistence probe: q0 = 0, dominance at mu = 32, slope -2") {
  auto s = make_setup(7, 4.0);
  PotentialSpec pot = s.pot;
  pot.period_L = 16.0;
  LatticeState st;
  st.m = 1;
  st.L = 16.0;
  st.mu = 32.0;
  {
    const auto rep = nonexistence_probe(0.0, st, s.uc, s.dims, pot);
    CHECK(!rep.contradiction);
    CHECK(rep.leading == 0.0);
  }
  {
    const auto rep = nonexistence_probe(1.0, st, s.uc, s.dims, pot, 4.0);
    CHECK(rep.leading == doctest::Approx(s.uc.J_2.value / 1024.0).epsilon(1e-12));
    CHECK(rep.contradiction);
    CHECK(rep.dominance >= 4.0);
  }
  // leading-term slope in mu by quadrature of the defining integral
  std::vector<double> vals;
  for (double mu : {16.0, 32.0, 64.0}) {
    QuadratureSpec qs;
    auto q = radial_integral(
        [&](double r) {
          const double u = s.dims.bubble_amp *
                           std::pow(mu / (1.0 + mu * mu * r * r), 0.5 * (s.dims.N - 2));
          return u * u;
        },
        s.dims, qs);
    vals.push_back(q.value);
  }
  CHECK(std::abs(std::log2(vals[1] / vals[0]) + 2.0) < 0.05);
  CHECK(std::abs(std::log2(vals[2] / vals[1]) + 2.0) < 0.05);
}
