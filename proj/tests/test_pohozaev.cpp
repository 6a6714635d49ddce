#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bubblelab/pipeline.hpp"
#include "bubblelab/pohozaev.hpp"
#include "bubblelab/profile.hpp"

using namespace bubblelab;

TEST_CASE("theta policy: branch values, regime switch, ball disjointness") {
  // N = 7, tau = 1.375: ratio (beta+4-N)/(beta+1-2 tau) = 1/2.25 < 1 -> theta = 1
  const auto d7 = DimensionParams::make(7);
  auto c7 = PohozaevConfig::make(d7, 4.0, 1.375, 16.0, 7.0);
  CHECK(c7.theta == doctest::Approx(1.0));
  CHECK(c7.delta == doctest::Approx(1.0 / 16.0));
  // N = 5: tau = 1 + vt > (N-3)/2 = 1, so theta > 1
  const auto d5 = DimensionParams::make(5);
  auto c5 = PohozaevConfig::make(d5, 2.0, 1.125, 16.0, 8.0);
  CHECK(c5.theta == doctest::Approx((2.0 + 4.0 - 5.0) / (2.0 + 1.0 - 2.25)));
  CHECK(c5.theta > 1.0);
  // switch exactly at tau = (N-3)/2
  const double tau_star = 0.5 * (7.0 - 3.0);  // = 2, outside the norm window but algebraic
  const double ratio_at_star = (4.0 + 4.0 - 7.0) / (4.0 + 1.0 - 2.0 * tau_star);
  CHECK(ratio_at_star == doctest::Approx(1.0));
  // delta >= L/4 rejected
  CHECK_THROWS(PohozaevConfig::make(d7, 4.0, 1.375, 16.0, 0.2));
}

TEST_CASE("translation identity vanishes for the exact centered bubble (Q = 0)") {
  const auto dims = DimensionParams::make(7);
  PotentialSpec pot;
  pot.beta = 4.0;
  pot.period_L = 1.0;
  pot.a = 0.0;
  Ansatz a;
  a.dims = dims;
  a.potential = pot;
  a.bubbles.push_back({{0.0, 0.0}, 12.0});
  AxisSpec ay;
  ay.lo = -3.0;
  ay.hi = 3.0;
  ay.h_base = 0.08;
  ay.clusters.push_back({0.0, 0.004, 0.3});
  AxisSpec ar = ay;
  ar.lo = 0.0;
  auto grid = AxiGrid::tensor(ay, ar);
  Field u = field_from(grid, [&](const Vec2& y) { return eval_bubble(a.bubbles[0], dims, y); });
  PohozaevConfig cfg = PohozaevConfig::make(dims, 4.0, 1.375, 12.0, 7.0);
  auto tr = translation_identity(u, a, cfg);
  // every term is parity-odd around the center
  for (const auto& t : tr.terms) CHECK(std::abs(t.value) < 1e-6);
  CHECK(std::abs(tr.rhs) < 1e-6);
  CHECK(std::abs(tr.residual) < 1e-6);

  auto di = dilation_identity(u, a, cfg);
  // -Lap U = U^{2*-1}: boundary combination balances the critical term
  CHECK(std::abs(di.residual) < 2e-2 * std::abs(di.rhs));
  CHECK(di.rhs > 0.0);
  // reports are bit-reproducible for a fixed order
  auto di2 = dilation_identity(u, a, cfg);
  CHECK(di2.lhs_total == di.lhs_total);
  CHECK(di2.rhs == di.rhs);
}

TEST_CASE("stress-identity closure for a synthesized analytic field") {
  const auto dims = DimensionParams::make(6);
  // u = exp(-|y - c|^2) (1 + 0.3 y1), axisymmetric, with analytic derivatives
  const Vec2 c{0.4, 0.0};
  auto uf = [&](const Vec2& p) {
    const double q = dist2(p, c);
    return std::exp(-q) * (1.0 + 0.3 * p.y1);
  };
  auto grad = [&](const Vec2& p, double& g1, double& gr) {
    const double q = dist2(p, c);
    const double e = std::exp(-q);
    g1 = e * (0.3 - 2.0 * (p.y1 - c.y1) * (1.0 + 0.3 * p.y1));
    gr = -2.0 * (p.r - c.r) * e * (1.0 + 0.3 * p.y1);
  };
  auto lap = [&](const Vec2& p) {
    // axisymmetric Laplacian of the product, assembled from closed forms
    const double q = dist2(p, c);
    const double e = std::exp(-q);
    const double f = 1.0 + 0.3 * p.y1;
    const double d1 = p.y1 - c.y1, dr = p.r - c.r;
    const double lap_e_flat = e * (4.0 * q - 4.0);  // 2D part
    const double lap_e = lap_e_flat + (dims.N - 2.0) / p.r * (-2.0 * dr * e);
    const double cross = 2.0 * (-2.0 * d1 * e) * 0.3;
    return lap_e * f + cross;
  };
  const double closure =
      translation_stress_closure(uf, lap, grad, {0.45, 0.0}, 0.35, dims, 48);
  CHECK(closure < 1e-6);
}

TEST_CASE("boundary F-terms: zero shifts kill F2_1..3; orders recorded") {
  const auto dims = DimensionParams::make(7);
  PotentialSpec pot;
  pot.beta = 4.0;
  pot.period_L = 1.0;
  pot.a = 1.0;
  auto a = Ansatz::lattice(dims, 1, 7.0, 16.0, pot);
  GridBuildOptions g;
  g.h_base = 0.15;
  g.core_nodes = 9.0;
  g.r_extent = 5.0;
  g.margin = 3.0;
  auto grid = make_solver_grid(a, g);
  Field u = field_W(a, grid);
  auto cfg = PohozaevConfig::make(dims, 4.0, 1.375, 16.0, 7.0);
  auto ft = boundary_term_estimates(u, a, cfg, {0.0, 0.0});
  CHECK(ft.d_shift == 0.0);
  CHECK(ft.F2_1 == 0.0);
  CHECK(ft.F2_2 == 0.0);
  CHECK(ft.F2_3 == 0.0);
  CHECK(ft.F2_4 > 0.0);
  CHECK(ft.order_F2_4 == doctest::Approx(-(7.0 - 2.0 + (4.0 + 4.0 - 7.0) * cfg.theta)));
  CHECK(ft.budget_order == doctest::Approx(-6.0));
  // F2_4 decay across mu: slope -(N-2+(beta+4-N) theta) = -6 here
  auto a2 = Ansatz::lattice(dims, 1, 7.0, 32.0, pot);
  auto grid2 = make_solver_grid(a2, g);
  Field u2 = field_W(a2, grid2);
  auto cfg2 = PohozaevConfig::make(dims, 4.0, 1.375, 32.0, 7.0);
  auto ft2 = boundary_term_estimates(u2, a2, cfg2, {0.0, 0.0});
  const double slope = std::log2(ft.F2_4 / ft2.F2_4);
  CHECK(std::abs(-slope - ft.order_F2_4) < 0.4);
  // all F-terms inside the O(mu^{-(beta+2)}) budget (constants of modest size)
  CHECK(ft.F1 < 1e3 * std::pow(16.0, -6.0));
  CHECK(ft.F2_4 < 1e3 * std::pow(16.0, -6.0));
}

TEST_CASE("volume Q-term order on the ansatz: slope -(beta+2)") {
  const auto dims = DimensionParams::make(7);
  PotentialSpec pot;
  pot.beta = 4.0;
  pot.period_L = 1.0;
  pot.a = 1.0;
  GridBuildOptions g;
  g.h_base = 0.15;
  g.core_nodes = 10.0;
  g.r_extent = 5.0;
  g.margin = 3.0;
  std::vector<double> vals;
  for (double mu : {16.0, 32.0}) {
    auto a = Ansatz::lattice(dims, 1, 7.0, mu, pot);
    auto grid = make_solver_grid(a, g);
    Field u = field_W(a, grid);
    auto cfg = PohozaevConfig::make(dims, 4.0, 1.375, mu, 7.0);
    auto di = dilation_identity(u, a, cfg);
    double vol_q = 0.0;
    for (const auto& t : di.terms)
      if (t.name.find("volume -Int Q u^2") != std::string::npos) vol_q = std::abs(t.value);
    vals.push_back(vol_q);
  }
  const double slope = std::log2(vals[0] / vals[1]);
  CHECK(std::abs(slope - 6.0) < 0.35);
}
