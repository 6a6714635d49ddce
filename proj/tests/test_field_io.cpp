#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>

#include "bubblelab/field.hpp"
#include "bubblelab/io.hpp"
#include "bubblelab/profile.hpp"

using namespace bubblelab;

TEST_CASE("graded axis: monotone, hits targets, resolves clusters") {
  AxisSpec sp;
  sp.lo = -5.0;
  sp.hi = 5.0;
  sp.h_base = 0.5;
  sp.clusters.push_back({1.0, 0.02, 0.1});
  auto nodes = build_graded_axis(sp);
  CHECK(nodes.front() == doctest::Approx(-5.0));
  CHECK(nodes.back() == doctest::Approx(5.0));
  double hmin = 1e9;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    CHECK(nodes[i + 1] > nodes[i]);
    if (std::abs(nodes[i] - 1.0) < 0.05) hmin = std::min(hmin, nodes[i + 1] - nodes[i]);
  }
  CHECK(hmin < 0.05);  // refined zone reached the target scale
}

TEST_CASE("cubic sampling reproduces cubics exactly (value and gradient)") {
  AxisSpec ay;
  ay.lo = 0.0;
  ay.hi = 2.0;
  ay.h_base = 0.1;
  AxisSpec ar = ay;
  auto grid = AxiGrid::tensor(ay, ar);
  auto f = [](const Vec2& p) {
    return 1.0 + 0.5 * p.y1 - p.r + 0.25 * p.y1 * p.y1 * p.r - 0.125 * p.r * p.r * p.r;
  };
  Field fld = field_from(grid, f);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0.2, 1.8);
  for (int t = 0; t < 50; ++t) {
    const Vec2 p{U(rng), U(rng)};
    CHECK(fld.sample(p, 3) == doctest::Approx(f(p)).epsilon(1e-10));
    double val, d1, dr;
    fld.sample_gradient(p, val, d1, dr);
    CHECK(d1 == doctest::Approx(0.5 + 0.5 * p.y1 * p.r).epsilon(1e-8));
    CHECK(dr == doctest::Approx(-1.0 + 0.25 * p.y1 * p.y1 - 0.375 * p.r * p.r).epsilon(1e-8));
  }
}

TEST_CASE("norms: weight normalization, zero field, empty grid, single bubble") {
  const auto d = DimensionParams::make(5);
  PotentialSpec pot;
  pot.beta = 2.0;
  pot.period_L = 10.0;
  auto a = Ansatz::lattice(d, 0, 10.0, 4.0, pot);
  const auto np = WeightedNormParams::make_default(5, 2.0);

  GridBuildOptions opt;
  opt.margin = 3.0;
  opt.r_extent = 4.0;
  auto grid = make_solver_grid(a, opt);
  Field w = field_from(grid, [&](const Vec2& y) { return star_weight(a, np, y); });
  CHECK(norm_star(w, a, np) == doctest::Approx(1.0).epsilon(1e-14));

  Field zero(grid);
  CHECK(norm_star(zero, a, np) == 0.0);
  Field empty;
  CHECK_THROWS(norm_star(empty, a, np));

  // single bubble: analytic maximum of A (1+t)^{h+tau} (1+t^2)^{-h}
  Field u = field_from(grid, [&](const Vec2& y) { return eval_bubble(a.bubbles[0], d, y); });
  const double h = 0.5 * (d.N - 2);
  const double tstar = (h - std::sqrt(2.0 * h * h - np.tau * np.tau)) / (np.tau - h);
  const double gmax =
      std::pow(1.0 + tstar, h + np.tau) * std::pow(1.0 + tstar * tstar, -h);
  CHECK(norm_star(u, a, np) == doctest::Approx(d.bubble_amp * gmax).epsilon(2e-3));
}

TEST_CASE("field round-trips through the binary format") {
  AxisSpec ay;
  ay.lo = -1.0;
  ay.hi = 3.0;
  ay.h_base = 0.3;
  AxisSpec ar;
  ar.lo = 0.0;
  ar.hi = 2.0;
  ar.h_base = 0.4;
  auto grid = AxiGrid::tensor(ay, ar);
  Field f(grid);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (auto& v : f.v) v = U(rng);
  const std::string path = "roundtrip_test.axif";
  write_field(path, f, 7);
  int N = 0;
  Field g = read_field(path, &N);
  CHECK(N == 7);
  REQUIRE(g.v.size() == f.v.size());
  for (std::size_t i = 0; i < f.v.size(); ++i) CHECK(g.v[i] == f.v[i]);
  REQUIRE(g.grid->n1() == grid->n1());
  for (std::size_t i = 0; i < grid->n1(); ++i) CHECK(g.grid->y1[i] == grid->y1[i]);
  std::remove(path.c_str());
}

TEST_CASE("ansatz JSON sidecar round-trip") {
  const auto d = DimensionParams::make(6);
  PotentialSpec pot;
  pot.beta = 3.0;
  pot.period_L = 9.0;
  pot.a = 0.7;
  auto a = Ansatz::lattice(d, 2, 9.0, 12.0, pot);
  const auto text = ansatz_to_json(a);
  const auto back = ansatz_from_json(text);
  CHECK(back.dims.N == 6);
  REQUIRE(back.bubbles.size() == 3);
  CHECK(back.bubbles[2].center.y1 == doctest::Approx(18.0));
  CHECK(back.potential.a == doctest::Approx(0.7));
}

TEST_CASE("periodic tiling is exactly translation symmetric") {
  AxisSpec one;
  one.lo = -3.0;
  one.hi = 3.0;
  one.h_base = 0.4;
  one.clusters.push_back({0.0, 0.05, 0.3});
  AxisSpec ar;
  ar.lo = 0.0;
  ar.hi = 2.0;
  ar.h_base = 0.4;
  auto grid = AxiGrid::periodic_tensor(one, 2, ar);
  CHECK(grid->periodic_y1);
  const std::size_t half = grid->n1() / 2;
  for (std::size_t i = 0; i < half; ++i)
    CHECK(grid->y1[i + half] == doctest::Approx(grid->y1[i] + 6.0).epsilon(1e-14));
}
