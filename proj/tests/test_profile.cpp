#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "bubblelab/profile.hpp"
#include "bubblelab/types.hpp"

using namespace bubblelab;

namespace {

double closed_form_laplacian(const Bubble& b, const DimensionParams& d, double rho) {
  // radial: U'' + (N-1)/rho U'
  const double mu = b.height, A = d.bubble_amp, h = 0.5 * (d.N - 2);
  const double t = 1.0 + mu * mu * rho * rho;
  const double up = -2.0 * h * A * std::pow(mu, h) * mu * mu * rho * std::pow(t, -h - 1.0);
  const double upp = -2.0 * h * A * std::pow(mu, h + 2.0) * std::pow(t, -h - 1.0) +
                     4.0 * h * (h + 1.0) * A * std::pow(mu, h + 4.0) * rho * rho *
                         std::pow(t, -h - 2.0);
  return upp + (d.N - 1.0) / rho * up;
}

}  // namespace

TEST_CASE("bubble closed form at the center, N=5") {
  const auto d = DimensionParams::make(5);
  Bubble b{{0.0, 0.0}, 1.0};
  CHECK(eval_bubble(b, d, {0.0, 0.0}) == doctest::Approx(std::pow(15.0, 0.75)).epsilon(1e-13));
}

TEST_CASE("bubble scaling identity") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-3.0, 3.0), M(0.5, 20.0);
  for (int N : {5, 6, 7}) {
    const auto d = DimensionParams::make(N);
    for (int t = 0; t < 200; ++t) {
      const Bubble b{{U(rng), std::abs(U(rng))}, M(rng)};
      const Vec2 y{U(rng), std::abs(U(rng))};
      const Bubble unit{{0.0, 0.0}, 1.0};
      const Vec2 z{b.height * (y.y1 - b.center.y1), b.height * (y.r - b.center.r)};
      const double lhs = eval_bubble(b, d, y);
      const double rhs = std::pow(b.height, 0.5 * (N - 2)) * eval_bubble(unit, d, z);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
  }
}

TEST_CASE("bubble far field at rho = 10 (direct-evaluation oracle)") {
  const auto d = DimensionParams::make(5);
  Bubble b{{0.0, 0.0}, 1.0};
  const double val = eval_bubble(b, d, {10.0, 0.0});
  const double farfield = d.bubble_amp * std::pow(10.0, -3.0);
  const double ratio = val / farfield;
  // frozen oracle value (100/101)^{3/2}; the far-field law is 1.48% high here
  CHECK(ratio == doctest::Approx(std::pow(100.0 / 101.0, 1.5)).epsilon(1e-12));
  CHECK(std::abs(ratio - 1.0) < 0.02);
}

TEST_CASE("PDE exactness: -Lap U = U^{2*-1} in closed form") {
  for (int N : {5, 6, 7}) {
    const auto d = DimensionParams::make(N);
    Bubble b{{0.3, 0.0}, 3.0};
    for (double rho : {0.05, 0.21, 0.8, 2.5, 7.0}) {
      const Vec2 y{b.center.y1 + rho, 0.0};
      const double rhs = eval_bubble_power(b, d, y, d.two_star - 1.0);
      const double lap = closed_form_laplacian(b, d, rho);
      CHECK(std::abs(-lap - rhs) < 1e-8 * rhs);
    }
  }
}

TEST_CASE("kernel values and symmetry at the center") {
  for (int N : {5, 7}) {
    const auto d = DimensionParams::make(N);
    Bubble b{{1.0, 0.0}, 1.0};
    CHECK(eval_kernel(b, d, 1, b.center) == doctest::Approx(0.0));
    CHECK(eval_kernel(b, d, 0, b.center) ==
          doctest::Approx(0.5 * (N - 2.0) * d.bubble_amp).epsilon(1e-13));
    CHECK_THROWS(eval_kernel(b, d, N + 1, b.center));
  }
}

TEST_CASE("psi_0 matches the mu finite difference at O(h^2)") {
  const auto d = DimensionParams::make(7);
  const Vec2 y{0.7, 0.4};
  auto fd_err = [&](double h) {
    const Bubble bp{{0.0, 0.0}, 2.0 + h}, bm{{0.0, 0.0}, 2.0 - h};
    const double fd = (eval_bubble(bp, d, y) - eval_bubble(bm, d, y)) / (2.0 * h);
    return std::abs(fd - eval_kernel({{0.0, 0.0}, 2.0}, d, 0, y));
  };
  const double e1 = fd_err(1e-2), e2 = fd_err(5e-3);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("kernel equation: discretized -Lap psi_l = (2*-1) U^{2*-2} psi_l") {
  for (int N : {5, 7}) {
    const auto d = DimensionParams::make(N);
    const Bubble b{{0.0, 0.0}, 1.0};
    for (int l : {0, 1}) {
      double worst = 0.0;
      for (const Vec2 y : {Vec2{0.31, 0.17}, Vec2{-0.42, 0.55}, Vec2{1.3, 0.8}}) {
        const double h = 2e-3;
        auto f = [&](double dy1, double dr) {
          return eval_kernel(b, d, l, {y.y1 + dy1, y.r + dr});
        };
        // fourth-order second differences plus the axisymmetric metric term
        const double d2y = (-f(2 * h, 0) + 16 * f(h, 0) - 30 * f(0, 0) + 16 * f(-h, 0) -
                            f(-2 * h, 0)) /
                           (12 * h * h);
        const double d2r =
            (-f(0, 2 * h) + 16 * f(0, h) - 30 * f(0, 0) + 16 * f(0, -h) - f(0, -2 * h)) /
            (12 * h * h);
        const double d1r = (-f(0, 2 * h) + 8 * f(0, h) - 8 * f(0, -h) + f(0, -2 * h)) / (12 * h);
        const double lap = d2y + d2r + (N - 2.0) / y.r * d1r;
        const double target =
            (d.two_star - 1.0) * eval_bubble_power(b, d, y, d.two_star - 2.0) * f(0, 0);
        worst = std::max(worst, std::abs(-lap - target) / std::max(std::abs(target), 1e-12));
      }
      CHECK(worst < 1e-6);
    }
  }
}

TEST_CASE("kernel weighted orthogonality (dilation vs translation)") {
  // Int U^{2*-2} psi_0 psi_1 over R^N vanishes by parity; axisymmetric
  // quadrature on a coarse polar net is enough to see < 1e-6 relative
  const auto d = DimensionParams::make(5);
  const Bubble b{{0.0, 0.0}, 1.0};
  double cross = 0.0, n0 = 0.0, n1 = 0.0;
  const int ns = 60, na = 40;
  for (int i = 1; i <= ns; ++i) {
    const double s = 8.0 * i / ns;
    for (int k = 0; k < na; ++k) {
      const double phi = M_PI * (k + 0.5) / na;
      const Vec2 y{s * std::cos(phi), s * std::sin(phi)};
      const double w = std::pow(s, d.N - 1.0) * std::pow(std::sin(phi), d.N - 2.0);
      const double up = eval_bubble_power(b, d, y, d.two_star - 2.0);
      const double p0 = eval_kernel(b, d, 0, y), p1 = eval_kernel(b, d, 1, y);
      cross += w * up * p0 * p1;
      n0 += w * up * p0 * p0;
      n1 += w * up * p1 * p1;
    }
  }
  CHECK(std::abs(cross) / std::sqrt(n0 * n1) < 1e-6);
}

TEST_CASE("cutoff plateaus, ramp integral and smoothness") {
  const auto d = DimensionParams::make(5);
  CutoffSpec c;
  CHECK(eval_cutoff(c, d, {0.5, 0.0}, 0) == 1.0);
  CHECK(eval_cutoff(c, d, {0.5, 0.0}, 1) == 0.0);
  CHECK(eval_cutoff(c, d, {3.0, 0.0}, 0) == 0.0);
  CHECK(eval_cutoff(c, d, {0.0, 2.0}, 0) == 0.0);
  // fundamental theorem on the ramp
  const int n = 20000;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double s = 1.0 + (i + 0.5) / n;
    acc += cutoff_radial(c, s, 1) / n;
  }
  CHECK(acc == doctest::Approx(-1.0).epsilon(1e-6));
  // xi' and xi'' vanish at both seams (C^2 glue)
  for (double s : {1.0 + 1e-9, 2.0 - 1e-9}) {
    CHECK(std::abs(cutoff_radial(c, s, 1)) < 1e-6);
    CHECK(std::abs(cutoff_radial(c, s, 2)) < 1e-5);
  }
  // monotone and bounded in [0,1]
  for (int i = 0; i <= 100; ++i) {
    const double s = 1.0 + i / 100.0;
    const double v = cutoff_radial(c, s, 0);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    CHECK(cutoff_radial(c, s, 1) <= 1e-15);
  }
}

TEST_CASE("W: support arithmetic") {
  const auto d = DimensionParams::make(5);
  PotentialSpec pot;
  pot.beta = 2.0;
  pot.period_L = 10.0;
  auto a = Ansatz::lattice(d, 1, 10.0, 4.0, pot);
  const Vec2 inside{0.3, 0.2};
  CHECK(eval_W(a, inside) ==
        doctest::Approx(eval_bubble(a.bubbles[0], d, inside)).epsilon(1e-14));
  CHECK(eval_W(a, {5.0, 0.0}) == 0.0);  // midpoint is beyond both cutoffs
  CHECK(eval_W(a, {0.0, 0.0}) == doctest::Approx(eval_bubble(a.bubbles[0], d, {0.0, 0.0})));
}

TEST_CASE("Q: lattice zeros, raw value, periodicity, clipping") {
  PotentialSpec p;
  p.a = 1.0;
  p.beta = 3.5;
  p.period_L = 10.0;
  CHECK(eval_Q(p, {0.0, 0.0}) == 0.0);
  CHECK(eval_Q(p, {20.0, 0.0}) == 0.0);
  CHECK(eval_Q_raw(p, {2.0, 0.0}) == doctest::Approx(std::pow(2.0, 3.5)).epsilon(1e-14));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-30.0, 30.0), R(0.0, 8.0);
  for (int t = 0; t < 300; ++t) {
    const Vec2 y{U(rng), R(rng)};
    CHECK(eval_Q(p, {y.y1 + p.period_L, y.r}) == doctest::Approx(eval_Q(p, y)).epsilon(1e-11));
    CHECK(eval_Q(p, y) <= p.ceiling() + 1e-15);
    CHECK(eval_Q(p, y) >= 0.0);
  }
  PotentialSpec bad = p;
  bad.a = -1.0;
  bad.clip_enabled = false;
  CHECK_THROWS(bad.validate(5));
}

TEST_CASE("Z_ij: support, center value and the finite-difference sign oracle") {
  const auto d = DimensionParams::make(5);
  PotentialSpec pot;
  pot.beta = 2.0;
  pot.period_L = 10.0;
  auto a = Ansatz::lattice(d, 1, 10.0, 2.0, pot);
  CHECK(eval_Zij(a, 0, 1, {7.0, 0.0}) == 0.0);
  // Z_{i,N+1} at the center equals psi_0 there
  CHECK(eval_Zij(a, 0, d.N + 1, {0.0, 0.0}) ==
        doctest::Approx(eval_kernel(a.bubbles[0], d, 0, {0.0, 0.0})).epsilon(1e-13));
  // translation mode tracks d/dx of W (finite difference in the center)
  for (const Vec2 y : {Vec2{0.4, 0.3}, Vec2{1.4, 0.4}, Vec2{-1.2, 0.9}}) {
    const double h = 1e-6;
    auto ap = a, am = a;
    ap.bubbles[0].center.y1 += h;
    am.bubbles[0].center.y1 -= h;
    const double fd = (eval_W(ap, y) - eval_W(am, y)) / (2.0 * h);
    const double s = std::sqrt(dist2(y, a.bubbles[0].center));
    const double xi = cutoff_radial(a.cutoff, s, 0);
    if (xi == 0.0) continue;
    CHECK(eval_Zij(a, 0, 1, y) == doctest::Approx(xi * fd).epsilon(1e-5));
  }
  CHECK_THROWS(eval_Zij(a, 0, d.N + 2, {0.0, 0.0}));
  CHECK_THROWS(eval_Zij(a, 5, 1, {0.0, 0.0}));
}

TEST_CASE("l_L support arithmetic") {
  const auto d = DimensionParams::make(5);
  PotentialSpec pot;
  pot.beta = 2.0;
  pot.period_L = 12.0;
  pot.a = 0.0;  // Q == 0
  pot.clip_enabled = false;
  Ansatz a;
  a.dims = d;
  a.potential = pot;
  a.bubbles.push_back({{0.0, 0.0}, 4.0});
  CHECK(eval_lL(a, {0.4, 0.2}) == 0.0);  // inside B_1: xi == 1, no Q
  CHECK(eval_lL(a, {6.0, 0.0}) == 0.0);  // outside B_2
  CHECK(eval_lL(a, {1.5, 0.0}) != 0.0);  // ramp region carries the defect
}

TEST_CASE("Lemma-style two-point product bound holds with one constant") {
  // 1/((1+|y-xi|)^al (1+|y-xj|)^be) <= C (1+|xi-xj|)^{-sg} [sum of two]
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> P(-20.0, 20.0), R(0.0, 10.0), E(1.0, 7.0);
  double measured = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const Vec2 xi{P(rng), R(rng)}, xj{P(rng), R(rng)}, y{P(rng), R(rng)};
    const double dij = std::sqrt(dist2(xi, xj));
    if (dij < 1e-6) continue;
    const double al = E(rng), be = E(rng);
    std::uniform_real_distribution<double> S(0.5, std::min(al, be));
    const double sg = S(rng);
    const double di = std::sqrt(dist2(y, xi)), dj = std::sqrt(dist2(y, xj));
    const double lhs = std::pow(1.0 + di, -al) * std::pow(1.0 + dj, -be);
    const double rhs = std::pow(1.0 + dij, -sg) * (std::pow(1.0 + dj, -(al + be - sg)) +
                                                   std::pow(1.0 + di, -(al + be - sg)));
    measured = std::max(measured, lhs / rhs);
  }
  CHECK(measured < 128.0);  // 2^{sigma} envelope, sigma <= 7
  CHECK(measured > 0.0);
}

TEST_CASE("lattice weight-sum bound on B_1(x_i) with one constant") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> MU(4.0, 64.0), LL(5.0, 12.0), G(1.1, 4.0), T(0.0, 1.0);
  double measured = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const double mu = MU(rng), L = LL(rng), gam = G(rng);
    const int m = 2 + static_cast<int>(T(rng) * 8);
    const int i = static_cast<int>(T(rng) * m);
    const double rad = T(rng);
    const double ang = M_PI * T(rng);
    const Vec2 y{i * L + rad * std::cos(ang), rad * std::sin(ang)};
    double sum = 0.0;
    for (int j = 0; j <= m; ++j) {
      const double dj = std::sqrt(dist2(y, {j * L, 0.0}));
      sum += std::pow(1.0 + mu * dj, -gam);
    }
    const double di = std::sqrt(dist2(y, {static_cast<double>(i) * L, 0.0}));
    const double rhs = std::pow(1.0 + mu * di, -1.0);  // theta' = 1 reading
    measured = std::max(measured, sum / rhs);
  }
  CHECK(measured < 4.0);
  CHECK(measured > 0.0);
}

TEST_CASE("star weight scaling covariance") {
  const auto d = DimensionParams::make(7);
  PotentialSpec pot;
  pot.beta = 4.0;
  pot.period_L = 10.0;
  const auto np = WeightedNormParams::make_default(7, 4.0);
  Ansatz a1;
  a1.dims = d;
  a1.potential = pot;
  a1.bubbles.push_back({{0.0, 0.0}, 8.0});
  Ansatz a2 = a1;
  const double s = 2.0;
  a2.bubbles[0].height = 8.0 * s;
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(-2.0, 2.0), R(0.0, 2.0);
  for (int t = 0; t < 100; ++t) {
    const Vec2 y{U(rng), R(rng)};
    const Vec2 ys{y.y1 / s, y.r / s};
    const double w1 = star_weight(a1, np, y);
    const double w2 = star_weight(a2, np, ys) * std::pow(s, -0.5 * (d.N - 2));
    CHECK(w1 == doctest::Approx(w2).epsilon(1e-12));
  }
}
