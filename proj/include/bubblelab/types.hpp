#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bubblelab {

// Axisymmetric point: y1 along the lattice axis, r = |(y2,...,yN)|.
struct Vec2 {
  double y1 = 0.0;
  double r = 0.0;
};

inline double dist2(const Vec2& a, const Vec2& b) {
  const double d1 = a.y1 - b.y1;
  const double dr = a.r - b.r;  // same transverse direction
  return d1 * d1 + dr * dr;
}

// Dimension-dependent constants for -Delta u + Q u = u^{(N+2)/(N-2)}.
struct DimensionParams {
  int N = 5;
  double two_star = 0.0;     // 2N/(N-2)
  double sphere_area = 0.0;  // |S^{N-1}| = 2 pi^{N/2} / Gamma(N/2)
  double green_const = 0.0;  // 1/((N-2)|S^{N-1}|), kernel of (-Delta)^{-1}
  double bubble_amp = 0.0;   // A_N = (N(N-2))^{(N-2)/4}

  static DimensionParams make(int N) {
    if (N < 5) throw std::invalid_argument("DimensionParams: N >= 5 required");
    DimensionParams d;
    d.N = N;
    d.two_star = 2.0 * N / (N - 2.0);
    d.sphere_area = 2.0 * std::pow(M_PI, 0.5 * N) / std::tgamma(0.5 * N);
    d.green_const = 1.0 / ((N - 2.0) * d.sphere_area);
    d.bubble_amp = std::pow(N * (N - 2.0), 0.25 * (N - 2.0));
    return d;
  }
};

// Lattice potential model: Q(y) = offset + a d^beta + remainder_scale d^{beta+1},
// d = distance from y to the nearest lattice point (jL, 0, ..., 0), clipped to
// [0, clip_ceiling]. Vanishes on the lattice when offset = 0.
struct PotentialSpec {
  double a = 1.0;
  double beta = 4.0;
  double period_L = 10.0;
  double remainder_scale = 0.0;
  double clip_ceiling = 0.0;  // <= 0 means "derive default a (L/2)^beta"
  bool clip_enabled = true;
  double offset = 0.0;  // Q at lattice points; nonzero only in nonexistence probes

  double ceiling() const {
    if (clip_ceiling > 0.0) return clip_ceiling;
    return std::abs(a) * std::pow(0.5 * period_L, beta);
  }

  void validate(int N) const {
    if (period_L <= 0.0) throw std::invalid_argument("PotentialSpec: period_L > 0 required");
    if (a < 0.0 && !clip_enabled)
      throw std::invalid_argument("PotentialSpec: a < 0 without clipping violates Q >= 0");
    if (!(beta > 0.0)) throw std::invalid_argument("PotentialSpec: beta > 0 required");
    (void)N;
  }

  bool beta_admissible(int N) const { return beta > N - 4.0 && beta < N - 2.0; }
};

struct Bubble {
  Vec2 center;       // on or near the axis; r-component is 0 for lattice configs
  double height = 1.0;  // mu

  void validate() const {
    if (!(height > 0.0)) throw std::invalid_argument("Bubble: height > 0 required");
  }
};

// Radial C^2 cutoff, identically 1 on |z| <= inner_radius and 0 outside
// outer_radius. Ramp is the logistic-of-1/t bump, smooth on the open annulus.
struct CutoffSpec {
  double inner_radius = 1.0;
  double outer_radius = 2.0;

  void validate() const {
    if (!(inner_radius > 0.0) || !(outer_radius > inner_radius))
      throw std::invalid_argument("CutoffSpec: need 0 < inner_radius < outer_radius");
  }
};

// Weighted-norm parameters: tau = 1 + vartheta.
struct WeightedNormParams {
  double vartheta = 0.0;
  double tau = 0.0;

  static WeightedNormParams make_default(int N, double beta) {
    WeightedNormParams p;
    p.vartheta = 0.25 * std::min(0.5 * (N - 4.0), 0.5 * beta);
    p.tau = 1.0 + p.vartheta;
    return p;
  }
  static WeightedNormParams with_vartheta(double vt) {
    WeightedNormParams p;
    p.vartheta = vt;
    p.tau = 1.0 + vt;
    return p;
  }
  void validate(int N) const {
    if (!(tau > 1.0) || !(tau < 0.5 * (N - 2.0)))
      throw std::invalid_argument("WeightedNormParams: need 1 < tau < (N-2)/2");
  }
};

// Cutoff sum of bubbles on (or near) the 1D lattice.
struct Ansatz {
  DimensionParams dims;
  std::vector<Bubble> bubbles;
  CutoffSpec cutoff;
  PotentialSpec potential;

  void validate() const {
    cutoff.validate();
    potential.validate(dims.N);
    for (const auto& b : bubbles) b.validate();
    for (size_t i = 0; i < bubbles.size(); ++i)
      for (size_t j = i + 1; j < bubbles.size(); ++j)
        if (dist2(bubbles[i].center, bubbles[j].center) == 0.0)
          throw std::invalid_argument("Ansatz: bubble centers must be pairwise distinct");
  }

  // Smallest pairwise center distance (the lattice spacing for chains).
  double spacing() const {
    double best = INFINITY;
    for (size_t i = 0; i < bubbles.size(); ++i)
      for (size_t j = i + 1; j < bubbles.size(); ++j)
        best = std::min(best, std::sqrt(dist2(bubbles[i].center, bubbles[j].center)));
    return best;
  }

  // Lattice ansatz: m+1 bubbles at x_j = (jL, 0), common height mu. The
  // spacing L must be a multiple of the potential period so Q vanishes at
  // every bubble center.
  static Ansatz lattice(const DimensionParams& d, int m, double L, double mu,
                        const PotentialSpec& pot) {
    Ansatz a;
    a.dims = d;
    a.potential = pot;
    const double k = L / pot.period_L;
    if (std::abs(k - std::round(k)) > 1e-9)
      throw std::invalid_argument("Ansatz::lattice: spacing must be a multiple of the Q period");
    for (int j = 0; j <= m; ++j) a.bubbles.push_back({{j * L, 0.0}, mu});
    a.validate();
    return a;
  }
};

}  // namespace bubblelab
