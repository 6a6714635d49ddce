#pragma once

// Radial and axisymmetric quadrature. Radial integrals map [0,inf) through an
// algebraic transform; every routine reports a two-level refinement error
// estimate. Ball/annulus/sphere rules reduce R^N integrals of axisymmetric
// integrands to (s, phi) polar quadrature around an on-axis center.

#include <functional>
#include <vector>

#include "bubblelab/types.hpp"

namespace bubblelab {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  // |fine - coarse| refinement estimate
  bool converged = true;
};

struct QuadratureSpec {
  int nodes = 32;    // Gauss-Legendre nodes per panel (>= 16)
  int panels = 12;   // radial panels
  double scale = 1.0;  // algebraic map r = scale * t/(1-t)
  double tol = 1e-8;
  std::vector<double> breakpoints;  // extra panel splits in r

  void validate() const {
    if (nodes < 16) throw std::invalid_argument("QuadratureSpec: nodes >= 16 required");
    if (panels < 1) throw std::invalid_argument("QuadratureSpec: panels >= 1 required");
  }
};

// Cached Gauss-Legendre rule on [-1, 1].
const std::vector<double>& gauss_nodes(int n);
const std::vector<double>& gauss_weights(int n);

// omega_{N-1} * Int_0^inf r^{N-1} f(r) dr
QuadResult radial_integral(const std::function<double(double)>& f, const DimensionParams& d,
                           const QuadratureSpec& spec);

// Int over a finite radial range (no improper map), same N-sphere weight.
QuadResult radial_integral_range(const std::function<double(double)>& f,
                                 const DimensionParams& d, double r0, double r1,
                                 const QuadratureSpec& spec);

// Int_{B_r1(center) \ B_r0(center)} f dV for axisymmetric f; center on the axis.
// Radial panels are geometrically graded toward r0 when grade_inner is set
// (resolves bubble cores of scale ~ 1/mu).
QuadResult shell_integral(const std::function<double(const Vec2&)>& f, const Vec2& center,
                          double r0, double r1, const DimensionParams& d, int radial_panels,
                          int nodes, double grade_inner = 0.0);

inline QuadResult ball_integral(const std::function<double(const Vec2&)>& f, const Vec2& center,
                                double radius, const DimensionParams& d, int radial_panels,
                                int nodes, double grade_inner = 0.0) {
  return shell_integral(f, center, 0.0, radius, d, radial_panels, nodes, grade_inner);
}

// Int_{\partial B_delta(center)} f dS = omega_{N-2} delta^{N-1}
//   * Int_0^pi f(center + delta(cos phi, sin phi)) sin^{N-2} phi dphi
QuadResult sphere_integral(const std::function<double(const Vec2&)>& f, const Vec2& center,
                           double delta, const DimensionParams& d, int order);

// Angular moment Int_0^pi |cos|^p cos^q sin^{N-2} phi dphi (q in {0,1}).
double angular_moment(int N, double p_abs_cos, int q_cos, int nodes);

// |S^{N-2}| factor used by the polar reduction (1 for N = 2 conventions not needed here).
double transverse_sphere_area(int N);

}  // namespace bubblelab
