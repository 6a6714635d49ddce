#pragma once

// Uniqueness and periodicity diagnostics: normalized solution differences,
// kernel projections, Green-tail modeling and energy derivatives.

#include <string>
#include <vector>

#include "bubblelab/field.hpp"
#include "bubblelab/types.hpp"

namespace bubblelab {

struct DifferenceQuotient {
  Field eta;          // (u1 - u2) / ||u1 - u2||_*
  double raw_norm = 0.0;
  bool identical = false;  // raw norm under the floor; eta left zero
};

DifferenceQuotient make_difference(const Field& u1, const Field& u2, const Ansatz& a,
                                   const WeightedNormParams& np, double floor);

struct KernelProjection {
  std::vector<double> b;  // coefficients on psi_0..psi_N (transverse entries 0)
  double residual = 0.0;  // weighted-L2 remainder over B_R relative to eta
  double gram_min = 0.0;  // smallest diagonal Gram entry (resolution check)
};

// Expansion of the rescaled difference around bubble j in the unit-bubble
// kernel basis, weighted by U^{2*-2} over B_R(0).
KernelProjection kernel_projection(const Field& eta, const Ansatz& a, int j, double R,
                                   int radial_panels = 24, int nodes = 24);

// sup over window nodes of |u(y - L e1) - u(y)| / w_*(y).
double periodicity_check(const Field& u, const Ansatz& a, const WeightedNormParams& np, double L,
                         double window_lo, double window_hi);

struct GreenTailModel {
  std::vector<double> monopole;  // A_{j,0}
  std::vector<double> dipole;    // A_{j,1} (y1 direction)
  double fit_residual = 0.0;     // relative l2 misfit on the annuli
  double remainder_scale = 0.0;  // mu^{-(N+2)/2 + vartheta} reporting scale
};

GreenTailModel green_tail_fit(const Field& eta, const Ansatz& a, const WeightedNormParams& np,
                              double annulus_inner, double annulus_outer);

// Energy I(W) = (1/2) Int |grad W|^2 + Q W^2 - (1/2*) Int W^{2*} and its
// parameter derivatives by differentiation under the integral
// (dI/dp = -Int l_L dW/dp; the defect l_L is analytic).
double energy(const Ansatz& a, int radial_panels = 32, int nodes = 32);
double energy_mu_derivative(const Ansatz& a, int radial_panels = 32, int nodes = 32);
double energy_location_derivative(const Ansatz& a, int bubble, int radial_panels = 32,
                                  int nodes = 32);

}  // namespace bubblelab
