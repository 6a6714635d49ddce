#pragma once

// Closed-form bubble profiles, linearization kernel, cutoff, potential and the
// bubble-adapted weighted sup norms. Everything here is an exact pointwise
// formula; no discretization enters.

#include "bubblelab/types.hpp"

namespace bubblelab {

// U_{x,mu}(y) = A_N (mu / (1 + mu^2 |y-x|^2))^{(N-2)/2}
double eval_bubble(const Bubble& b, const DimensionParams& d, const Vec2& y);

// Closed-form -Delta U = U^{2*-1}; right-hand side power of the bubble.
double eval_bubble_power(const Bubble& b, const DimensionParams& d, const Vec2& y,
                         double exponent_over_u);  // returns U^exponent

// Kernel of the linearized operator at one bubble:
//   l = 0      : psi_0 = dU/dmu
//   l = 1      : psi_1 = dU/dy_1
//   l = 2..N   : transverse translation modes; on the axisymmetric subspace
//                these are psi_r * (unit transverse direction); eval_kernel
//                returns the radial factor dU/dr.
double eval_kernel(const Bubble& b, const DimensionParams& d, int l, const Vec2& y);

// Gradient of U in (y1, r) coordinates.
void bubble_gradient(const Bubble& b, const DimensionParams& d, const Vec2& y,
                     double& du_dy1, double& du_dr);

// Smooth radial cutoff xi and derivatives. order = 0: xi; 1: xi'(s) (radial
// derivative, s = |z|); 2: Laplacian of xi in R^N at z.
double eval_cutoff(const CutoffSpec& c, const DimensionParams& d, const Vec2& z, int order);

// Radial profile helpers (s = |z|): value, first and second s-derivatives.
double cutoff_radial(const CutoffSpec& c, double s, int order);

// Lattice potential and its gradient. Gradient is zero where the clip is active.
double eval_Q(const PotentialSpec& p, const Vec2& y);
double eval_Q_raw(const PotentialSpec& p, const Vec2& y);  // before clipping
void eval_Q_gradient(const PotentialSpec& p, const Vec2& y, double& dq_dy1, double& dq_dr);

// Cutoff multi-bubble ansatz W = sum_j xi(y - x_j) U_j(y).
double eval_W(const Ansatz& a, const Vec2& y);
void eval_W_gradient(const Ansatz& a, const Vec2& y, double& dw_dy1, double& dw_dr);

// Constraint-generating functions. j in 1..N are translations (axisymmetric
// configurations only carry j = 1), j = N+1 is the dilation mode:
//   Z_{ij}    = xi(y-x_i) * dW_i/dx_{i,j} = -xi (dxi_j U_i + xi dU_i/dy_j)
//   Z_{i,N+1} = dW_i/dmu  = xi * dU_i/dmu
double eval_Zij(const Ansatz& a, int i, int j, const Vec2& y);

// l_L, the ansatz defect: (W^{2*-1} - sum_j xi_j U_j^{2*-1}) - Q W
//  + sum_j U_j Lap(xi_j) + 2 grad(xi_j) . grad(U_j).
double eval_lL(const Ansatz& a, const Vec2& y);

// Bubble-adapted weights. star: sum_j mu^{(N-2)/2} (1+mu|y-x_j|)^{-((N-2)/2+tau)};
// dstar replaces (N-2)/2 by (N+2)/2 in both exponents.
double star_weight(const Ansatz& a, const WeightedNormParams& p, const Vec2& y);
double dstar_weight(const Ansatz& a, const WeightedNormParams& p, const Vec2& y);

}  // namespace bubblelab
