#pragma once

// Local Pohozaev identities on balls B_delta(x_j) with delta = mu^{-theta}.
// Each identity is decomposed into its named terms with predicted decay
// orders; totals close up to quadrature/interpolation error.

#include <string>
#include <vector>

#include "bubblelab/field.hpp"
#include "bubblelab/types.hpp"

namespace bubblelab {

struct PohozaevConfig {
  double theta = 1.0;
  double delta = 0.0;
  int surface_order = 64;
  int ball_radial_panels = 24;
  int ball_nodes = 24;
  int ball_index = 0;
  int direction = 1;  // translation identity direction (y1 on the axisymmetric subspace)

  // theta = max{(beta+4-N)/(beta+1-2 tau), 1}; delta = mu^{-theta}
  static PohozaevConfig make(const DimensionParams& d, double beta, double tau, double mu,
                             double L, int ball_index = 0);
};

struct PohozaevTerm {
  std::string name;
  double value = 0.0;
  double predicted_order = 0.0;  // expected log-log slope in mu (0 = none stated)
};

struct PohozaevReport {
  std::vector<PohozaevTerm> terms;
  double lhs_total = 0.0;      // signed sum of left-hand terms
  double rhs = 0.0;            // critical-power boundary term
  double residual = 0.0;       // lhs_total - rhs
  double interaction_term = 0.0;  // dilation: boundary gradient combination
  double potential_term = 0.0;    // dilation: volume Q terms
};

PohozaevReport translation_identity(const Field& u, const Ansatz& a, const PohozaevConfig& cfg);
PohozaevReport dilation_identity(const Field& u, const Ansatz& a, const PohozaevConfig& cfg);

// Leading balanced quantities of the dilation identity on ball j, measured on
// the solution itself: the potential side by volume quadrature, the
// interaction side through the monopole pairing of the fitted Green tail
// (the direct boundary combination is a cancellation-limited remainder of the
// raw surface terms and is reported, not balanced).
struct DilationBalance {
  double interaction = 0.0;  // kappa_N A_own sum_i A_i G(x_i, x_j)
  double potential = 0.0;    // Int_B (Q + <grad Q, y-x_j>/2) u^2
  double ratio = 0.0;
  double delta = 0.0;  // far-field ball radius used
  std::vector<double> fitted_monopoles;
};

DilationBalance dilation_balance(const Field& u, const Ansatz& a, const WeightedNormParams& np,
                                 int ball_index, double delta_far = 0.0);

struct BoundaryTermReport {
  double d_shift = 0.0;  // max_i |x_iL - x_i|
  double F1 = 0.0;
  double F2_1 = 0.0, F2_2 = 0.0, F2_3 = 0.0, F2_4 = 0.0;
  double order_F2_4 = 0.0;  // -(N-2+(beta+4-N) theta)
  double budget_order = 0.0;  // -(beta+2)
};

BoundaryTermReport boundary_term_estimates(const Field& u, const Ansatz& a,
                                           const PohozaevConfig& cfg,
                                           const std::vector<double>& shifts);

// Quadrature validation: for a smooth analytic u with source f = -Lap u, the
// translation stress identity reads
//   Int_dB [dnu u d1 u - 0.5 |grad u|^2 nu_1] = Int_B (Lap u) d1 u.
// Returns |surface - volume| / scale.
double translation_stress_closure(const std::function<double(const Vec2&)>& u,
                                  const std::function<double(const Vec2&)>& lap_u,
                                  const std::function<void(const Vec2&, double&, double&)>& grad_u,
                                  const Vec2& center, double delta, const DimensionParams& d,
                                  int order);

std::string pohozaev_to_json(const PohozaevReport& translation, const PohozaevReport& dilation,
                             const BoundaryTermReport& fterms, const PohozaevConfig& cfg);

}  // namespace bubblelab
