#pragma once

// Universal integrals of the unit bubble and the derived reduced-system
// constants. Every value carries a refinement error estimate and the formula
// it was computed from; the whole set exports to JSON keyed by symbol.

#include <string>

#include "bubblelab/quadrature.hpp"
#include "bubblelab/types.hpp"

namespace bubblelab {

struct ConstantValue {
  double value = 0.0;
  double error = 0.0;
  std::string formula;
};

struct UniversalConstants {
  int N = 0;
  double beta = 0.0;
  ConstantValue A_N;        // (N(N-2))^{(N-2)/4}
  ConstantValue I_2star;    // Int U^{2*}
  ConstantValue I_grad;     // Int |grad U|^2
  ConstantValue I_pow;      // Int U^{2*-1}
  ConstantValue J_2;        // Int U^2
  ConstantValue J_beta;     // Int_{B_1} |y|^beta U^2 (unit-ball moment)
  ConstantValue J_beta_prime;  // Int |y_1|^{beta-2} y_1 U psi_1
  ConstantValue J_beta_dil;    // Int |y|^beta U^{2*-1} psi_0
  ConstantValue M_beta_m2;     // Int |y|^{beta-2} U^2
  ConstantValue H_beta;        // (1/2) M_{beta-2} (1 + (beta-2)/N), shift stiffness moment
};

struct DerivedConstants {
  ConstantValue B_bar;     // scaling-law prefactor for the configured chain
  ConstantValue B;         // dilation-Pohozaev balance constant (alias of C4)
  ConstantValue B_prime;   // boundary-gradient combination constant
  ConstantValue B1, B2;    // energy mu-derivative constants
  ConstantValue C1, C2;    // location-derivative constants
  ConstantValue C4;        // height-balance interaction constant
  ConstantValue c_bar_translation, c_bar_dilation;  // Gram normalizers of Z-products
};

UniversalConstants compute_universal(const DimensionParams& d, const PotentialSpec& pot,
                                     const QuadratureSpec& spec);

// m, wrapped describe the chain used for the B_bar nondimensionalization.
DerivedConstants derive_constants(const UniversalConstants& uc, const DimensionParams& d,
                                  const PotentialSpec& pot, int m = 1, bool wrapped = false);

std::string constants_to_json(const UniversalConstants& uc, const DerivedConstants& dc);

// Int U_i^{2*-1} U_j over R^N together with the far-field prediction
// A_N I_pow / (mu_i^{(N-2)/2} mu_j^{(N-2)/2} |x_i-x_j|^{N-2}).
struct InteractionResult {
  double value = 0.0;
  double error = 0.0;
  double asymptotic = 0.0;
  bool asymptotic_valid = false;  // requires mu |x_i - x_j| >= 10
};
InteractionResult interaction_integral(const Bubble& bi, const Bubble& bj,
                                       const DimensionParams& d, const QuadratureSpec& spec);

}  // namespace bubblelab
