#pragma once

// Contraction solve of the correction equation and the outer loop driving the
// constraint multipliers to zero by adjusting heights and shifts.

#include <memory>
#include <vector>

#include "bubblelab/field.hpp"
#include "bubblelab/operator.hpp"
#include "bubblelab/types.hpp"

namespace bubblelab {

// l_L evaluated nodewise (analytic formula).
Field assemble_lL(const Ansatz& a, const std::shared_ptr<const AxiGrid>& g);

struct NLResult {
  Field field;
  int clamp_events = 0;  // nodes where W + phi < 0 used the positive part
};
NLResult eval_NL(const Ansatz& a, const Field& phi);

struct CorrectionResult {
  Field phi;
  std::vector<double> multipliers;
  std::vector<double> step_norms;  // ||phi_{k+1} - phi_k||_* trace
  double lL_norm_dstar = 0.0;
  double phi_norm_star = 0.0;
  double NL_norm_dstar = 0.0;
  double first_ratio = 0.0;  // step_norms[1] / step_norms[0]
  bool converged = false;
  bool aborted_divergent = false;
  int clamp_events = 0;
};

// Independent trajectories differ through the iteration start (a seeded bump
// of star-norm size start_bump) and the relaxation factor; the fixed point is
// the same.
struct ContractOptions {
  double tol = 1e-11;
  int max_iter = 12;
  double damping = 1.0;
  double start_bump = 0.0;
  std::uint64_t seed = 0;
};

CorrectionResult contract(const LinearizedSystem& sys, const WeightedNormParams& np, double tol,
                          int max_iter);
CorrectionResult contract(const LinearizedSystem& sys, const WeightedNormParams& np,
                          const ContractOptions& copt);

enum class SolveSymmetry { none, reflect, translate };

struct SolveFullOptions {
  double tol_multiplier = 1e-4;  // certificate: max |c| / ||l_L||_** below this
  double inner_tol = 1e-11;
  int max_outer = 8;
  int max_inner = 12;
  double inner_damping = 1.0;   // trajectory knobs (see ContractOptions)
  double inner_start_bump = 0.0;
  std::uint64_t seed = 0;
  SolveSymmetry symmetry = SolveSymmetry::none;
  GridBuildOptions grid;
  bool wrapped = false;  // build a periodic grid over the bubble period
  int wrapped_periods = 0;  // bubbles count when wrapped (domain = that many periods)
};

struct FullSolve {
  Ansatz ansatz;  // adjusted heights/shifts
  Field u;        // W + phi
  Field phi;
  std::vector<double> multipliers;
  std::vector<ConstraintMode> modes;
  double max_multiplier = 0.0;
  double lL_norm_dstar = 0.0;
  bool converged = false;
  int outer_iterations = 0;
  CorrectionResult last;
  std::shared_ptr<const AxiGrid> grid;
};

FullSolve solve_full(const Ansatz& a0, const SolveFullOptions& opt);

}  // namespace bubblelab
