#pragma once

// Finite-dimensional reduced problem: height balance on the lattice, the
// amplitude fixed point, first-order center shifts, the scaling-law fit, the
// feasibility window and the nonexistence probe. Pure algebra and quadrature;
// no PDE solves.

#include <optional>
#include <vector>

#include "bubblelab/constants.hpp"
#include "bubblelab/types.hpp"

namespace bubblelab {

struct LatticeState {
  int m = 1;           // bubble count minus one
  double L = 10.0;     // spacing
  double mu = 16.0;    // common height
  bool wrapped = false;  // periodic (wrapped) chain vs open chain
  std::vector<double> amplitudes;  // a_j from the nondimensionalized system
  std::vector<double> shifts_y1;   // s_j = x_{jL} - x_j along the axis

  std::vector<double> centers() const {
    std::vector<double> c(m + 1);
    for (int j = 0; j <= m; ++j)
      c[j] = j * L + (j < static_cast<int>(shifts_y1.size()) ? shifts_y1[j] : 0.0);
    return c;
  }
};

// Pairwise |x_i - x_j| on the chain; wrapped mode folds the index distance.
double chain_distance(const LatticeState& s, int i, int j);

// r_j = sum_{i != j} C4 / (mu^{N-2} |x_i - x_j|^{N-2}) - mu^{-(beta+2)}
std::vector<double> height_balance_residual(const LatticeState& s, const DerivedConstants& dc,
                                            const DimensionParams& d, double beta);

// Solve the single-height balance for the configured chain; exact closed form
// for the uniform interaction sum.
double solve_balanced_height(const LatticeState& s, const DerivedConstants& dc,
                             const DimensionParams& d, double beta);

struct AmplitudeSolve {
  std::vector<double> a;
  int iterations = 0;
  bool converged = false;
  bool newton_fallback = false;
  double c0 = 0.0, c1 = 0.0;  // bracketing of the solution entries
};

// a_j <- (B_bar sum_{i != j} a_i |i-j|^{-(N-2)})^{1/beta}, damped; Newton
// fallback after 200 sweeps.
AmplitudeSolve solve_lattice_amplitudes(int m, const DimensionParams& d, double beta,
                                        double B_bar, double tol, bool wrapped = false,
                                        const std::vector<double>* start = nullptr);

struct ShiftSolve {
  std::vector<double> shifts;     // s_j along e1
  std::vector<double> residuals;  // force balance residual per bubble
  double max_shift_mu2 = 0.0;     // max |s_j| mu^2
};

// First-order shifts from the force balance C1 s_j / mu^beta =
// sum_{i != j} +- C2 (N-2)^{-1}... pair force C2/(mu^{N-2} d^{N-1}) along e1.
ShiftSolve solve_shifts(const LatticeState& s, const DerivedConstants& dc,
                        const DimensionParams& d, double beta);

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_halfwidth = 0.0;      // regression confidence half-width
  double prefactor_residual = 0.0;   // |exp(intercept) - B_bar| / B_bar
  std::vector<double> mu_values;
};

ScalingFit scaling_fit(const DimensionParams& d, double beta, const DerivedConstants& dc,
                       const std::vector<double>& L_values, int m = 1, bool wrapped = false);

enum class FeasibilityVerdict { accept, reject_low, reject_high };

struct FeasibilityResult {
  FeasibilityVerdict verdict;
  std::string diagnostic;
};

// ACCEPT iff beta in (N-4, N-2); reject_low carries the balance-order
// contradiction, reject_high the assumption violation.
FeasibilityResult feasibility_check(const DimensionParams& d, double beta);

struct NonexistenceTerm {
  std::string name;
  double magnitude;
};

struct NonexistenceReport {
  double leading = 0.0;  // q0 J_2 / mu^2
  std::vector<NonexistenceTerm> competitors;
  double dominance = 0.0;  // leading / max competitor
  bool contradiction = false;
  double margin = 4.0;
};

// Projected-identity probe of the Q(x_j) != 0 scenario: the q0 J_2 / mu^2 term
// against every right-hand-side term, each by quadrature (phi-terms by the
// documented magnitude model).
NonexistenceReport nonexistence_probe(double q0, const LatticeState& s,
                                      const UniversalConstants& uc, const DimensionParams& d,
                                      const PotentialSpec& pot, double margin = 4.0);

}  // namespace bubblelab
