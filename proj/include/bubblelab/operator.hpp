#pragma once

// Discrete axisymmetric operator -Lap + Q - (2*-1) W^{2*-2} with the
// H_m-constraint saddle system. Second-order stencils on the graded tensor
// grid; r = 0 axis closed by even symmetry (the radial part becomes
// (N-1) d^2/dr^2 there). Dirichlet zero on the truncation boundary; the y1
// direction optionally wraps.

#include <memory>
#include <utility>
#include <vector>

#include "bubblelab/field.hpp"
#include "bubblelab/types.hpp"

namespace bubblelab {

// Active constraint modes on the axisymmetric subspace.
struct ConstraintMode {
  int bubble = 0;
  enum Kind { dilation = 0, translation_y1 = 1 } kind = dilation;
};

// Apply the plain discrete -Laplacian to nodal values (boundary rows zero).
Field discrete_neg_laplacian(const Field& u, int N);

struct LinearSolveStats {
  int factor_nonzeros = 0;
  bool singular = false;
};

class LinearizedSystem {
 public:
  LinearizedSystem(const Ansatz& a, std::shared_ptr<const AxiGrid> grid);
  ~LinearizedSystem();
  LinearizedSystem(LinearizedSystem&&) noexcept;
  LinearizedSystem& operator=(LinearizedSystem&&) noexcept;

  const std::vector<ConstraintMode>& modes() const;
  const Ansatz& ansatz() const;
  const std::shared_ptr<const AxiGrid>& grid() const;

  // phi with L phi = h + sum_k c_k W_k^{2*-2} Z_k and B phi = 0.
  std::pair<Field, std::vector<double>> solve(const Field& h) const;

  // quadrature of phi against the k-th constraint weight (diagnostic)
  double constraint_residual(const Field& phi) const;

  const LinearSolveStats& stats() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace bubblelab
