#pragma once

// Axisymmetric collocation grid and nodal fields. Grids are tensor products of
// smoothly graded axes (arctan-CDF grading keeps the 3-point stencils second
// order); fields are immutable-size nodal arrays with local polynomial
// sampling for off-node evaluation.

#include <functional>
#include <memory>
#include <vector>

#include "bubblelab/types.hpp"

namespace bubblelab {

struct GridCluster {
  double center = 0.0;
  double h = 0.05;      // target spacing at the cluster center
  double width = 0.25;  // Lorentzian width of the refined zone
};

struct AxisSpec {
  double lo = 0.0;
  double hi = 1.0;
  double h_base = 0.1;
  std::vector<GridCluster> clusters;
};

// Monotone node distribution from the arctan cumulative density.
std::vector<double> build_graded_axis(const AxisSpec& spec);

struct AxiGrid {
  std::vector<double> y1;  // strictly increasing
  std::vector<double> r;   // r.front() == 0
  bool periodic_y1 = false;
  double period = 0.0;

  std::size_t n1() const { return y1.size(); }
  std::size_t nr() const { return r.size(); }
  std::size_t size() const { return n1() * nr(); }
  std::size_t idx(std::size_t i, std::size_t j) const { return i * nr() + j; }
  Vec2 node(std::size_t i, std::size_t j) const { return {y1[i], r[j]}; }

  // trapezoidal weights per direction (periodic wrap in y1 when enabled)
  std::vector<double> wy1, wr;
  void finalize();

  static std::shared_ptr<const AxiGrid> tensor(const AxisSpec& axis_y1, const AxisSpec& axis_r);
  // One-period axis tiled k times; exact translation symmetry between periods.
  static std::shared_ptr<const AxiGrid> periodic_tensor(const AxisSpec& axis_one_period,
                                                        int periods, const AxisSpec& axis_r);
};

struct Field {
  std::shared_ptr<const AxiGrid> grid;
  std::vector<double> v;

  Field() = default;
  explicit Field(std::shared_ptr<const AxiGrid> g) : grid(std::move(g)), v(grid->size(), 0.0) {}

  double& at(std::size_t i, std::size_t j) { return v[grid->idx(i, j)]; }
  double at(std::size_t i, std::size_t j) const { return v[grid->idx(i, j)]; }

  // Local polynomial sampling; order 1 = bilinear, 3 = bicubic least squares
  // over a 4x4 stencil (even reflection across the axis, wrap across periods).
  double sample(const Vec2& p, int order = 3) const;
  void sample_gradient(const Vec2& p, double& value, double& d_y1, double& d_r) const;
};

// Nodewise synthesis helpers.
Field field_from(const std::shared_ptr<const AxiGrid>& g,
                 const std::function<double(const Vec2&)>& f);
Field field_W(const Ansatz& a, const std::shared_ptr<const AxiGrid>& g);

// Bubble-adapted sup norms over grid nodes.
double norm_star(const Field& f, const Ansatz& a, const WeightedNormParams& p);
double norm_dstar(const Field& f, const Ansatz& a, const WeightedNormParams& p);

// Default solver grid for a lattice ansatz: margin beyond the outer cutoffs,
// cores resolved with >= 8 nodes per 1/mu.
struct GridBuildOptions {
  double margin = 4.0;
  double r_extent = 6.0;
  double h_base = 0.12;
  double core_nodes = 10.0;  // nodes per core radius 1/mu
  double core_width_factor = 3.0;
};
std::shared_ptr<const AxiGrid> make_solver_grid(const Ansatz& a, const GridBuildOptions& opt);

}  // namespace bubblelab
