#pragma once

// Free-space Riesz potential (-Delta)^{-1} on axisymmetric fields: the angular
// direction is integrated into a ring kernel, targets get the nodal-mass sum
// with dyadic refinement of the singular cell.

#include <vector>

#include "bubblelab/field.hpp"
#include "bubblelab/types.hpp"

namespace bubblelab {

struct GreenSpec {
  int angle_nodes = 48;
  int singular_levels = 3;
};

// Angular average of |y-z|^{2-N} over the source ring through (z1, rz).
double ring_green(const DimensionParams& d, const Vec2& target, const Vec2& source,
                  int angle_nodes);

// (-Delta)^{-1} f at the target points: green_const * Int |y-z|^{2-N} f(z) dz.
std::vector<double> green_convolve(const Field& f, const DimensionParams& d,
                                   const std::vector<Vec2>& targets, const GreenSpec& spec);

}  // namespace bubblelab
