#pragma once

// Run configuration: every module parameter with defaults, a key = value
// config-file reader and CLI override hooks. The full schema is printed by
// schema_text() and documented in the README.

#include <cstdint>
#include <string>
#include <vector>

#include "bubblelab/field.hpp"
#include "bubblelab/types.hpp"

namespace bubblelab {

struct RunConfig {
  int N = 7;
  double beta = 4.0;
  double a = 0.0;  // potential amplitude; 0 = calibrate from mu
  double L = 10.0;
  int m = 1;
  double mu = 16.0;
  double tol = 1e-9;
  std::uint64_t seed = 0;
  bool wrapped = false;
  double q0 = 1.0;       // nonexistence probe offset
  double q_period = 1.0;  // potential period (spacing L is a multiple)
  double vartheta = 0.0;  // 0 = default min{(N-4)/2, beta/2}/4
  std::string out_dir = "out";

  // sweeps
  std::vector<double> L_list{8.0, 16.0, 32.0, 64.0};
  std::vector<double> mu_list{16.0, 32.0, 64.0};

  // grid
  double grid_margin = 4.0;
  double grid_r_extent = 6.0;
  double grid_h_base = 0.12;
  double grid_core_nodes = 10.0;

  GridBuildOptions grid_options() const {
    GridBuildOptions g;
    g.margin = grid_margin;
    g.r_extent = grid_r_extent;
    g.h_base = grid_h_base;
    g.core_nodes = grid_core_nodes;
    return g;
  }

  WeightedNormParams norm_params() const {
    return vartheta > 0.0 ? WeightedNormParams::with_vartheta(vartheta)
                          : WeightedNormParams::make_default(N, beta);
  }

  static RunConfig from_file(const std::string& path);
  void set(const std::string& key, const std::string& value);
  static std::string schema_text();
};

}  // namespace bubblelab
