#pragma once

// Subcommand implementations behind the CLI: construct | reduce | correct |
// pohozaev | diagnose | nonexist | sweep. Each writes its artifacts under
// cfg.out_dir and returns a process status (0 = success, 2 = stage failure).

#include <string>

#include "bubblelab/correction.hpp"
#include "bubblelab/runconfig.hpp"

namespace bubblelab {

// Lattice ansatz for the configuration; a == 0 calibrates the potential
// amplitude so the ansatz energy is mu-stationary at cfg.mu.
Ansatz make_lattice_ansatz(const RunConfig& cfg);

// Amplitude with dI/dmu(W) = 0 at mu_target (the derivative is affine in a).
double calibrate_amplitude(const DimensionParams& d, double beta, double L, int m, bool wrapped,
                           double mu_target);

// Shared construct path used by construct/pohozaev/diagnose.
FullSolve run_construct(const RunConfig& cfg, double mu_perturbation = 0.0,
                        double tol_scale = 1.0);

int cmd_construct(const RunConfig& cfg);
int cmd_reduce(const RunConfig& cfg);
int cmd_correct(const RunConfig& cfg);
int cmd_pohozaev(const RunConfig& cfg, const std::string& field_path);
int cmd_diagnose(const RunConfig& cfg);
int cmd_nonexist(const RunConfig& cfg);
int cmd_sweep(const RunConfig& cfg);

}  // namespace bubblelab
