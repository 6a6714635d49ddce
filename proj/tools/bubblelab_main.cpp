// bubblelab: construct, correct and verify multi-bubble solutions of the
// critical equation -Lap u + Q u = u^{(N+2)/(N-2)} on the 1D lattice.

#include <CLI11.hpp>
#include <cstring>
#include <iostream>

#include "bubblelab/pipeline.hpp"
#include "bubblelab/runconfig.hpp"

using namespace bubblelab;

int main(int argc, char** argv) {
  RunConfig cfg;
  // config file loads first; command-line flags then override field by field
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::strcmp(argv[i], "--config") == 0) {
      try {
        cfg = RunConfig::from_file(argv[i + 1]);
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
      }
    }
  }

  CLI::App app{"multi-bubble laboratory for the critical lattice equation"};
  app.require_subcommand(1);
  std::string config_path, field_path;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key = value configuration file");
    sub->add_option("--out", cfg.out_dir, "output directory");
    sub->add_option("--seed", cfg.seed, "RNG seed");
    sub->add_option("--mu", cfg.mu, "bubble height");
    sub->add_option("--L", cfg.L, "lattice spacing");
    sub->add_option("--m", cfg.m, "bubble count minus one");
    sub->add_option("--N", cfg.N, "dimension");
    sub->add_option("--beta", cfg.beta, "potential exponent");
    sub->add_option("--a", cfg.a, "potential amplitude (0 = calibrate)");
    sub->add_option("--tol", cfg.tol, "solver tolerance");
    sub->add_flag("--wrapped", cfg.wrapped, "wrapped (periodic) lattice");
  };

  auto* c_construct = app.add_subcommand("construct", "solve the full problem at one configuration");
  auto* c_reduce = app.add_subcommand("reduce", "solve the reduced system over L_list");
  auto* c_correct = app.add_subcommand("correct", "run the correction contraction only");
  auto* c_pohozaev = app.add_subcommand("pohozaev", "evaluate the local identities");
  auto* c_diagnose = app.add_subcommand("diagnose", "uniqueness/periodicity diagnostics");
  auto* c_nonexist = app.add_subcommand("nonexist", "nonexistence probe (Q(x_j) = q0 != 0)");
  auto* c_sweep = app.add_subcommand("sweep", "feasibility + scaling sweep to CSV");
  for (auto* sub : {c_construct, c_reduce, c_correct, c_pohozaev, c_diagnose, c_nonexist, c_sweep})
    add_common(sub);
  c_pohozaev->add_option("--field", field_path, "solution file (.axif) from construct");
  c_nonexist->add_option("--q0", cfg.q0, "potential value at the lattice points");
  auto* c_schema = app.add_subcommand("schema", "print the config file schema");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_schema->parsed()) {
      std::cout << RunConfig::schema_text();
      return 0;
    }
    if (c_construct->parsed()) return cmd_construct(cfg);
    if (c_reduce->parsed()) return cmd_reduce(cfg);
    if (c_correct->parsed()) return cmd_correct(cfg);
    if (c_pohozaev->parsed()) return cmd_pohozaev(cfg, field_path);
    if (c_diagnose->parsed()) return cmd_diagnose(cfg);
    if (c_nonexist->parsed()) return cmd_nonexist(cfg);
    if (c_sweep->parsed()) return cmd_sweep(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
