#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lmf/decay.hpp"
#include "lmf/diagnostics.hpp"

namespace lmf {

// Flat `key = value` configuration with `#` comments and dotted section
// keys.  Unknown keys are errors; every diagnostic carries the line number.
// The full grammar and key list are documented in README.md.
struct ExperimentConfig {
  Grid3 grid{32, 32.0};
  ModelKind model;
  LameParams params;          // kappa
  InitialDataSpec init;       // radii resolved to absolute lengths
  StepperConfig stepper;
  std::vector<double> output_times{1.0};

  double mild_tol = 1e-10;
  int mild_max_iter = 25;
  int mild_nodes = 65;

  double decay_annulus_inner = 0.0;  // resolved default L/16
  double decay_annulus_outer = 0.0;  // resolved default L/4
  int decay_shells = 12;
  std::vector<std::array<int, 3>> decay_alphas{{0, 0, 0}};

  double diag_theta = 0.3;
  double diag_gamma = 0.5;
  std::array<double, 3> diag_center{0.0, 0.0, 0.0};
  double diag_t0 = -1.0;             // resolved default t_end
  double diag_radius = 0.0;          // resolved default L/8
  double diag_lambda = 0.05;
  double diag_apriori_radius = 0.0;  // resolved default L/8
  int diag_stride = 2;
  int diag_budget = 2000;

  std::uint64_t seed = 1;
  std::string output_dir = "out";
};

ExperimentConfig parse_config(const std::string& text);

// Canonical dump: every key on its own line in a fixed order, floats with 17
// significant digits.  parse_config(dump_config(c)) reproduces c.
std::string dump_config(const ExperimentConfig& cfg);

}  // namespace lmf
