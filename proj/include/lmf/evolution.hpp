#pragma once

#include <optional>
#include <vector>

#include "lmf/models.hpp"

namespace lmf {

enum class Scheme { etd_rk2, etd_rk4 };

struct StepperConfig {
  std::optional<double> dt;   // exactly one of dt / cfl
  std::optional<double> cfl;  // in (0, 1]; dt recomputed each step
  double t_end = 1.0;
  Scheme scheme = Scheme::etd_rk4;
  bool dealias = true;
  // Steps land on these times exactly and the states there are retained
  // (t = 0 and t_end are always retained; duplicates are merged).
  std::vector<double> output_times;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<VectorField3> snapshots;
  ModelKind model;
  LameParams params;
  // Per-step series: E(t) = ||u||_2^2 / 2 and the dissipation
  // ||grad u||_2^2 + kappa ||div u||_2^2, recorded at every accepted step.
  std::vector<double> energy_times;
  std::vector<double> energy;
  std::vector<double> dissipation;

  const VectorField3& at_time(double t, const char* who) const;
};

// Exponential time differencing on the Helmholtz-split state: the Lame part
// is the exact multiplier per family, the nonlinear part follows the chosen
// Runge-Kutta rule (Cox-Matthews for etd_rk4).  With dealias on, u0 is
// projected once and every N evaluation is re-projected, so the retained-mode
// system satisfies the energy identity exactly in continuous time.
// Throws NumericalAbort when ||u||_inf exceeds 1e6 x its initial value.
Trajectory evolve(const VectorField3& u0, const ModelKind& model,
                  const LameParams& params, const StepperConfig& cfg);

// Advective step restriction only (the stiff linear part is exact):
// dt = cfl * spacing / max(||u||_inf, spacing).
double cfl_dt(const VectorField3& u, const Grid3& grid, double cfl,
              const LameParams& params);

struct MildResult {
  Trajectory trajectory;  // snapshots at every quadrature node
  std::vector<double> sup_diffs;  // sup-in-time L2 of successive iterates
  std::vector<double> ratios;     // consecutive quotients of sup_diffs
  int iterations = 0;
  bool converged = false;
};

// Picard iteration on the Duhamel form u(t) = S(t)u0 - int_0^t S(t-s)
// N(u(s)) ds over a fixed uniform node grid (node_count odd, default 65).
// Even-index targets use composite Simpson; odd-index targets append a
// backward three-point parabola.  Aborts (NumericalAbort) when the
// difference ratio is >= 1 for three consecutive iterations or max_iter is
// exhausted before reaching tol.
MildResult mild_solve(const VectorField3& u0, const ModelKind& model,
                      const LameParams& params, double t_end, double tol,
                      int max_iter, int node_count = 65);

}  // namespace lmf
