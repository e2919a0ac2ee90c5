#pragma once

#include "lmf/selfsimilar.hpp"

namespace lmf {

struct ShellTable {
  std::array<int, 3> alpha{0, 0, 0};
  std::vector<double> radii;
  std::vector<double> sup_values;  // max |d^alpha f| over |x| in [r-h, r+h]
};

// Shellwise sup of |d^alpha f| (spectral derivative, |alpha| <= 2; alpha = 0
// skips the transforms entirely).  Radii must be strictly increasing, at
// least 2*spacing, and every shell must contain grid points.
ShellTable shell_sup(const VectorField3& f, const std::array<int, 3>& alpha,
                     const std::vector<double>& radii);

// 12 shells spaced uniformly in log(1+r) over [L/16, L/4].
std::vector<double> default_shell_radii(const Grid3& grid, int count = 12);

struct DecayFit {
  double slope = 0.0;      // d log sup / d log(1+r)
  double intercept = 0.0;
  double r2 = 0.0;
  int shells_used = 0;
  std::vector<int> excluded;  // indices dropped for zero sup
  ShellTable table;
};

// Least-squares line on (log(1+r), log sup).  Zero sups are excluded with a
// warning entry; fewer than 5 surviving shells is an error.
DecayFit fit_decay(const ShellTable& table);

struct DecayReportEntry {
  std::array<int, 3> alpha{0, 0, 0};
  bool below_noise_floor = false;  // max sup < 1e3 * eps * ||U||_inf
  DecayFit difference_fit;         // for U - S(1)u0
  DecayFit profile_fit;            // for U alone
};

// Per-alpha decay fits of U - S_kappa(1)u0 where U = u(., 1), plus the
// comparison fit of U itself.  Pass the trajectory's own t = 0 snapshot as
// u0 so both sides carry the identical retained-mode content; any mismatch
// shows up as a flat truncation artifact in the difference.
std::vector<DecayReportEntry> decay_report(
    const Trajectory& traj, const VectorField3& u0, const LameParams& params,
    const std::vector<std::array<int, 3>>& alphas,
    const std::vector<double>& radii = {});

}  // namespace lmf
