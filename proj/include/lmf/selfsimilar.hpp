#pragma once

#include "lmf/evolution.hpp"

namespace lmf {

// x -> lambda * u(lambda x) by trigonometric interpolation: the coefficient
// tensor is contracted axis-by-axis against evaluation matrices
// E[j, m] = e^{i k_m lambda p_j}.  The Nyquist column uses cos(k lambda p)
// so real inputs produce real output.  Rejects lambda <= 0 and output points
// that lambda maps outside the source box.
VectorField3 rescale(const VectorField3& u, double lambda,
                     const Grid3& grid_out);

struct DefectReport {
  double value = 0.0;
  bool degenerate = false;  // both rescaled snapshots vanish on the annulus
};

// Relative L2 distance between sqrt(t1) u(sqrt(t1) x, t1) and
// sqrt(t2) u(sqrt(t2) x, t2) over the annulus r_min <= |x| <= r_max
// (defaults L/16, L/4).  Zero for an exactly self-similar trajectory.
DefectReport self_similarity_defect(const Trajectory& traj, double t1,
                                    double t2, double r_min = -1.0,
                                    double r_max = -1.0);

struct ProfileReport {
  VectorField3 profile;
  double time = 1.0;
  double linear_residual_norm = 0.0;
  double full_residual_norm = 0.0;
  double profile_norm = 0.0;  // L2 of U over the same evaluation ball
  enum class Source { evolved, semigroup } source = Source::evolved;
};

// Residual of the stationary profile equation
//   R(U) = -Delta U - kappa grad div U + N(U) - (x/2) . grad U - U/2,
// with x the centered box coordinate (non-periodic, so the report is only
// trusted on the evaluation ball |x| <= L/4).  Norms are L2 over that ball.
ProfileReport profile_residual(const VectorField3& U, const ModelKind& model,
                               const LameParams& params,
                               ProfileReport::Source source =
                                   ProfileReport::Source::evolved);

}  // namespace lmf
