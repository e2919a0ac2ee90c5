#pragma once

#include <cstdint>

#include "lmf/evolution.hpp"

namespace lmf {

// Space-time cylinder B(x0, R) x (t0 - R^2, t0].  Ball membership of grid
// points uses the shortest periodic-image distance.
struct ParabolicCylinder {
  std::array<double, 3> center{0.0, 0.0, 0.0};
  double t0 = 0.0;
  double radius = 0.0;
};

// Mean of u over the cylinder: midpoint rule in space over ball grid points,
// trapezoid over the retained times falling in the window (at least three
// required).
std::array<double, 3> cylinder_mean(const Trajectory& traj,
                                    const ParabolicCylinder& cyl);

// Cubic-mean oscillation (average of |u - mean|^3 over the cylinder)^(1/3).
double oscillation_y(const Trajectory& traj, const ParabolicCylinder& cyl);

struct OscillationReport {
  double theta = 0.0;
  std::vector<double> radii;     // theta^k R, k = 0..k_eff
  std::vector<double> y_values;
  std::vector<double> ratios;    // y_{k+1}/y_k; NaN when the denominator is 0
  bool ratios_defined = true;
  bool truncated = false;        // smallest cylinders dropped as under-resolved
  int k_max_effective = 0;
};

// Y across the radii theta^k R.  A sub-cylinder is dropped (and the report
// flagged truncated) when its ball holds fewer than 33 grid points or fewer
// than 3 time slices.
OscillationReport oscillation_cascade(const Trajectory& traj,
                                      const std::array<double, 3>& x0,
                                      double t0, double R, double theta,
                                      int k_max);

// LHS - RHS of the local energy identity
//   int int (|grad u|^2 + kappa (div u)^2) phi
//     = int int (|u|^2/2)(d_t phi + Delta phi)
//     + int int (|u|^2/2 - kappa div u) u . grad phi,
// assembled with spectral space derivatives, centered differences for
// d_t phi, and trapezoid time quadrature.  phi must be one nonnegative
// scalar field per retained time, vanishing at the first and last times.
double local_energy_residual(const Trajectory& traj, const ModelKind& model,
                             const LameParams& params,
                             const std::vector<ScalarField>& phi);

// Default space-time test function for the identity: a radial smoothstep
// window of radius L/4 times a temporal bump vanishing at both ends of the
// trajectory.
std::vector<ScalarField> default_test_function(const Trajectory& traj);

struct EnergyReport {
  double R = 0.0;
  double lambda_window = 0.0;       // time window is (0, lambda * R^2)
  double alpha_R = 0.0;             // sup_c int_B(c,R) |u0|^2
  double A_R = 0.0;                 // sup_c esssup_t int_B |u|^2/2
                                    //   + sup_c int_0^{lam R^2} int_B
                                    //     (|grad u|^2 + kappa (div u)^2)
  int stride = 2;                   // center lattice stride in grid spacings
  std::vector<double> alpha_per_center;
  std::vector<double> a_per_center;  // the two-term sum per center
};

// alpha(R) and A_R(lambda) maximized over the grid-point center lattice with
// the documented stride.  Ball integrals at all centers at once come from an
// FFT circular convolution with the ball indicator.
EnergyReport apriori_quantities(const Trajectory& traj,
                                const VectorField3& u0, double R,
                                double lambda, int stride = 2);

// Sampled lower bound of the parabolic Holder seminorm
//   sup |u(z1) - u(z2)| / (|x1 - x2| + sqrt|t1 - t2|)^gamma
// over seeded random pairs (drawn sequentially, so a larger budget extends
// the same sample) plus all nearest-neighbor pairs in space and time.
double holder_seminorm(const Trajectory& traj, double gamma,
                       const ParabolicCylinder& region, int sample_budget,
                       std::uint64_t seed = 12345);

}  // namespace lmf
