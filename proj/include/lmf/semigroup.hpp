#pragma once

#include <vector>

#include "lmf/helmholtz.hpp"

namespace lmf {

struct LameParams {
  double kappa = 1.0;  // coefficient of the grad-div term; must be >= 0
};

void validate(const LameParams& params);

// Free-space heat kernel (4*pi*nu*t)^{-3/2} exp(-|x|^2/(4*nu*t)).  Point
// evaluator only; the periodic solver never sums image kernels.
struct HeatKernelQuery {
  double nu = 1.0;
  std::array<double, 3> x{0.0, 0.0, 0.0};
  double t = 1.0;
};

double heat_kernel(const HeatKernelQuery& q);

// Exact semigroup of -Delta - kappa*grad div on the grid: the solenoidal
// part decays by exp(-|k|^2 t), the gradient part by exp(-(|k|^2 +
// kappa*|k_d|^2) t).  t = 0 returns u0 unchanged.
VectorField3 lame_apply(const VectorField3& u0, double t,
                        const LameParams& params);

// In-place multiplier application on an already-split state.
void lame_apply_hat(SpectralVector& sol, SpectralVector& grad, double t,
                    const LameParams& params);

// Duhamel solve of d_t v - Delta v - kappa grad div v = f with v(0) = 0:
// v(t) = integral_0^t S(t-s) f(s) ds, composite Simpson in s (the sample
// count must be odd and >= 3), exact multiplier in space.
VectorField3 lame_solve_force(const std::vector<VectorField3>& f_samples,
                              double t, const LameParams& params);

// 3x3 tensor field; row i holds (F_i1, F_i2, F_i3), so (div F)_i =
// sum_j d_j F_ij.
using TensorField33 = std::array<VectorField3, 3>;

// Same Duhamel solve with forcing div F, computed spectrally.
VectorField3 lame_solve_divforce(const std::vector<TensorField33>& F_samples,
                                 double t, const LameParams& params);

// Independent construction of the same solution used as a cross-check:
// solve Delta q = div div F, then run two plain heat Duhamel solves --
// viscosity 1+kappa forced by grad q (a curl-free field), viscosity 1 forced
// by div F - grad q (a divergence-free field) -- and add them.
VectorField3 lame_solve_divforce_twostep(
    const std::vector<TensorField33>& F_samples, double t,
    const LameParams& params);

}  // namespace lmf
