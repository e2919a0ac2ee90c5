#pragma once

#include <optional>

#include "lmf/fft.hpp"

namespace lmf {

// Spectral-space differential operators.  Odd-order derivatives use the
// Nyquist-free multiplier i*k_d; the Laplacian uses the full |k|^2.
SpectralVector gradient_hat(const SpectralScalar& f);
SpectralScalar divergence_hat(const SpectralVector& u);
SpectralVector curl_hat(const SpectralVector& u);
SpectralScalar laplacian_hat(const SpectralScalar& f);

// Physical-space wrappers: forward, multiply, inverse.
VectorField3 gradient(const ScalarField& f);
ScalarField divergence(const VectorField3& u);
VectorField3 curl(const VectorField3& u);
ScalarField laplacian(const ScalarField& f);

// Zeroes every mode with |m| > (n-1)/3 on any axis (2/3 rule).  The mask also
// removes the Nyquist planes for all n.
void apply_dealias_mask(SpectralScalar& f);
void apply_dealias_mask(SpectralVector& u);

// Ball region for restricted norms; membership of a grid point uses the
// shortest periodic-image distance to the center.
struct BallRegion {
  std::array<double, 3> center{0.0, 0.0, 0.0};
  double radius = 0.0;
};

// Midpoint-rule L_p norm (h^3 per grid point); p = inf gives the grid max.
// The region indicator is evaluated at grid points, so region-restricted
// norms carry a first-order boundary error.
double lp_norm(const ScalarField& f, double p,
               const std::optional<BallRegion>& region = std::nullopt);
double lp_norm(const VectorField3& u, double p,
               const std::optional<BallRegion>& region = std::nullopt);

// L2 norm over the whole box evaluated in spectral space via Parseval
// (integral form: ||f||_2^2 = L^3 sum |c_m|^2).
double l2_norm_hat(const SpectralVector& u);

}  // namespace lmf
