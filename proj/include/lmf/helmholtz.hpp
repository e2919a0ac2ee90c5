#pragma once

#include "lmf/operators.hpp"

namespace lmf {

// u = solenoidal + gradient with gradient = grad(potential), div solenoidal
// = 0.  The k = 0 (mean) mode and the pure Nyquist modes belong to the
// solenoidal part: the projector is built from the Nyquist-free derivative
// multiplier, so "gradient part" means a gradient the grid can actually
// represent.
struct HelmholtzParts {
  VectorField3 solenoidal;
  VectorField3 gradient;
  ScalarField potential;
};

HelmholtzParts helmholtz_decompose(const VectorField3& u);

// Spectral-space split used by the semigroup and the steppers; writes the
// solenoidal and gradient coefficient arrays of u into sol/grad.
void helmholtz_split_hat(const SpectralVector& u, SpectralVector& sol,
                         SpectralVector& grad);

SpectralScalar helmholtz_potential_hat(const SpectralVector& u);

}  // namespace lmf
