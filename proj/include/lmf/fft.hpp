#pragma once

#include "lmf/field.hpp"

namespace lmf {

// Forward transform, normalized so that inverse(forward(f)) = f up to
// roundoff.  The coefficient of mode m is (1/n^3) sum_j f_j e^{-i k_m . x_j}
// with x_j the centered-box points, so a pure cosine cos(2*pi*x1/L) lands
// exactly 1/2 on each of the two slots m = (+-1, 0, 0).
SpectralScalar forward(const ScalarField& f);
ScalarField inverse(const SpectralScalar& F);

SpectralVector forward(const VectorField3& u);
VectorField3 inverse(const SpectralVector& U);

}  // namespace lmf
