#pragma once

#include <cstdint>

#include "lmf/field.hpp"

namespace lmf {

// Seeded smooth random fields for tests and diagnostics.  White Gaussian
// noise on the grid is shaped by the spectral envelope
// exp(-(|m|/mode_scale)^2) in integer mode units; max_mode additionally
// truncates to |m_j| <= max_mode on every axis (0 = no truncation).  The
// generator is a fixed-algorithm mt19937_64 + Box-Muller pipeline, so a seed
// reproduces the field bit-for-bit on one platform.
ScalarField random_smooth_scalar(const Grid3& grid, std::uint64_t seed,
                                 double mode_scale = 0.0, int max_mode = 0);
VectorField3 random_smooth_field(const Grid3& grid, std::uint64_t seed,
                                 double mode_scale = 0.0, int max_mode = 0);

}  // namespace lmf
