#pragma once

#include <array>
#include <complex>

#include <Eigen/Core>

#include "lmf/grid.hpp"

namespace lmf {

using RealArray = Eigen::ArrayXd;
using ComplexArray = Eigen::ArrayXcd;

// Real scalar field sampled on the grid points, x-fastest.
struct ScalarField {
  Grid3 grid;
  RealArray values;
};

// Spectral coefficients c_m of the centered-box basis e^{i k_m . x}:
// f(x_j) = sum_m c_m e^{i k_m . x_j}.  Same x-fastest slot layout as the
// physical array, slots ordered m = 0..n/2-1, -n/2..-1 per axis.
struct SpectralScalar {
  Grid3 grid;
  ComplexArray coef;
};

struct VectorField3 {
  std::array<ScalarField, 3> comp;
  const Grid3& grid() const { return comp[0].grid; }
};

struct SpectralVector {
  std::array<SpectralScalar, 3> comp;
  const Grid3& grid() const { return comp[0].grid; }
};

ScalarField make_scalar(const Grid3& grid, double fill = 0.0);
VectorField3 make_vector(const Grid3& grid, double fill = 0.0);
SpectralScalar make_spectral_scalar(const Grid3& grid);
SpectralVector make_spectral_vector(const Grid3& grid);

// Throws std::invalid_argument when any entry is NaN/Inf or when the three
// components disagree on the grid.
void require_finite(const ScalarField& f, const char* who);
void require_finite(const VectorField3& u, const char* who);
void require_same_grid(const VectorField3& u, const char* who);

// Pointwise Euclidean magnitude sqrt(u1^2 + u2^2 + u3^2).
RealArray magnitude(const VectorField3& u);

double max_abs(const VectorField3& u);

}  // namespace lmf
