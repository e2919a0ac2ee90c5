#include "lmf/field.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lmf {

Grid3 make_grid(int n, double box_length) {
  if (n < 8 || n % 2 != 0) {
    throw std::invalid_argument("grid: n must be even and >= 8, got " +
                                std::to_string(n));
  }
  if (!(box_length > 0.0)) {
    throw std::invalid_argument("grid: box_length must be positive");
  }
  return Grid3{n, box_length};
}

std::vector<double> wavenumbers_full(const Grid3& grid) {
  std::vector<double> k(grid.n);
  const double unit = 2.0 * M_PI / grid.box_length;
  for (int j = 0; j < grid.n; ++j) k[j] = unit * mode_of(j, grid.n);
  return k;
}

std::vector<double> wavenumbers_deriv(const Grid3& grid) {
  std::vector<double> k = wavenumbers_full(grid);
  k[grid.n / 2] = 0.0;  // Nyquist slot
  return k;
}

int dealias_keep(const Grid3& grid) { return (grid.n - 1) / 3; }

double periodic_distance(const Grid3& grid, const std::array<double, 3>& a,
                         const std::array<double, 3>& b) {
  const double L = grid.box_length;
  double s = 0.0;
  for (int d = 0; d < 3; ++d) {
    double diff = std::remainder(a[d] - b[d], L);
    s += diff * diff;
  }
  return std::sqrt(s);
}

ScalarField make_scalar(const Grid3& grid, double fill) {
  ScalarField f{grid, RealArray::Constant(grid.size(), fill)};
  return f;
}

VectorField3 make_vector(const Grid3& grid, double fill) {
  return VectorField3{
      {make_scalar(grid, fill), make_scalar(grid, fill), make_scalar(grid, fill)}};
}

SpectralScalar make_spectral_scalar(const Grid3& grid) {
  return SpectralScalar{grid, ComplexArray::Zero(grid.size())};
}

SpectralVector make_spectral_vector(const Grid3& grid) {
  return SpectralVector{{make_spectral_scalar(grid), make_spectral_scalar(grid),
                         make_spectral_scalar(grid)}};
}

void require_finite(const ScalarField& f, const char* who) {
  if (!f.values.allFinite()) {
    throw std::invalid_argument(std::string(who) +
                                ": field contains NaN or Inf");
  }
}

void require_finite(const VectorField3& u, const char* who) {
  require_same_grid(u, who);
  for (const auto& c : u.comp) require_finite(c, who);
}

void require_same_grid(const VectorField3& u, const char* who) {
  if (!(u.comp[0].grid == u.comp[1].grid && u.comp[0].grid == u.comp[2].grid)) {
    throw std::invalid_argument(std::string(who) +
                                ": components disagree on the grid");
  }
}

RealArray magnitude(const VectorField3& u) {
  return (u.comp[0].values.square() + u.comp[1].values.square() +
          u.comp[2].values.square())
      .sqrt();
}

double max_abs(const VectorField3& u) {
  double m = 0.0;
  for (const auto& c : u.comp) m = std::max(m, c.values.abs().maxCoeff());
  return m;
}

}  // namespace lmf
