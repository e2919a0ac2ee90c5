#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace lmf {

// Periodic cubic grid on [-L/2, L/2)^3.  Points along each axis are
// x_j = -L/2 + j*h with h = L/n; fields are stored x-fastest, i.e. the flat
// index of the point (ix, iy, iz) is ix + n*(iy + n*iz).
struct Grid3 {
  int n = 0;
  double box_length = 0.0;

  double spacing() const { return box_length / n; }
  std::size_t size() const {
    return static_cast<std::size_t>(n) * n * n;
  }
  double coord(int j) const { return -0.5 * box_length + spacing() * j; }
  std::size_t index(int ix, int iy, int iz) const {
    return static_cast<std::size_t>(ix) +
           static_cast<std::size_t>(n) * (static_cast<std::size_t>(iy) +
                                          static_cast<std::size_t>(n) * iz);
  }
  std::array<double, 3> point(int ix, int iy, int iz) const {
    return {coord(ix), coord(iy), coord(iz)};
  }

  bool operator==(const Grid3&) const = default;
};

// Validates n even and >= 8 (required by the dealiasing mask and the
// conjugate-symmetry layout) and box_length > 0.
Grid3 make_grid(int n, double box_length);

// Integer mode index of the stored spectral slot j: 0..n/2-1, then -n/2..-1.
inline int mode_of(int j, int n) { return j < n / 2 ? j : j - n; }

// Wavenumber k_m = 2*pi*m/L per stored slot.  The "deriv" variant zeroes the
// Nyquist slot m = -n/2: odd-order derivatives of a real field must not
// produce a signal there, while even powers (Laplacian) keep the full value.
std::vector<double> wavenumbers_full(const Grid3& grid);
std::vector<double> wavenumbers_deriv(const Grid3& grid);

// Largest retained |mode| of the 2/3-rule dealiasing mask: (n-1)/3.
int dealias_keep(const Grid3& grid);

// Shortest periodic-image distance between two points of the box.
double periodic_distance(const Grid3& grid, const std::array<double, 3>& a,
                         const std::array<double, 3>& b);

}  // namespace lmf
