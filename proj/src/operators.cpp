#include "lmf/operators.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace lmf {
namespace {

using Complex = std::complex<double>;

// Applies op(idx, kx, ky, kz) over all slots with the derivative wavenumbers.
template <typename Op>
void for_each_mode_deriv(const Grid3& g, Op&& op) {
  const auto kd = wavenumbers_deriv(g);
  std::size_t idx = 0;
  for (int iz = 0; iz < g.n; ++iz)
    for (int iy = 0; iy < g.n; ++iy)
      for (int ix = 0; ix < g.n; ++ix, ++idx) op(idx, kd[ix], kd[iy], kd[iz]);
}

}  // namespace

SpectralVector gradient_hat(const SpectralScalar& f) {
  SpectralVector out = make_spectral_vector(f.grid);
  const Complex i(0.0, 1.0);
  for_each_mode_deriv(f.grid, [&](std::size_t idx, double kx, double ky,
                                  double kz) {
    const Complex v = f.coef[idx];
    out.comp[0].coef[idx] = i * kx * v;
    out.comp[1].coef[idx] = i * ky * v;
    out.comp[2].coef[idx] = i * kz * v;
  });
  return out;
}

SpectralScalar divergence_hat(const SpectralVector& u) {
  SpectralScalar out = make_spectral_scalar(u.grid());
  const Complex i(0.0, 1.0);
  for_each_mode_deriv(u.grid(), [&](std::size_t idx, double kx, double ky,
                                    double kz) {
    out.coef[idx] = i * (kx * u.comp[0].coef[idx] + ky * u.comp[1].coef[idx] +
                         kz * u.comp[2].coef[idx]);
  });
  return out;
}

SpectralVector curl_hat(const SpectralVector& u) {
  SpectralVector out = make_spectral_vector(u.grid());
  const Complex i(0.0, 1.0);
  for_each_mode_deriv(u.grid(), [&](std::size_t idx, double kx, double ky,
                                    double kz) {
    const Complex u0 = u.comp[0].coef[idx];
    const Complex u1 = u.comp[1].coef[idx];
    const Complex u2 = u.comp[2].coef[idx];
    out.comp[0].coef[idx] = i * (ky * u2 - kz * u1);
    out.comp[1].coef[idx] = i * (kz * u0 - kx * u2);
    out.comp[2].coef[idx] = i * (kx * u1 - ky * u0);
  });
  return out;
}

SpectralScalar laplacian_hat(const SpectralScalar& f) {
  SpectralScalar out{f.grid, f.coef};
  const auto k = wavenumbers_full(f.grid);
  std::size_t idx = 0;
  for (int iz = 0; iz < f.grid.n; ++iz)
    for (int iy = 0; iy < f.grid.n; ++iy)
      for (int ix = 0; ix < f.grid.n; ++ix, ++idx)
        out.coef[idx] *= -(k[ix] * k[ix] + k[iy] * k[iy] + k[iz] * k[iz]);
  return out;
}

VectorField3 gradient(const ScalarField& f) {
  return inverse(gradient_hat(forward(f)));
}

ScalarField divergence(const VectorField3& u) {
  return inverse(divergence_hat(forward(u)));
}

VectorField3 curl(const VectorField3& u) {
  return inverse(curl_hat(forward(u)));
}

ScalarField laplacian(const ScalarField& f) {
  return inverse(laplacian_hat(forward(f)));
}

void apply_dealias_mask(SpectralScalar& f) {
  const int n = f.grid.n;
  const int keep = dealias_keep(f.grid);
  std::size_t idx = 0;
  for (int iz = 0; iz < n; ++iz) {
    const bool kz = std::abs(mode_of(iz, n)) <= keep;
    for (int iy = 0; iy < n; ++iy) {
      const bool ky = kz && std::abs(mode_of(iy, n)) <= keep;
      for (int ix = 0; ix < n; ++ix, ++idx) {
        if (!(ky && std::abs(mode_of(ix, n)) <= keep)) f.coef[idx] = 0.0;
      }
    }
  }
}

void apply_dealias_mask(SpectralVector& u) {
  for (auto& c : u.comp) apply_dealias_mask(c);
}

namespace {

double lp_norm_impl(const Grid3& g, const RealArray& mag, double p,
                    const std::optional<BallRegion>& region) {
  if (!(p >= 1.0)) {
    throw std::invalid_argument("lp_norm: p must be >= 1");
  }
  const double h = g.spacing();
  auto in_region = [&](int ix, int iy, int iz) {
    if (!region) return true;
    return periodic_distance(g, g.point(ix, iy, iz), region->center) <=
           region->radius;
  };
  if (std::isinf(p)) {
    double m = 0.0;
    std::size_t idx = 0;
    for (int iz = 0; iz < g.n; ++iz)
      for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix, ++idx)
          if (in_region(ix, iy, iz)) m = std::max(m, mag[idx]);
    return m;
  }
  double acc = 0.0;
  std::size_t idx = 0;
  for (int iz = 0; iz < g.n; ++iz)
    for (int iy = 0; iy < g.n; ++iy)
      for (int ix = 0; ix < g.n; ++ix, ++idx)
        if (in_region(ix, iy, iz)) acc += std::pow(mag[idx], p);
  return std::pow(acc * h * h * h, 1.0 / p);
}

}  // namespace

double lp_norm(const ScalarField& f, double p,
               const std::optional<BallRegion>& region) {
  require_finite(f, "lp_norm");
  return lp_norm_impl(f.grid, f.values.abs(), p, region);
}

double lp_norm(const VectorField3& u, double p,
               const std::optional<BallRegion>& region) {
  require_finite(u, "lp_norm");
  return lp_norm_impl(u.grid(), magnitude(u), p, region);
}

double l2_norm_hat(const SpectralVector& u) {
  const double L = u.grid().box_length;
  double s = 0.0;
  for (const auto& c : u.comp) s += c.coef.abs2().sum();
  return std::sqrt(L * L * L * s);
}

}  // namespace lmf
