#include "lmf/helmholtz.hpp"

namespace lmf {
namespace {

using Complex = std::complex<double>;

template <typename Op>
void for_each_mode_deriv(const Grid3& g, Op&& op) {
  const auto kd = wavenumbers_deriv(g);
  std::size_t idx = 0;
  for (int iz = 0; iz < g.n; ++iz)
    for (int iy = 0; iy < g.n; ++iy)
      for (int ix = 0; ix < g.n; ++ix, ++idx) op(idx, kd[ix], kd[iy], kd[iz]);
}

}  // namespace

void helmholtz_split_hat(const SpectralVector& u, SpectralVector& sol,
                         SpectralVector& grad) {
  const Grid3& g = u.grid();
  sol = make_spectral_vector(g);
  grad = make_spectral_vector(g);
  for_each_mode_deriv(g, [&](std::size_t idx, double kx, double ky,
                             double kz) {
    const double k2 = kx * kx + ky * ky + kz * kz;
    if (k2 > 0.0) {
      const Complex dot = (kx * u.comp[0].coef[idx] +
                           ky * u.comp[1].coef[idx] +
                           kz * u.comp[2].coef[idx]) /
                          k2;
      grad.comp[0].coef[idx] = kx * dot;
      grad.comp[1].coef[idx] = ky * dot;
      grad.comp[2].coef[idx] = kz * dot;
    }
    for (int c = 0; c < 3; ++c)
      sol.comp[c].coef[idx] = u.comp[c].coef[idx] - grad.comp[c].coef[idx];
  });
}

SpectralScalar helmholtz_potential_hat(const SpectralVector& u) {
  // grad part = i k q_hat, so q_hat = -i (k . u_hat)/|k|^2.
  SpectralScalar q = make_spectral_scalar(u.grid());
  const Complex mi(0.0, -1.0);
  for_each_mode_deriv(u.grid(), [&](std::size_t idx, double kx, double ky,
                                    double kz) {
    const double k2 = kx * kx + ky * ky + kz * kz;
    if (k2 > 0.0) {
      q.coef[idx] = mi *
                    (kx * u.comp[0].coef[idx] + ky * u.comp[1].coef[idx] +
                     kz * u.comp[2].coef[idx]) /
                    k2;
    }
  });
  return q;
}

HelmholtzParts helmholtz_decompose(const VectorField3& u) {
  require_finite(u, "helmholtz_decompose");
  SpectralVector u_hat = forward(u);
  SpectralVector sol_hat, grad_hat;
  helmholtz_split_hat(u_hat, sol_hat, grad_hat);
  HelmholtzParts parts{inverse(sol_hat), inverse(grad_hat),
                       inverse(helmholtz_potential_hat(u_hat))};
  return parts;
}

}  // namespace lmf
