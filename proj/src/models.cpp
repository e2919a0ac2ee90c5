#include "lmf/models.hpp"

#include <cmath>
#include <stdexcept>

namespace lmf {
namespace {

using Complex = std::complex<double>;

// d_j of component i, spectral, Nyquist-free multiplier.
SpectralScalar partial_hat(const SpectralScalar& f, int axis) {
  SpectralScalar out{f.grid, f.coef};
  const auto kd = wavenumbers_deriv(f.grid);
  const Complex i(0.0, 1.0);
  std::size_t idx = 0;
  for (int iz = 0; iz < f.grid.n; ++iz)
    for (int iy = 0; iy < f.grid.n; ++iy)
      for (int ix = 0; ix < f.grid.n; ++ix, ++idx) {
        const double k = axis == 0 ? kd[ix] : (axis == 1 ? kd[iy] : kd[iz]);
        out.coef[idx] *= i * k;
      }
  return out;
}

SpectralVector mod1_hat(const SpectralVector& u_hat) {
  const Grid3& g = u_hat.grid();
  VectorField3 u = inverse(u_hat);
  // All nine derivatives; the diagonal ones are reused for div u.
  std::array<std::array<RealArray, 3>, 3> du;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      du[i][j] = inverse(partial_hat(u_hat.comp[i], j)).values;
  RealArray divu = du[0][0] + du[1][1] + du[2][2];
  VectorField3 N = make_vector(g);
  for (int i = 0; i < 3; ++i) {
    N.comp[i].values = u.comp[0].values * du[i][0] +
                       u.comp[1].values * du[i][1] +
                       u.comp[2].values * du[i][2] +
                       0.5 * u.comp[i].values * divu;
  }
  return forward(N);
}

SpectralVector mod2_hat(const SpectralVector& u_hat, PressureLaw law) {
  const Grid3& g = u_hat.grid();
  VectorField3 u = inverse(u_hat);
  // div(u x u)_i = sum_j d_j (u_i u_j): six distinct products by symmetry.
  std::array<std::array<SpectralScalar, 3>, 3> prod_hat;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      ScalarField p{g, u.comp[i].values * u.comp[j].values};
      prod_hat[i][j] = forward(p);
      if (j != i) prod_hat[j][i] = prod_hat[i][j];
    }
  ScalarField pressure{g, RealArray()};
  if (law == PressureLaw::quadratic) {
    pressure.values = 0.5 * (u.comp[0].values.square() +
                             u.comp[1].values.square() +
                             u.comp[2].values.square());
  } else {
    pressure.values = 0.5 * magnitude(u);
  }
  SpectralScalar p_hat = forward(pressure);
  SpectralVector out = make_spectral_vector(g);
  const auto kd = wavenumbers_deriv(g);
  const Complex im(0.0, 1.0);
  std::size_t idx = 0;
  for (int iz = 0; iz < g.n; ++iz)
    for (int iy = 0; iy < g.n; ++iy)
      for (int ix = 0; ix < g.n; ++ix, ++idx) {
        const double kv[3] = {kd[ix], kd[iy], kd[iz]};
        for (int i = 0; i < 3; ++i) {
          Complex s = kv[i] * p_hat.coef[idx];
          for (int j = 0; j < 3; ++j) s += kv[j] * prod_hat[i][j].coef[idx];
          out.comp[i].coef[idx] = im * s;
        }
      }
  return out;
}

}  // namespace

SpectralVector nonlinearity_hat(const SpectralVector& u_hat,
                                const ModelKind& kind) {
  return kind.variant == ModelVariant::mod1
             ? mod1_hat(u_hat)
             : mod2_hat(u_hat, kind.pressure_law);
}

VectorField3 nonlinearity(const VectorField3& u, const ModelKind& kind) {
  require_finite(u, "nonlinearity");
  SpectralVector u_hat = forward(u);
  apply_dealias_mask(u_hat);
  return inverse(nonlinearity_hat(u_hat, kind));
}

double energy_flux(const VectorField3& u, const ModelKind& kind) {
  // Pair N with the same dealiased field it is built from; only then does
  // discrete summation by parts cancel the divergence exactly.
  SpectralVector u_hat = forward(u);
  apply_dealias_mask(u_hat);
  const VectorField3 ud = inverse(u_hat);
  const VectorField3 N = inverse(nonlinearity_hat(u_hat, kind));
  const double h = u.grid().spacing();
  double acc = 0.0;
  for (int c = 0; c < 3; ++c)
    acc += (ud.comp[c].values * N.comp[c].values).sum();
  return acc * h * h * h;
}

double real_spherical_harmonic(int i, const std::array<double, 3>& unit) {
  const double x = unit[0], y = unit[1], z = unit[2];
  const double pi = M_PI;
  switch (i) {
    case 0: return 0.5 * std::sqrt(1.0 / pi);
    case 1: return std::sqrt(3.0 / (4.0 * pi)) * y;
    case 2: return std::sqrt(3.0 / (4.0 * pi)) * z;
    case 3: return std::sqrt(3.0 / (4.0 * pi)) * x;
    case 4: return 0.5 * std::sqrt(15.0 / pi) * x * y;
    case 5: return 0.5 * std::sqrt(15.0 / pi) * y * z;
    case 6: return 0.25 * std::sqrt(5.0 / pi) * (3.0 * z * z - 1.0);
    case 7: return 0.5 * std::sqrt(15.0 / pi) * x * z;
    case 8: return 0.25 * std::sqrt(15.0 / pi) * (x * x - y * y);
    default:
      throw std::invalid_argument("real_spherical_harmonic: index out of range");
  }
}

std::array<double, 3> SphereTrace::eval(
    const std::array<double, 3>& unit) const {
  switch (preset) {
    case Preset::e1: return {1.0, 0.0, 0.0};
    case Preset::e2: return {0.0, 1.0, 0.0};
    case Preset::e3: return {0.0, 0.0, 1.0};
    case Preset::radial: return unit;
    case Preset::harmonic: {
      std::array<double, 3> v{0.0, 0.0, 0.0};
      for (int c = 0; c < 3; ++c)
        for (int i = 0; i < 9; ++i)
          if (coef[c][i] != 0.0)
            v[c] += coef[c][i] * real_spherical_harmonic(i, unit);
      return v;
    }
  }
  throw std::invalid_argument("SphereTrace: unknown preset");
}

double smoothstep01(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / s);
  const double b = std::exp(-1.0 / (1.0 - s));
  return a / (a + b);
}

void validate(const InitialDataSpec& spec, const Grid3& grid) {
  if (!(spec.amplitude > 0.0)) {
    throw std::invalid_argument("initial data: amplitude must be > 0");
  }
  if (!(spec.inner_radius > 0.0)) {
    throw std::invalid_argument("initial data: inner_radius must be > 0");
  }
  if (!(spec.inner_radius < spec.outer_radius)) {
    throw std::invalid_argument(
        "initial data: inner_radius must be < outer_radius");
  }
  if (!(spec.cutoff_width > 0.0)) {
    throw std::invalid_argument("initial data: cutoff_width must be > 0");
  }
  if (!(spec.outer_radius + spec.cutoff_width <= 0.5 * grid.box_length)) {
    throw std::invalid_argument(
        "initial data: outer_radius + cutoff_width must be <= L/2");
  }
}

VectorField3 build_initial_data(const InitialDataSpec& spec,
                                const Grid3& grid) {
  validate(spec, grid);
  VectorField3 u = make_vector(grid);
  std::size_t idx = 0;
  for (int iz = 0; iz < grid.n; ++iz)
    for (int iy = 0; iy < grid.n; ++iy)
      for (int ix = 0; ix < grid.n; ++ix, ++idx) {
        const auto p = grid.point(ix, iy, iz);
        const double r =
            std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
        // chi_in vanishes identically for r <= delta/2, so the coordinate
        // singularity at the origin never contributes.
        const double chi_in =
            smoothstep01(2.0 * (r / spec.inner_radius) - 1.0);
        if (chi_in == 0.0) continue;
        const double chi_out =
            1.0 - smoothstep01((r - spec.outer_radius) / spec.cutoff_width);
        if (chi_out == 0.0) continue;
        const double amp = spec.amplitude * chi_in * chi_out / r;
        const std::array<double, 3> unit{p[0] / r, p[1] / r, p[2] / r};
        const auto sigma = spec.trace.eval(unit);
        for (int c = 0; c < 3; ++c) u.comp[c].values[idx] = amp * sigma[c];
      }
  return u;
}

}  // namespace lmf
