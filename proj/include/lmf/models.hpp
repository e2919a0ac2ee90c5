#pragma once

#include <cstdint>

#include "lmf/semigroup.hpp"

namespace lmf {

enum class ModelVariant { mod1, mod2 };
enum class PressureLaw { quadratic, linear };

struct ModelKind {
  ModelVariant variant = ModelVariant::mod1;
  // Only meaningful for mod2.  quadratic (p = |u|^2/2) makes the energy
  // pairing a perfect divergence and is the default; linear (p = |u|/2) is
  // kept as an option and carries no such identity.
  PressureLaw pressure_law = PressureLaw::quadratic;
};

// The quadratic term N(u):
//   mod1: u . grad u + (u/2) div u
//   mod2: div(u x u) + grad p(u)
// Products are formed pointwise in physical space after dealiasing the input
// (2/3 rule); derivatives are spectral.  The output is not re-truncated
// here; the steppers project it onto the retained modes.
VectorField3 nonlinearity(const VectorField3& u, const ModelKind& kind);

// Spectral-space core: input coefficients are assumed band-limited already,
// output is the raw (unmasked) transform of N.
SpectralVector nonlinearity_hat(const SpectralVector& u_hat,
                                const ModelKind& kind);

// Box integral of u . N(u) (midpoint rule).  Vanishes identically for mod1
// and mod2-quadratic, where the integrand is a total divergence.
double energy_flux(const VectorField3& u, const ModelKind& kind);

// Smooth trace sigma on the unit sphere: a named preset or a truncated real
// spherical-harmonic expansion (l <= 2, 9 basis functions per component).
struct SphereTrace {
  enum class Preset { e1, e2, e3, radial, harmonic };
  Preset preset = Preset::e1;
  // coef[c][i]: component c weight of basis function i, ordered
  // (0,0), (1,-1), (1,0), (1,1), (2,-2), (2,-1), (2,0), (2,1), (2,2).
  std::array<std::array<double, 9>, 3> coef{};

  std::array<double, 3> eval(const std::array<double, 3>& unit) const;
};

// Real spherical harmonic basis value i at a unit vector.
double real_spherical_harmonic(int i, const std::array<double, 3>& unit);

struct InitialDataSpec {
  SphereTrace trace;
  double amplitude = 0.05;
  double inner_radius = 0.0;   // mollification scale delta
  double outer_radius = 0.0;   // smooth cutoff start R_cut
  double cutoff_width = 0.0;
};

// C-infinity step: 0 for s <= 0, 1 for s >= 1, built from exp(-1/s).
double smoothstep01(double s);

// u0(x) = eps * chi_in(|x|/delta) * chi_out(|x|) * sigma(x/|x|) / |x|,
// exactly (-1)-homogeneous on the annulus delta <= |x| <= R_cut.
VectorField3 build_initial_data(const InitialDataSpec& spec,
                                const Grid3& grid);

void validate(const InitialDataSpec& spec, const Grid3& grid);

}  // namespace lmf
