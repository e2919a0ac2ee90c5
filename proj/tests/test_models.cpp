#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lmf/models.hpp"
#include "support/oracles.hpp"

using namespace lmf;

namespace {

constexpr double kPi = 3.14159265358979323846;

double max_field_diff(const VectorField3& a, const VectorField3& b) {
  double m = 0.0;
  for (int c = 0; c < 3; ++c) {
    m = std::max(m, (a.comp[c].values - b.comp[c].values).abs().maxCoeff());
  }
  return m;
}

}  // namespace

TEST_CASE("advective model on a compressive sine: N = (3a/4) sin(2ax) e1") {
  const Grid3 g = make_grid(16, 4.0);
  const double a = 2.0 * kPi / g.box_length;
  const VectorField3 u = oracle::sample_vector(g, [&](double x, double, double) {
    return std::array<double, 3>{std::sin(a * x), 0.0, 0.0};
  });
  const VectorField3 N = nonlinearity(u, ModelKind{ModelVariant::mod1});
  const VectorField3 ref = oracle::sample_vector(g, [&](double x, double, double) {
    return std::array<double, 3>{0.75 * a * std::sin(2.0 * a * x), 0.0, 0.0};
  });
  CHECK(max_field_diff(N, ref) < 1e-12);
}

TEST_CASE("advective model on a solenoidal shear: pure transport term") {
  const Grid3 g = make_grid(16, 4.0);
  const double a = 2.0 * kPi / g.box_length;
  const VectorField3 u = oracle::sample_vector(g, [&](double x, double y, double z) {
    return std::array<double, 3>{std::sin(a * y), std::sin(a * z),
                                 std::sin(a * x)};
  });
  // div u = 0, so N reduces to (u . grad) u.
  const VectorField3 N = nonlinearity(u, ModelKind{ModelVariant::mod1});
  const VectorField3 ref = oracle::sample_vector(g, [&](double x, double y, double z) {
    return std::array<double, 3>{a * std::sin(a * z) * std::cos(a * y),
                                 a * std::sin(a * x) * std::cos(a * z),
                                 a * std::sin(a * y) * std::cos(a * x)};
  });
  CHECK(max_field_diff(N, ref) < 1e-12);
}

TEST_CASE("divergence-form model on a compressive sine: N = (3a/2) sin(2ax) e1") {
  const Grid3 g = make_grid(16, 4.0);
  const double a = 2.0 * kPi / g.box_length;
  const VectorField3 u = oracle::sample_vector(g, [&](double x, double, double) {
    return std::array<double, 3>{std::sin(a * x), 0.0, 0.0};
  });
  const VectorField3 N =
      nonlinearity(u, ModelKind{ModelVariant::mod2, PressureLaw::quadratic});
  const VectorField3 ref = oracle::sample_vector(g, [&](double x, double, double) {
    return std::array<double, 3>{1.5 * a * std::sin(2.0 * a * x), 0.0, 0.0};
  });
  CHECK(max_field_diff(N, ref) < 1e-12);
}

TEST_CASE("divergence-form model on a constant-magnitude helix") {
  // |u| = 1 everywhere, so both pressure laws have constant pressure and the
  // whole nonlinearity is div(u x u).
  const Grid3 g = make_grid(16, 4.0);
  const double a = 2.0 * kPi / g.box_length;
  const VectorField3 u = oracle::sample_vector(g, [&](double x, double, double) {
    return std::array<double, 3>{std::cos(a * x), std::sin(a * x), 0.0};
  });
  const VectorField3 ref = oracle::sample_vector(g, [&](double x, double, double) {
    return std::array<double, 3>{-a * std::sin(2.0 * a * x),
                                 a * std::cos(2.0 * a * x), 0.0};
  });
  const VectorField3 Nq =
      nonlinearity(u, ModelKind{ModelVariant::mod2, PressureLaw::quadratic});
  const VectorField3 Nl =
      nonlinearity(u, ModelKind{ModelVariant::mod2, PressureLaw::linear});
  CHECK(max_field_diff(Nq, ref) < 1e-12);
  CHECK(max_field_diff(Nl, ref) < 1e-11);
}

TEST_CASE("energy flux vanishes for the divergence-identity models") {
  const Grid3 g = make_grid(16, 3.0);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const VectorField3 u = oracle::random_smooth_field(g, 5, 1.0, seed);
    const double f1 = energy_flux(u, ModelKind{ModelVariant::mod1});
    const double f2 =
        energy_flux(u, ModelKind{ModelVariant::mod2, PressureLaw::quadratic});
    CHECK(std::abs(f1) < 1e-9);
    CHECK(std::abs(f2) < 1e-9);
  }
  // The linear pressure law carries no such identity; a generic field shows
  // a visibly nonzero flux.
  const VectorField3 u = oracle::random_smooth_field(g, 5, 1.0, 3);
  CHECK(std::abs(energy_flux(
            u, ModelKind{ModelVariant::mod2, PressureLaw::linear})) > 1e-6);
}

TEST_CASE("real spherical harmonics match the Legendre-path oracle") {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::array<double, 3> v{gauss(rng), gauss(rng), gauss(rng)};
    const double r = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    if (r < 1e-6) continue;
    for (double& c : v) c /= r;
    for (int i = 0; i < 9; ++i) {
      CHECK(real_spherical_harmonic(i, v) ==
            doctest::Approx(oracle::harmonic_via_legendre(i, v))
                .epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(real_spherical_harmonic(9, {0, 0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(real_spherical_harmonic(-1, {0, 0, 1}),
                  std::invalid_argument);
}

TEST_CASE("sphere trace presets and harmonic combinations") {
  const std::array<double, 3> v{0.6, 0.0, 0.8};
  SphereTrace tr;
  tr.preset = SphereTrace::Preset::e2;
  CHECK(tr.eval(v) == std::array<double, 3>{0.0, 1.0, 0.0});
  tr.preset = SphereTrace::Preset::radial;
  CHECK(tr.eval(v) == v);

  tr.preset = SphereTrace::Preset::harmonic;
  tr.coef = {};
  tr.coef[0][0] = 2.0;
  tr.coef[2][6] = -1.5;
  const auto out = tr.eval(v);
  CHECK(out[0] == doctest::Approx(2.0 * real_spherical_harmonic(0, v)));
  CHECK(out[1] == 0.0);
  CHECK(out[2] == doctest::Approx(-1.5 * real_spherical_harmonic(6, v)));
}

TEST_CASE("smooth step: range, symmetry, monotonicity") {
  CHECK(smoothstep01(-1.0) == 0.0);
  CHECK(smoothstep01(0.0) == 0.0);
  CHECK(smoothstep01(1.0) == 1.0);
  CHECK(smoothstep01(2.0) == 1.0);
  CHECK(smoothstep01(0.5) == doctest::Approx(0.5));
  double prev = 0.0;
  for (int i = 1; i <= 100; ++i) {
    const double s = smoothstep01(i / 100.0);
    CHECK(s >= prev);
    CHECK(smoothstep01(i / 100.0) + smoothstep01(1.0 - i / 100.0) ==
          doctest::Approx(1.0).epsilon(1e-14));
    prev = s;
  }
}

TEST_CASE("initial data is exactly (-1)-homogeneous on the annulus") {
  const Grid3 g = make_grid(32, 32.0);
  InitialDataSpec spec;
  spec.trace.preset = SphereTrace::Preset::radial;
  spec.amplitude = 0.05;
  spec.inner_radius = 2.0;
  spec.outer_radius = 12.0;
  spec.cutoff_width = 2.0;
  const VectorField3 u = build_initial_data(spec, g);

  // With h = 1, any integer point x with both |x| and |2x| inside the flat
  // annulus region [delta, R_cut] is a grid point along with its double.
  const int mid = g.n / 2;
  const std::array<std::array<int, 3>, 4> probes{
      {{2, 1, 2}, {-3, 2, 1}, {1, -2, 2}, {4, 1, 1}}};
  for (const auto& p : probes) {
    const double r = std::sqrt(static_cast<double>(
        p[0] * p[0] + p[1] * p[1] + p[2] * p[2]));
    REQUIRE(r >= spec.inner_radius);
    REQUIRE(2.0 * r <= spec.outer_radius);
    const std::size_t at =
        g.index(mid + p[0], mid + p[1], mid + p[2]);
    const std::size_t at2 =
        g.index(mid + 2 * p[0], mid + 2 * p[1], mid + 2 * p[2]);
    for (int c = 0; c < 3; ++c) {
      const double v1 = u.comp[c].values[at];
      const double v2 = u.comp[c].values[at2];
      CHECK(v2 == doctest::Approx(0.5 * v1).epsilon(1e-14));
    }
    // Nonzero by construction for the radial trace.
    CHECK(std::abs(u.comp[0].values[at]) + std::abs(u.comp[1].values[at]) +
              std::abs(u.comp[2].values[at]) >
          0.0);
  }

  // Mollified core: identically zero for r <= delta/2.
  CHECK(u.comp[0].values[g.index(mid, mid, mid)] == 0.0);
  CHECK(u.comp[1].values[g.index(mid + 1, mid, mid)] == 0.0);
  // Cut off beyond R_cut + width.
  CHECK(u.comp[0].values[g.index(mid + 15, mid, mid)] == 0.0);
  CHECK(u.comp[2].values[g.index(mid, mid, mid - 15)] == 0.0);
}

TEST_CASE("initial data validation rejects inconsistent shapes") {
  const Grid3 g = make_grid(16, 8.0);
  InitialDataSpec spec;
  spec.amplitude = 0.05;
  spec.inner_radius = 0.5;
  spec.outer_radius = 2.0;
  spec.cutoff_width = 1.0;
  CHECK_NOTHROW(validate(spec, g));

  InitialDataSpec bad = spec;
  bad.amplitude = 0.0;
  CHECK_THROWS_AS(validate(bad, g), std::invalid_argument);
  bad = spec;
  bad.inner_radius = 0.0;
  CHECK_THROWS_AS(validate(bad, g), std::invalid_argument);
  bad = spec;
  bad.inner_radius = 2.5;
  CHECK_THROWS_AS(validate(bad, g), std::invalid_argument);
  bad = spec;
  bad.cutoff_width = -1.0;
  CHECK_THROWS_AS(validate(bad, g), std::invalid_argument);
  bad = spec;
  bad.outer_radius = 3.5;
  bad.cutoff_width = 1.0;
  CHECK_THROWS_AS(validate(bad, g), std::invalid_argument);
}

TEST_CASE("nonlinearity rejects non-finite input") {
  const Grid3 g = make_grid(8, 1.0);
  VectorField3 u = make_vector(g);
  u.comp[0].values[0] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(nonlinearity(u, ModelKind{}), std::invalid_argument);
}
