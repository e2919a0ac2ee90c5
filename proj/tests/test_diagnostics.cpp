#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lmf/diagnostics.hpp"
#include "support/oracles.hpp"

using namespace lmf;

namespace {

// Static-in-time trajectory holding copies of one field at the given times.
Trajectory static_trajectory(const VectorField3& u,
                             const std::vector<double>& times) {
  Trajectory traj;
  traj.model = ModelKind{};
  traj.params = LameParams{1.0};
  for (double t : times) {
    traj.times.push_back(t);
    traj.snapshots.push_back(u);
  }
  return traj;
}

std::vector<double> uniform_times(double t0, double t1, int count) {
  std::vector<double> ts(count);
  for (int i = 0; i < count; ++i) {
    ts[i] = t0 + (t1 - t0) * i / (count - 1);
  }
  return ts;
}

VectorField3 coordinate_field(const Grid3& g) {
  return oracle::sample_vector(g, [](double x, double, double) {
    return std::array<double, 3>{x, 0.0, 0.0};
  });
}

}  // namespace

TEST_CASE("cylinder mean: constants are exact, linear fields give the center") {
  const Grid3 g = make_grid(32, 8.0);
  VectorField3 c = make_vector(g);
  c.comp[0] = make_scalar(g, 1.5);
  c.comp[2] = make_scalar(g, -0.5);
  const Trajectory traj = static_trajectory(c, uniform_times(0.0, 1.0, 5));
  const ParabolicCylinder cyl{{0.0, 0.0, 0.0}, 1.0, 1.0};
  const auto mean = cylinder_mean(traj, cyl);
  CHECK(mean[0] == doctest::Approx(1.5).epsilon(1e-13));
  CHECK(mean[1] == doctest::Approx(0.0));
  CHECK(mean[2] == doctest::Approx(-0.5).epsilon(1e-13));
  CHECK(oscillation_y(traj, cyl) == doctest::Approx(0.0));

  // u = x1: the grid ball around a grid point is symmetric, so the discrete
  // mean lands exactly on the center value.
  const Trajectory lin =
      static_trajectory(coordinate_field(g), uniform_times(0.0, 1.0, 5));
  const ParabolicCylinder off{{0.5, 0.0, 0.0}, 1.0, 1.0};
  CHECK(cylinder_mean(lin, off)[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(cylinder_mean(lin, cyl)[0] == doctest::Approx(0.0));
}

TEST_CASE("cylinder collection requires three time slices in the window") {
  const Grid3 g = make_grid(16, 8.0);
  const VectorField3 u = make_vector(g, 1.0);
  // Window is (t0 - R^2, t0] = (0.75, 1]; only two retained times inside.
  const Trajectory traj = static_trajectory(u, {0.1, 0.8, 1.0});
  CHECK_THROWS_AS(cylinder_mean(traj, {{0, 0, 0}, 1.0, 0.5}),
                  std::invalid_argument);
  // Same trajectory, wider window: three slices suffice.
  CHECK_NOTHROW(cylinder_mean(traj, {{0, 0, 0}, 1.0, 1.0}));
  CHECK_THROWS_AS(cylinder_mean(traj, {{0, 0, 0}, 1.0, 0.0}),
                  std::invalid_argument);
}

TEST_CASE("oscillation of a linear shear: absolute value R/2, exact invariances") {
  const Grid3 g = make_grid(24, 6.0);
  const VectorField3 u = coordinate_field(g);
  const Trajectory traj = static_trajectory(u, uniform_times(0.0, 3.0, 13));
  const double R = 1.5;
  const ParabolicCylinder cyl{{0.0, 0.0, 0.0}, 3.0, R};
  const double y = oscillation_y(traj, cyl);
  // Continuum value: cubic mean of |x1| over the ball is R/2.
  CHECK(y == doctest::Approx(0.5 * R).epsilon(0.02));

  // Shift invariance: adding a constant leaves Y untouched.
  VectorField3 shifted = u;
  shifted.comp[0].values += 7.0;
  const Trajectory traj_s =
      static_trajectory(shifted, uniform_times(0.0, 3.0, 13));
  CHECK(oscillation_y(traj_s, cyl) == doctest::Approx(y).epsilon(1e-12));

  // Homogeneity: scaling the field scales Y linearly.
  VectorField3 scaled = u;
  for (int c = 0; c < 3; ++c) scaled.comp[c].values *= -2.5;
  const Trajectory traj_m =
      static_trajectory(scaled, uniform_times(0.0, 3.0, 13));
  CHECK(oscillation_y(traj_m, cyl) == doctest::Approx(2.5 * y).epsilon(1e-12));
}

TEST_CASE("oscillation cascade: geometric decay for the shear, drop rule") {
  const Grid3 g = make_grid(32, 8.0);
  const VectorField3 u = coordinate_field(g);
  const Trajectory traj = static_trajectory(u, uniform_times(0.0, 4.0, 41));
  const double theta = 0.3;
  const OscillationReport report =
      oscillation_cascade(traj, {0.0, 0.0, 0.0}, 4.0, 2.0, theta, 8);

  // Levels 2.0 and 0.6 are resolved; 0.18 falls under 33 grid points.
  CHECK(report.truncated);
  CHECK(report.k_max_effective == 1);
  REQUIRE(report.radii.size() == 2);
  CHECK(report.radii[0] == doctest::Approx(2.0));
  CHECK(report.radii[1] == doctest::Approx(0.6));
  REQUIRE(report.ratios.size() == 1);
  CHECK(report.ratios_defined);
  // Y scales linearly in r for the shear, so the ratio reproduces theta.
  CHECK(report.ratios[0] == doctest::Approx(theta).epsilon(0.05));

  CHECK_THROWS_AS(oscillation_cascade(traj, {0, 0, 0}, 4.0, 2.0, 0.4, 4),
                  std::invalid_argument);
  CHECK_THROWS_AS(oscillation_cascade(traj, {0, 0, 0}, 4.0, 2.0, 0.0, 4),
                  std::invalid_argument);
  CHECK_THROWS_AS(oscillation_cascade(traj, {0, 0, 0}, 4.0, 0.05, 0.3, 4),
                  std::invalid_argument);  // even k = 0 under-resolved
}

TEST_CASE("local energy residual: validation of the test function") {
  const Grid3 g = make_grid(16, 8.0);
  const VectorField3 u = oracle::random_smooth_field(g, 3, 0.3, 3);
  const Trajectory traj = static_trajectory(u, uniform_times(0.0, 1.0, 5));

  std::vector<ScalarField> phi = default_test_function(traj);
  CHECK_NOTHROW(local_energy_residual(traj, ModelKind{}, LameParams{}, phi));

  std::vector<ScalarField> short_phi(phi.begin(), phi.end() - 1);
  CHECK_THROWS_AS(
      local_energy_residual(traj, ModelKind{}, LameParams{}, short_phi),
      std::invalid_argument);

  std::vector<ScalarField> negative = phi;
  negative[2].values[10] = -0.5;
  CHECK_THROWS_AS(
      local_energy_residual(traj, ModelKind{}, LameParams{}, negative),
      std::invalid_argument);

  std::vector<ScalarField> endpoint = phi;
  endpoint.front() = make_scalar(g, 0.2);
  CHECK_THROWS_AS(
      local_energy_residual(traj, ModelKind{}, LameParams{}, endpoint),
      std::invalid_argument);
}

TEST_CASE("default test function: window shape and temporal bump") {
  const Grid3 g = make_grid(16, 8.0);
  const VectorField3 u = make_vector(g, 0.1);
  const Trajectory traj = static_trajectory(u, uniform_times(0.0, 1.0, 5));
  const auto phi = default_test_function(traj);
  REQUIRE(phi.size() == 5);
  for (const auto& p : phi) CHECK(p.values.minCoeff() >= 0.0);
  CHECK(phi.front().values.abs().maxCoeff() == 0.0);
  CHECK(phi.back().values.abs().maxCoeff() == 0.0);
  // Center point carries the full bump weight 16 s^2 (1-s)^2 at s = 1/2.
  const std::size_t center = g.index(8, 8, 8);
  CHECK(phi[2].values[center] == doctest::Approx(1.0));
  // Window vanishes beyond L/4.
  CHECK(phi[2].values[g.index(8 + 5, 8, 8)] == doctest::Approx(0.0));
}

TEST_CASE("local energy residual converges at second order for an exact shear") {
  // u = e^{-a^2 t} sin(a y) e1 solves the advective model exactly (the
  // nonlinearity vanishes), so the only residual is time quadrature.  A
  // band-limited test function keeps the space sums exact.
  const Grid3 g = make_grid(16, 4.0);
  const double a = 2.0 * M_PI / g.box_length;
  const LameParams params{2.0};

  auto phi_for = [&](const std::vector<double>& times) {
    std::vector<ScalarField> phi;
    const double t0 = times.front();
    const double t1 = times.back();
    for (double t : times) {
      const double s = (t - t0) / (t1 - t0);
      const double bump = 16.0 * s * s * (1.0 - s) * (1.0 - s);
      phi.push_back(oracle::sample_scalar(g, [&](double x, double y, double z) {
        return bump * 0.125 * (1.0 + std::cos(a * x)) *
               (1.0 + std::cos(a * y)) * (1.0 + std::cos(a * z));
      }));
    }
    return phi;
  };

  auto residual_at = [&](int count) {
    const auto times = uniform_times(0.0, 0.5, count);
    Trajectory traj;
    traj.model = ModelKind{ModelVariant::mod1};
    traj.params = params;
    for (double t : times) {
      traj.times.push_back(t);
      traj.snapshots.push_back(
          oracle::sample_vector(g, [&](double, double y, double) {
            return std::array<double, 3>{
                std::exp(-a * a * t) * std::sin(a * y), 0.0, 0.0};
          }));
    }
    return std::abs(
        local_energy_residual(traj, traj.model, params, phi_for(times)));
  };

  const double r1 = residual_at(11);
  const double r2 = residual_at(21);
  const double r3 = residual_at(41);
  INFO("residuals ", r1, " ", r2, " ", r3);
  CHECK(r2 > 0.0);
  CHECK(std::log2(r1 / r2) > 1.8);
  CHECK(std::log2(r2 / r3) > 1.8);
}

TEST_CASE("local energy residual is small on a computed small-data run") {
  const Grid3 g = make_grid(16, 16.0);
  InitialDataSpec spec;
  spec.amplitude = 0.05;
  spec.inner_radius = 1.5;
  spec.outer_radius = 5.0;
  spec.cutoff_width = 2.0;
  const VectorField3 u0 = build_initial_data(spec, g);
  StepperConfig cfg;
  cfg.dt = 0.01;
  cfg.t_end = 0.32;
  cfg.scheme = Scheme::etd_rk4;
  cfg.output_times = uniform_times(0.01, 0.31, 31);
  const Trajectory traj =
      evolve(u0, ModelKind{ModelVariant::mod1}, LameParams{1.0}, cfg);
  const auto phi = default_test_function(traj);
  const double res =
      local_energy_residual(traj, traj.model, traj.params, phi);
  INFO("computed-run residual ", res);
  CHECK(std::abs(res) < 1e-4);
}

TEST_CASE("a priori quantities: constants against the counted ball volume") {
  const Grid3 g = make_grid(32, 8.0);
  VectorField3 u = make_vector(g);
  u.comp[0] = make_scalar(g, 2.0);
  const Trajectory traj = static_trajectory(u, uniform_times(0.0, 0.4, 5));
  const double R = 2.0;
  const EnergyReport report = apriori_quantities(traj, u, R, 0.1);

  std::size_t count = 0;
  for (int iz = 0; iz < g.n; ++iz)
    for (int iy = 0; iy < g.n; ++iy)
      for (int ix = 0; ix < g.n; ++ix) {
        if (periodic_distance(g, g.point(ix, iy, iz), {0, 0, 0}) <=
            R + 1e-9 * g.box_length)
          ++count;
      }
  const double vol = count * std::pow(g.spacing(), 3);
  CHECK(report.alpha_R == doctest::Approx(4.0 * vol).epsilon(1e-10));
  // No gradients: A_R is the kinetic term alone.
  CHECK(report.A_R == doctest::Approx(2.0 * vol).epsilon(1e-10));
  // The discrete ball volume tracks the continuum one at this resolution.
  CHECK(vol == doctest::Approx(4.0 / 3.0 * M_PI * R * R * R).epsilon(0.02));

  CHECK_THROWS_AS(apriori_quantities(traj, u, -1.0, 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS(apriori_quantities(traj, u, R, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(apriori_quantities(traj, u, R, 0.1, 0),
                  std::invalid_argument);
  const VectorField3 wrong = make_vector(make_grid(16, 8.0), 1.0);
  CHECK_THROWS_AS(apriori_quantities(traj, wrong, R, 0.1),
                  std::invalid_argument);
}

TEST_CASE("a priori quantities: monotone in radius, window, and lattice refinement") {
  const Grid3 g = make_grid(16, 8.0);
  const VectorField3 u0 = oracle::random_smooth_field(g, 3, 0.5, 57);
  StepperConfig cfg;
  cfg.dt = 0.02;
  cfg.t_end = 0.4;
  cfg.output_times = uniform_times(0.05, 0.35, 7);
  const Trajectory traj =
      evolve(u0, ModelKind{ModelVariant::mod1}, LameParams{1.0}, cfg);
  const VectorField3& head = traj.snapshots.front();

  const double a_small = apriori_quantities(traj, head, 1.0, 0.1).A_R;
  const double a_large = apriori_quantities(traj, head, 2.0, 0.1).A_R;
  CHECK(a_large >= a_small);

  const double w_small = apriori_quantities(traj, head, 1.5, 0.05).A_R;
  const double w_large = apriori_quantities(traj, head, 1.5, 0.15).A_R;
  CHECK(w_large >= w_small);

  const double coarse = apriori_quantities(traj, head, 1.5, 0.1, 4).A_R;
  const double fine = apriori_quantities(traj, head, 1.5, 0.1, 1).A_R;
  CHECK(coarse <= fine);
}

TEST_CASE("parabolic Holder seminorm: linear shear saturates at 1, budget extends") {
  const Grid3 g = make_grid(16, 8.0);
  const VectorField3 u = coordinate_field(g);
  const Trajectory traj = static_trajectory(u, uniform_times(0.0, 1.0, 5));
  const ParabolicCylinder cyl{{0.0, 0.0, 0.0}, 1.0, 1.0};

  // Nearest-neighbor x pairs realize |du| / |dx| = 1 exactly; no admissible
  // pair exceeds it at gamma = 1.
  const double sup = holder_seminorm(traj, 1.0, cyl, 500);
  CHECK(sup == doctest::Approx(1.0).epsilon(1e-12));

  const double small_budget = holder_seminorm(traj, 0.7, cyl, 200, 99);
  const double big_budget = holder_seminorm(traj, 0.7, cyl, 4000, 99);
  CHECK(big_budget >= small_budget);

  CHECK_THROWS_AS(holder_seminorm(traj, 0.0, cyl, 100), std::invalid_argument);
  CHECK_THROWS_AS(holder_seminorm(traj, 1.2, cyl, 100), std::invalid_argument);
  CHECK_THROWS_AS(holder_seminorm(traj, 0.5, {{0, 0, 0}, 1.0, -1.0}, 100),
                  std::invalid_argument);
}
