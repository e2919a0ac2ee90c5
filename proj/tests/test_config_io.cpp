#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "lmf/config.hpp"
#include "lmf/errors.hpp"
#include "lmf/snapshot.hpp"

using namespace lmf;

namespace {

namespace fs = std::filesystem;

std::string thrown_message(const std::string& text) {
  try {
    parse_config(text);
  } catch (const std::invalid_argument& e) {
    return e.what();
  }
  return "";
}

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "lmf_config_io_tests";
  fs::create_directories(dir);
  return dir;
}

VectorField3 random_field(const Grid3& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  VectorField3 u = make_vector(g);
  for (int c = 0; c < 3; ++c) {
    for (Eigen::Index i = 0; i < u.comp[c].values.size(); ++i) {
      u.comp[c].values[i] = unif(rng);
    }
  }
  return u;
}

}  // namespace

TEST_CASE("empty config resolves to the documented defaults") {
  const ExperimentConfig cfg = parse_config("");
  CHECK(cfg.grid.n == 32);
  CHECK(cfg.grid.box_length == 32.0);
  CHECK(cfg.model.variant == ModelVariant::mod1);
  CHECK(cfg.model.pressure_law == PressureLaw::quadratic);
  CHECK(cfg.params.kappa == 1.0);
  CHECK(cfg.init.amplitude == 0.05);
  CHECK(cfg.init.trace.preset == SphereTrace::Preset::e1);
  // Length scales resolve against the grid: 4h, L/4, L/8.
  CHECK(cfg.init.inner_radius == doctest::Approx(4.0));
  CHECK(cfg.init.outer_radius == doctest::Approx(8.0));
  CHECK(cfg.init.cutoff_width == doctest::Approx(4.0));
  REQUIRE(cfg.stepper.dt.has_value());
  CHECK(*cfg.stepper.dt == 0.02);
  CHECK_FALSE(cfg.stepper.cfl.has_value());
  CHECK(cfg.stepper.t_end == 1.0);
  CHECK(cfg.stepper.scheme == Scheme::etd_rk4);
  CHECK(cfg.stepper.dealias);
  REQUIRE(cfg.output_times.size() == 1);
  CHECK(cfg.output_times[0] == 1.0);
  CHECK(cfg.mild_tol == 1e-10);
  CHECK(cfg.mild_max_iter == 25);
  CHECK(cfg.mild_nodes == 65);
  CHECK(cfg.decay_annulus_inner == doctest::Approx(2.0));
  CHECK(cfg.decay_annulus_outer == doctest::Approx(8.0));
  CHECK(cfg.decay_shells == 12);
  REQUIRE(cfg.decay_alphas.size() == 1);
  CHECK(cfg.decay_alphas[0] == std::array<int, 3>{0, 0, 0});
  CHECK(cfg.diag_theta == 0.3);
  CHECK(cfg.diag_gamma == 0.5);
  CHECK(cfg.diag_t0 == 1.0);  // resolves to t_end
  CHECK(cfg.diag_radius == doctest::Approx(4.0));
  CHECK(cfg.diag_apriori_radius == doctest::Approx(4.0));
  CHECK(cfg.diag_lambda == 0.05);
  CHECK(cfg.diag_stride == 2);
  CHECK(cfg.diag_budget == 2000);
  CHECK(cfg.seed == 1);
  CHECK(cfg.output_dir == "out");
}

TEST_CASE("explicit keys override every section") {
  const std::string text = R"(# full override exercise
grid.n = 16
grid.box_length = 8.0
model.variant = mod2
model.pressure = linear
kappa = 2.5
init.preset = harmonic
init.amplitude = 0.125
init.inner_radius = 0.75
init.outer_radius = 2.0
init.cutoff_width = 1.5
init.harmonic.3.4 = 1.25
init.harmonic.2.0 = -0.5
stepper.scheme = etd_rk2
stepper.cfl = 0.5
stepper.t_end = 2.0
stepper.dealias = false
output_times = 0.5, 1.0 2.0
mild.tol = 1e-8
mild.max_iter = 11
mild.nodes = 33
decay.annulus_inner = 0.9
decay.annulus_outer = 1.9
decay.shells = 7
decay.alphas = 0 0 0; 1 0 0; 0 2 0
diag.theta = 0.25
diag.gamma = 1.0
diag.center = 1.0 0.0 -1.0
diag.t0 = 1.5
diag.radius = 1.25
diag.lambda = 0.02
diag.apriori_radius = 1.0
diag.stride = 4
diag.budget = 500
seed = 42
output_dir = runs/test
)";
  const ExperimentConfig cfg = parse_config(text);
  CHECK(cfg.grid.n == 16);
  CHECK(cfg.grid.box_length == 8.0);
  CHECK(cfg.model.variant == ModelVariant::mod2);
  CHECK(cfg.model.pressure_law == PressureLaw::linear);
  CHECK(cfg.params.kappa == 2.5);
  CHECK(cfg.init.trace.preset == SphereTrace::Preset::harmonic);
  CHECK(cfg.init.amplitude == 0.125);
  CHECK(cfg.init.inner_radius == 0.75);
  // Components in the key grammar are 1-based.
  CHECK(cfg.init.trace.coef[2][4] == 1.25);
  CHECK(cfg.init.trace.coef[1][0] == -0.5);
  CHECK(cfg.init.trace.coef[0][0] == 0.0);
  CHECK(thrown_message("init.preset = harmonic\ninit.harmonic.0.3 = 1")
            .find("1..3") != std::string::npos);
  CHECK(cfg.stepper.scheme == Scheme::etd_rk2);
  REQUIRE(cfg.stepper.cfl.has_value());
  CHECK(*cfg.stepper.cfl == 0.5);
  CHECK_FALSE(cfg.stepper.dt.has_value());
  CHECK_FALSE(cfg.stepper.dealias);
  REQUIRE(cfg.output_times.size() == 3);
  CHECK(cfg.output_times[1] == 1.0);
  CHECK(cfg.mild_nodes == 33);
  REQUIRE(cfg.decay_alphas.size() == 3);
  CHECK(cfg.decay_alphas[2] == std::array<int, 3>{0, 2, 0});
  CHECK(cfg.diag_center == std::array<double, 3>{1.0, 0.0, -1.0});
  CHECK(cfg.diag_t0 == 1.5);
  CHECK(cfg.seed == 42);
  CHECK(cfg.output_dir == "runs/test");
}

TEST_CASE("diagnostics carry the offending line number") {
  CHECK(thrown_message("grid.n = 7").find("config line 1") !=
        std::string::npos);
  CHECK(thrown_message("grid.n = 7").find("grid.n") != std::string::npos);
  CHECK(thrown_message("kappa = 1\nwhat.ever = 3").find("config line 2") !=
        std::string::npos);
  CHECK(thrown_message("kappa = abc").find("config line 1") !=
        std::string::npos);
  CHECK(thrown_message("kappa = 1\n\nkappa = 2").find("config line 3") !=
        std::string::npos);
  CHECK(thrown_message("kappa = 1\n\nkappa = 2").find("line 1") !=
        std::string::npos);  // duplicate names the first sighting too
  CHECK(thrown_message("mild.nodes = 64").find("odd") != std::string::npos);
  CHECK(thrown_message("diag.theta = 0.4").find("1/3") != std::string::npos);
  CHECK(thrown_message("grid.n 16").find("config line 1") !=
        std::string::npos);  // missing '='
}

TEST_CASE("cross-field validation at the end of the parse") {
  // dt and cfl together.
  CHECK_THROWS_AS(parse_config("stepper.dt = 0.01\nstepper.cfl = 0.5"),
                  std::invalid_argument);
  // Output times beyond the horizon.
  CHECK_THROWS_AS(parse_config("output_times = 2.0"), std::invalid_argument);
  // Init shape incompatible with the box.
  CHECK_THROWS_AS(
      parse_config("init.outer_radius = 15.0\ninit.cutoff_width = 2.0"),
      std::invalid_argument);
  // Decay annulus must fit the shell floor.
  CHECK_THROWS_AS(parse_config("decay.annulus_inner = 5\n"
                               "decay.annulus_outer = 4"),
                  std::invalid_argument);
}

TEST_CASE("dump and parse form a fixed point") {
  const std::string text = R"(grid.n = 24
grid.box_length = 12.5
model.variant = mod2
kappa = 0.75
init.preset = harmonic
init.harmonic.1.3 = 0.3333333333333333
stepper.cfl = 0.25
stepper.t_end = 1.5
output_times = 0.25 0.75 1.5
decay.alphas = 0 0 0; 1 1 0
seed = 7
)";
  const ExperimentConfig cfg1 = parse_config(text);
  const std::string dump1 = dump_config(cfg1);
  const ExperimentConfig cfg2 = parse_config(dump1);
  const std::string dump2 = dump_config(cfg2);
  CHECK(dump1 == dump2);
  CHECK(cfg2.grid.n == cfg1.grid.n);
  CHECK(cfg2.params.kappa == cfg1.params.kappa);
  CHECK(cfg2.init.trace.coef[0][3] == cfg1.init.trace.coef[0][3]);
  CHECK(cfg2.output_times == cfg1.output_times);
  CHECK(cfg2.decay_alphas == cfg1.decay_alphas);
  CHECK(cfg2.stepper.cfl == cfg1.stepper.cfl);

  // The defaults dump-parse exactly as well.
  const ExperimentConfig d1 = parse_config("");
  const std::string dd = dump_config(d1);
  CHECK(dump_config(parse_config(dd)) == dd);
}

TEST_CASE("snapshot roundtrip is bitwise and the size formula holds") {
  const Grid3 g = make_grid(8, 4.0);
  const VectorField3 u = random_field(g, 2024);
  SnapshotMeta meta;
  meta.kappa = 2.5;
  meta.time = 0.375;
  meta.model = ModelKind{ModelVariant::mod2, PressureLaw::linear};
  const fs::path path = scratch_dir() / "roundtrip.lmf";
  write_snapshot(u, meta, path);

  CHECK(fs::file_size(path) == 40 + 24 * 512);

  const auto [v, back] = read_snapshot(path);
  CHECK(v.grid() == g);
  CHECK(back.version == 1);
  CHECK(back.kappa == 2.5);
  CHECK(back.time == 0.375);
  CHECK(back.model.variant == ModelVariant::mod2);
  CHECK(back.model.pressure_law == PressureLaw::linear);
  for (int c = 0; c < 3; ++c) {
    // Exact equality: the payload must survive untouched.
    CHECK((v.comp[c].values == u.comp[c].values).all());
  }
}

TEST_CASE("snapshot reader rejects malformed files") {
  const Grid3 g = make_grid(8, 4.0);
  const VectorField3 u = random_field(g, 7);
  const fs::path dir = scratch_dir();
  const fs::path good = dir / "good.lmf";
  write_snapshot(u, SnapshotMeta{}, good);

  auto patched = [&](const char* name, std::streamoff at, char byte) {
    const fs::path p = dir / name;
    fs::copy_file(good, p, fs::copy_options::overwrite_existing);
    std::fstream f(p, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(at);
    f.put(byte);
    return p;
  };

  CHECK_THROWS_AS(read_snapshot(patched("magic.lmf", 0, 'X')), IoError);
  CHECK_THROWS_AS(read_snapshot(patched("version.lmf", 4, 9)), IoError);
  CHECK_THROWS_AS(read_snapshot(patched("oddn.lmf", 8, 9)), IoError);
  CHECK_THROWS_AS(read_snapshot(patched("model.lmf", 36, 7)), IoError);
  CHECK_THROWS_AS(read_snapshot(patched("pressure.lmf", 37, 5)), IoError);

  // Truncation: drop the last byte.
  const fs::path trunc = dir / "trunc.lmf";
  fs::copy_file(good, trunc, fs::copy_options::overwrite_existing);
  fs::resize_file(trunc, fs::file_size(good) - 1);
  CHECK_THROWS_AS(read_snapshot(trunc), IoError);
  // Shorter than the header.
  fs::resize_file(trunc, 16);
  CHECK_THROWS_AS(read_snapshot(trunc), IoError);

  CHECK_THROWS_AS(read_snapshot(dir / "does_not_exist.lmf"), IoError);
  CHECK_THROWS_AS(
      write_snapshot(u, SnapshotMeta{}, dir / "no_such_dir" / "x.lmf"),
      IoError);
}
