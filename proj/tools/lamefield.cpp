// lamefield: experiment driver for the two Lame-type flow models.
//
// Subcommands: evolve, mild, semigroup, profile, decay, diagnose, selftest.
// Exit codes: 0 success, 1 validation failure, 2 numerical abort,
// 3 IO failure.  All emitted files are deterministic for a fixed config and
// seed: no timestamps, floats printed with 17 significant digits.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "lmf/config.hpp"
#include "lmf/decay.hpp"
#include "lmf/diagnostics.hpp"
#include "lmf/errors.hpp"
#include "lmf/evolution.hpp"
#include "lmf/selfsimilar.hpp"
#include "lmf/snapshot.hpp"
#include "lmf/synth.hpp"

namespace fs = std::filesystem;

namespace {

struct Session {
  lmf::ExperimentConfig cfg;
  fs::path out_dir;
  bool quiet = false;
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// Shortest representation that parses back to the same double; used for
// file names so t = 0.1 yields "t0.1" rather than 17 digits.
std::string fmt_short(double x) {
  char buf[64];
  for (int p = 1; p <= 17; ++p) {
    std::snprintf(buf, sizeof(buf), "%.*g", p, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

void say(const Session& s, const std::string& line) {
  if (!s.quiet) std::cout << line << "\n";
}

// CSV writer: one header row, every float with 17 significant digits.
class Csv {
 public:
  Csv(const fs::path& path, const std::string& header) : path_(path) {
    out_.open(path, std::ios::trunc);
    if (!out_) {
      throw lmf::IoError("cannot open '" + path.string() + "' for writing");
    }
    out_ << header << "\n";
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ",";
      out_ << cells[i];
    }
    out_ << "\n";
  }
  ~Csv() = default;

 private:
  fs::path path_;
  std::ofstream out_;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw lmf::IoError("cannot read config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void check_thread_env() {
  if (const char* env = std::getenv("LAMEFIELD_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) {
      throw std::invalid_argument(
          "LAMEFIELD_THREADS must be a positive integer");
    }
    // The build is single-threaded; the variable is accepted so scripted
    // environments can set it without breaking, and results never depend
    // on it.
  }
}

Session open_session(const std::string& config_path,
                     const std::string& output_override,
                     const std::string& seed_override, bool quiet) {
  Session s;
  s.quiet = quiet;
  s.cfg = lmf::parse_config(config_path.empty() ? std::string()
                                                : slurp(config_path));
  if (!output_override.empty()) s.cfg.output_dir = output_override;
  if (!seed_override.empty()) {
    try {
      std::size_t used = 0;
      s.cfg.seed = std::stoull(seed_override, &used);
      if (used != seed_override.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw std::invalid_argument("--seed expects an unsigned integer, got '" +
                                  seed_override + "'");
    }
  }
  s.out_dir = s.cfg.output_dir;
  std::error_code ec;
  fs::create_directories(s.out_dir, ec);
  if (ec) {
    throw lmf::IoError("cannot create output directory '" +
                       s.out_dir.string() + "': " + ec.message());
  }
  // Echo the fully resolved config so every run is reproducible from its
  // own output directory.
  std::ofstream echo(s.out_dir / "config.txt", std::ios::trunc);
  if (!echo) {
    throw lmf::IoError("cannot write '" +
                       (s.out_dir / "config.txt").string() + "'");
  }
  echo << lmf::dump_config(s.cfg);
  return s;
}

lmf::SnapshotMeta meta_of(const Session& s, double time) {
  lmf::SnapshotMeta meta;
  meta.kappa = s.cfg.params.kappa;
  meta.time = time;
  meta.model = s.cfg.model;
  return meta;
}

void write_energy_csv(const Session& s, const lmf::Trajectory& traj,
                      const std::string& name) {
  Csv csv(s.out_dir / name, "time,energy,dissipation");
  for (std::size_t i = 0; i < traj.energy_times.size(); ++i) {
    csv.row({fmt(traj.energy_times[i]), fmt(traj.energy[i]),
             fmt(traj.dissipation[i])});
  }
}

void write_snapshots(const Session& s, const lmf::Trajectory& traj,
                     const std::string& prefix) {
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const fs::path path =
        s.out_dir / (prefix + "_t" + fmt_short(traj.times[i]) + ".lmf");
    lmf::write_snapshot(traj.snapshots[i], meta_of(s, traj.times[i]), path);
    say(s, "wrote " + path.string());
  }
}

std::vector<double> decay_radii(const lmf::ExperimentConfig& cfg) {
  // Same log(1+r)-uniform spacing as the library default, over the
  // configured annulus.
  const double lo = std::log1p(cfg.decay_annulus_inner);
  const double hi = std::log1p(cfg.decay_annulus_outer);
  std::vector<double> radii(cfg.decay_shells);
  for (int i = 0; i < cfg.decay_shells; ++i) {
    radii[i] = std::expm1(lo + (hi - lo) * i / (cfg.decay_shells - 1));
  }
  return radii;
}

int cmd_evolve(const Session& s) {
  const lmf::VectorField3 u0 = lmf::build_initial_data(s.cfg.init, s.cfg.grid);
  lmf::StepperConfig stepper = s.cfg.stepper;
  stepper.output_times = s.cfg.output_times;
  const lmf::Trajectory traj =
      lmf::evolve(u0, s.cfg.model, s.cfg.params, stepper);
  write_snapshots(s, traj, "snapshot");
  write_energy_csv(s, traj, "energy.csv");
  return 0;
}

int cmd_mild(const Session& s) {
  const lmf::VectorField3 u0 = lmf::build_initial_data(s.cfg.init, s.cfg.grid);
  const lmf::MildResult result =
      lmf::mild_solve(u0, s.cfg.model, s.cfg.params, s.cfg.stepper.t_end,
                      s.cfg.mild_tol, s.cfg.mild_max_iter, s.cfg.mild_nodes);
  {
    Csv csv(s.out_dir / "picard.csv", "iteration,sup_diff,ratio");
    for (std::size_t i = 0; i < result.sup_diffs.size(); ++i) {
      csv.row({std::to_string(i + 1), fmt(result.sup_diffs[i]),
               i == 0 ? "" : fmt(result.ratios[i - 1])});
    }
  }
  // Snapshots at the nodes nearest the requested output times (node times
  // are recorded in the files; the node grid is uniform with
  // mild.nodes - 1 steps).
  const auto& times = result.trajectory.times;
  for (double want : s.cfg.output_times) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < times.size(); ++i) {
      if (std::abs(times[i] - want) < std::abs(times[best] - want)) best = i;
    }
    const fs::path path =
        s.out_dir / ("mild_t" + fmt_short(times[best]) + ".lmf");
    lmf::write_snapshot(result.trajectory.snapshots[best],
                        meta_of(s, times[best]), path);
    say(s, "wrote " + path.string());
  }
  write_energy_csv(s, result.trajectory, "energy.csv");
  say(s, "picard converged in " + std::to_string(result.iterations) +
             " iterations");
  return 0;
}

int cmd_semigroup(const Session& s) {
  const lmf::VectorField3 u0 = lmf::build_initial_data(s.cfg.init, s.cfg.grid);
  for (double t : s.cfg.output_times) {
    const lmf::VectorField3 v =
        t == 0.0 ? u0 : lmf::lame_apply(u0, t, s.cfg.params);
    const fs::path path = s.out_dir / ("semigroup_t" + fmt_short(t) + ".lmf");
    lmf::write_snapshot(v, meta_of(s, t), path);
    say(s, "wrote " + path.string());
  }
  return 0;
}

int cmd_profile(const Session& s) {
  const lmf::VectorField3 u0 = lmf::build_initial_data(s.cfg.init, s.cfg.grid);
  lmf::StepperConfig stepper = s.cfg.stepper;
  stepper.t_end = 1.0;  // the profile is the state at t = 1 by convention
  stepper.output_times = {1.0};
  const lmf::Trajectory traj =
      lmf::evolve(u0, s.cfg.model, s.cfg.params, stepper);
  const lmf::ProfileReport report = lmf::profile_residual(
      traj.at_time(1.0, "profile"), s.cfg.model, s.cfg.params,
      lmf::ProfileReport::Source::evolved);
  lmf::write_snapshot(report.profile, meta_of(s, 1.0),
                      s.out_dir / "profile.lmf");
  Csv csv(s.out_dir / "profile.csv",
          "linear_residual_norm,full_residual_norm,profile_norm,"
          "linear_over_norm,full_over_norm");
  const double scale = report.profile_norm > 0.0 ? report.profile_norm : 1.0;
  csv.row({fmt(report.linear_residual_norm), fmt(report.full_residual_norm),
           fmt(report.profile_norm),
           fmt(report.linear_residual_norm / scale),
           fmt(report.full_residual_norm / scale)});
  say(s, "profile residuals: linear " + fmt(report.linear_residual_norm) +
             ", full " + fmt(report.full_residual_norm));
  return 0;
}

int cmd_decay(const Session& s) {
  const lmf::VectorField3 u0 = lmf::build_initial_data(s.cfg.init, s.cfg.grid);
  lmf::StepperConfig stepper = s.cfg.stepper;
  stepper.t_end = 1.0;  // decay reporting is tied to the t = 1 profile
  stepper.output_times = {0.25, 1.0};
  const lmf::Trajectory traj =
      lmf::evolve(u0, s.cfg.model, s.cfg.params, stepper);
  const std::vector<double> radii = decay_radii(s.cfg);
  // Compare against the semigroup applied to the trajectory's own t = 0
  // state so both sides carry identical retained-mode content.
  const auto report = lmf::decay_report(traj, traj.at_time(0.0, "decay"),
                                        s.cfg.params, s.cfg.decay_alphas,
                                        radii);
  const lmf::DefectReport defect =
      lmf::self_similarity_defect(traj, 0.25, 1.0, s.cfg.decay_annulus_inner,
                                  s.cfg.decay_annulus_outer);

  Csv summary(s.out_dir / "decay_summary.csv",
              "alpha1,alpha2,alpha3,slope,r2,shells_used,below_noise_floor,"
              "profile_slope,profile_r2,selfsim_defect");
  for (const auto& entry : report) {
    std::ostringstream tag;
    tag << entry.alpha[0] << entry.alpha[1] << entry.alpha[2];
    {
      Csv table(s.out_dir / ("decay_diff_" + tag.str() + ".csv"),
                "r,sup,log1p_r,log_sup");
      const auto& t = entry.difference_fit.table;
      for (std::size_t i = 0; i < t.radii.size(); ++i) {
        table.row({fmt(t.radii[i]), fmt(t.sup_values[i]),
                   fmt(std::log1p(t.radii[i])),
                   t.sup_values[i] > 0.0 ? fmt(std::log(t.sup_values[i]))
                                         : "nan"});
      }
    }
    {
      Csv table(s.out_dir / ("decay_profile_" + tag.str() + ".csv"),
                "r,sup,log1p_r,log_sup");
      const auto& t = entry.profile_fit.table;
      for (std::size_t i = 0; i < t.radii.size(); ++i) {
        table.row({fmt(t.radii[i]), fmt(t.sup_values[i]),
                   fmt(std::log1p(t.radii[i])),
                   t.sup_values[i] > 0.0 ? fmt(std::log(t.sup_values[i]))
                                         : "nan"});
      }
    }
    summary.row({std::to_string(entry.alpha[0]),
                 std::to_string(entry.alpha[1]),
                 std::to_string(entry.alpha[2]),
                 fmt(entry.difference_fit.slope), fmt(entry.difference_fit.r2),
                 std::to_string(entry.difference_fit.shells_used),
                 entry.below_noise_floor ? "1" : "0",
                 fmt(entry.profile_fit.slope), fmt(entry.profile_fit.r2),
                 fmt(defect.value)});
    say(s, "alpha " + tag.str() +
               ": difference slope " + fmt(entry.difference_fit.slope) +
               " (r2 " + fmt(entry.difference_fit.r2) + "), profile slope " +
               fmt(entry.profile_fit.slope));
  }
  return 0;
}

int cmd_diagnose(const Session& s) {
  const lmf::VectorField3 u0 = lmf::build_initial_data(s.cfg.init, s.cfg.grid);
  lmf::StepperConfig stepper = s.cfg.stepper;
  // Cylinder statistics need densely retained times: use 33 uniform slices
  // merged with the configured output times.
  stepper.output_times = s.cfg.output_times;
  for (int i = 0; i <= 32; ++i) {
    stepper.output_times.push_back(stepper.t_end * i / 32.0);
  }
  const lmf::Trajectory traj =
      lmf::evolve(u0, s.cfg.model, s.cfg.params, stepper);
  write_energy_csv(s, traj, "energy.csv");

  const lmf::EnergyReport energy = lmf::apriori_quantities(
      traj, traj.at_time(0.0, "diagnose"), s.cfg.diag_apriori_radius,
      s.cfg.diag_lambda, s.cfg.diag_stride);
  {
    Csv csv(s.out_dir / "apriori.csv",
            "R,lambda,alpha_R,A_R,A_over_alpha,stride");
    csv.row({fmt(energy.R), fmt(energy.lambda_window), fmt(energy.alpha_R),
             fmt(energy.A_R),
             energy.alpha_R > 0.0 ? fmt(energy.A_R / energy.alpha_R) : "nan",
             std::to_string(energy.stride)});
  }

  const lmf::OscillationReport osc = lmf::oscillation_cascade(
      traj, s.cfg.diag_center, s.cfg.diag_t0, s.cfg.diag_radius,
      s.cfg.diag_theta, 8);
  {
    Csv csv(s.out_dir / "oscillation.csv", "k,radius,y,ratio,truncated");
    for (std::size_t k = 0; k < osc.radii.size(); ++k) {
      csv.row({std::to_string(k), fmt(osc.radii[k]), fmt(osc.y_values[k]),
               k == 0 ? "" : fmt(osc.ratios[k - 1]),
               osc.truncated ? "1" : "0"});
    }
  }

  const lmf::ParabolicCylinder region{s.cfg.diag_center, s.cfg.diag_t0,
                                      s.cfg.diag_radius};
  const double holder = lmf::holder_seminorm(traj, s.cfg.diag_gamma, region,
                                             s.cfg.diag_budget, s.cfg.seed);
  {
    Csv csv(s.out_dir / "holder.csv",
            "gamma,seminorm_lower_bound,sample_budget,radius,t0");
    csv.row({fmt(s.cfg.diag_gamma), fmt(holder),
             std::to_string(s.cfg.diag_budget), fmt(s.cfg.diag_radius),
             fmt(s.cfg.diag_t0)});
  }

  const double residual = lmf::local_energy_residual(
      traj, s.cfg.model, s.cfg.params, lmf::default_test_function(traj));
  {
    Csv csv(s.out_dir / "local_energy.csv", "residual,snapshots");
    csv.row({fmt(residual), std::to_string(traj.times.size())});
  }
  say(s, "diagnose: A_R " + fmt(energy.A_R) + ", alpha_R " +
             fmt(energy.alpha_R) + ", holder lower bound " + fmt(holder));
  return 0;
}

// Fast end-to-end checks of the documented examples.  Returns the number of
// failures; any failure makes the subcommand exit nonzero.
int cmd_selftest(const Session& s) {
  int failures = 0;
  auto check = [&](const std::string& name, bool ok,
                   const std::string& detail = "") {
    if (ok) {
      say(s, "ok   " + name);
    } else {
      ++failures;
      std::cout << "FAIL " << name << (detail.empty() ? "" : ": " + detail)
                << "\n";
    }
  };

  using namespace lmf;
  const Grid3 g16 = make_grid(16, 2.0 * M_PI);

  {  // transform round-trip and the cosine-mode convention
    const ScalarField f = random_smooth_scalar(g16, 7);
    const ScalarField back = inverse(forward(f));
    check("fft round-trip", (back.values - f.values).abs().maxCoeff() < 1e-12);
    ScalarField c = make_scalar(g16);
    for (int iz = 0; iz < 16; ++iz)
      for (int iy = 0; iy < 16; ++iy)
        for (int ix = 0; ix < 16; ++ix) {
          c.values[g16.index(ix, iy, iz)] =
              std::cos(2.0 * M_PI * g16.coord(ix) / g16.box_length);
        }
    const SpectralScalar ch = forward(c);
    check("cosine lands 1/2 on m=1",
          std::abs(ch.coef[g16.index(1, 0, 0)] - std::complex<double>(0.5)) <
              1e-13);
  }

  for (double kappa : {0.0, 1.0, 5.0}) {  // single-mode semigroup decay
    const LameParams params{kappa};
    SpectralVector one = make_spectral_vector(g16);
    one.comp[1].coef[g16.index(2, 0, 0)] = 1.0;  // div-free: k || e1, u || e2
    VectorField3 u = inverse(one);
    VectorField3 ut = lame_apply(u, 0.3, params);
    const double want_sol = std::exp(-4.0 * 0.3);
    double err = 0.0;
    for (Eigen::Index i = 0; i < ut.comp[1].values.size(); ++i) {
      err = std::max(err, std::abs(ut.comp[1].values[i] -
                                   want_sol * u.comp[1].values[i]));
    }
    SpectralVector two = make_spectral_vector(g16);
    two.comp[0].coef[g16.index(2, 0, 0)] = 1.0;  // gradient: u || k
    VectorField3 v = inverse(two);
    VectorField3 vt = lame_apply(v, 0.3, params);
    const double want_grad = std::exp(-(1.0 + kappa) * 4.0 * 0.3);
    for (Eigen::Index i = 0; i < vt.comp[0].values.size(); ++i) {
      err = std::max(err, std::abs(vt.comp[0].values[i] -
                                   want_grad * v.comp[0].values[i]));
    }
    check("semigroup single modes kappa=" + fmt(kappa), err < 1e-10,
          "err " + fmt(err));
  }

  {  // Helmholtz invariants on one seeded field
    const VectorField3 u = random_smooth_field(g16, 11);
    const HelmholtzParts parts = helmholtz_decompose(u);
    double rec = 0.0;
    for (int c = 0; c < 3; ++c) {
      rec = std::max(rec, (parts.solenoidal.comp[c].values +
                           parts.gradient.comp[c].values - u.comp[c].values)
                              .abs()
                              .maxCoeff());
    }
    const ScalarField div_sol = divergence(parts.solenoidal);
    const VectorField3 curl_grad = curl(parts.gradient);
    check("helmholtz reconstruction", rec < 1e-12, fmt(rec));
    check("helmholtz div-free part",
          div_sol.values.abs().maxCoeff() < 1e-11);
    check("helmholtz curl-free part", max_abs(curl_grad) < 1e-11);
  }

  {  // nonlinearity closed forms on sin(x1) data
    VectorField3 u = make_vector(g16);
    for (int iz = 0; iz < 16; ++iz)
      for (int iy = 0; iy < 16; ++iy)
        for (int ix = 0; ix < 16; ++ix) {
          u.comp[0].values[g16.index(ix, iy, iz)] = std::sin(g16.coord(ix));
        }
    const VectorField3 n1 = nonlinearity(u, {ModelVariant::mod1});
    double err1 = 0.0;
    for (int iz = 0; iz < 16; ++iz)
      for (int iy = 0; iy < 16; ++iy)
        for (int ix = 0; ix < 16; ++ix) {
          const std::size_t idx = g16.index(ix, iy, iz);
          err1 = std::max(err1,
                          std::abs(n1.comp[0].values[idx] -
                                   0.75 * std::sin(2.0 * g16.coord(ix))));
          err1 = std::max(err1, std::abs(n1.comp[1].values[idx]));
          err1 = std::max(err1, std::abs(n1.comp[2].values[idx]));
        }
    check("mod1 sine oracle", err1 < 1e-10, fmt(err1));
    const VectorField3 n2 =
        nonlinearity(u, {ModelVariant::mod2, PressureLaw::quadratic});
    double err2 = 0.0;
    for (int iz = 0; iz < 16; ++iz)
      for (int iy = 0; iy < 16; ++iy)
        for (int ix = 0; ix < 16; ++ix) {
          const std::size_t idx = g16.index(ix, iy, iz);
          err2 = std::max(err2,
                          std::abs(n2.comp[0].values[idx] -
                                   1.5 * std::sin(2.0 * g16.coord(ix))));
        }
    check("mod2 sine oracle", err2 < 1e-10, fmt(err2));
    const double flux =
        energy_flux(random_smooth_field(g16, 21), {ModelVariant::mod1});
    check("mod1 energy flux vanishes", std::abs(flux) < 1e-9, fmt(flux));
  }

  {  // rescale identity and snapshot round-trip
    const VectorField3 u = random_smooth_field(g16, 31);
    const VectorField3 r = rescale(u, 1.0, g16);
    double err = 0.0;
    for (int c = 0; c < 3; ++c) {
      err = std::max(err,
                     (r.comp[c].values - u.comp[c].values).abs().maxCoeff());
    }
    check("rescale lambda=1 identity", err < 1e-12, fmt(err));

    const Grid3 g8 = make_grid(8, 1.0);
    const VectorField3 small = random_smooth_field(g8, 5);
    SnapshotMeta meta;
    meta.kappa = 1.0;
    meta.time = 0.5;
    const fs::path path = s.out_dir / "selftest_roundtrip.lmf";
    write_snapshot(small, meta, path);
    const auto [loaded, meta2] = read_snapshot(path);
    bool bitwise = meta2.time == meta.time && meta2.kappa == meta.kappa;
    for (int c = 0; c < 3 && bitwise; ++c) {
      for (Eigen::Index i = 0; i < loaded.comp[c].values.size(); ++i) {
        if (loaded.comp[c].values[i] != small.comp[c].values[i]) {
          bitwise = false;
          break;
        }
      }
    }
    check("snapshot round-trip bit-identical", bitwise);
    check("snapshot n=8 file size",
          fs::file_size(path) == 40 + 24 * 512);
  }

  {  // config normalization is a fixed point
    const std::string dumped = dump_config(s.cfg);
    check("config parse/dump identity",
          dump_config(parse_config(dumped)) == dumped);
  }

  {  // oscillation of a linear field
    const Grid3 g24 = make_grid(24, 6.0);
    Trajectory traj;
    traj.params = LameParams{1.0};
    for (int i = 0; i <= 4; ++i) {
      traj.times.push_back(0.25 * i);
      VectorField3 u = make_vector(g24);
      for (int iz = 0; iz < 24; ++iz)
        for (int iy = 0; iy < 24; ++iy)
          for (int ix = 0; ix < 24; ++ix) {
            u.comp[0].values[g24.index(ix, iy, iz)] = g24.coord(ix);
          }
      traj.snapshots.push_back(std::move(u));
    }
    const double y =
        oscillation_y(traj, ParabolicCylinder{{0.0, 0.0, 0.0}, 1.0, 1.0});
    check("oscillation linear field ~ 1/2", std::abs(y - 0.5) < 0.01,
          fmt(y));
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "lamefield: pseudo-spectral simulation and verification suite for two "
      "toy flow models with the time-dependent Lame operator"};
  app.fallthrough();
  app.require_subcommand(1);

  std::string config_path, output_override, seed_override;
  bool quiet = false;
  app.add_option("--config", config_path, "Path to a key = value config file");
  app.add_option("--output", output_override,
                 "Output directory (overrides output_dir)");
  app.add_option("--seed", seed_override,
                 "Seed for synthetic fields (overrides seed)");
  app.add_flag("--quiet", quiet, "Suppress progress output");

  auto* c_evolve = app.add_subcommand(
      "evolve", "Time-march the model and write snapshots at output_times");
  auto* c_mild = app.add_subcommand(
      "mild", "Picard-iterate the Duhamel form and write node snapshots");
  auto* c_semigroup = app.add_subcommand(
      "semigroup", "Apply the linear flow to the initial data");
  auto* c_profile = app.add_subcommand(
      "profile", "Extract the t = 1 profile and its residual report");
  auto* c_decay = app.add_subcommand(
      "decay", "Shell-sup decay tables and fitted slopes at t = 1");
  auto* c_diagnose = app.add_subcommand(
      "diagnose", "Regularity functionals: energy, oscillation, Holder");
  auto* c_selftest = app.add_subcommand(
      "selftest", "Run the built-in example checks (nonzero exit on failure)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    check_thread_env();
    const Session s =
        open_session(config_path, output_override, seed_override, quiet);
    if (c_evolve->parsed()) return cmd_evolve(s);
    if (c_mild->parsed()) return cmd_mild(s);
    if (c_semigroup->parsed()) return cmd_semigroup(s);
    if (c_profile->parsed()) return cmd_profile(s);
    if (c_decay->parsed()) return cmd_decay(s);
    if (c_diagnose->parsed()) return cmd_diagnose(s);
    if (c_selftest->parsed()) return cmd_selftest(s);
    std::cerr << "error: no subcommand\n";
    return 1;
  } catch (const lmf::NumericalAbort& e) {
    std::cerr << "numerical abort: " << e.what() << "\n";
    return 2;
  } catch (const lmf::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
