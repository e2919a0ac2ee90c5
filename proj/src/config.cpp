#include "lmf/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

namespace lmf {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  std::ostringstream out;
  out << "config line " << line << ": " << msg;
  throw std::invalid_argument(out.str());
}

double parse_double(const std::string& v, int line, const std::string& key) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument("");
    return x;
  } catch (const std::exception&) {
    fail(line, "expected a number for '" + key + "', got '" + v + "'");
  }
}

long long parse_int(const std::string& v, int line, const std::string& key) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument("");
    return x;
  } catch (const std::exception&) {
    fail(line, "expected an integer for '" + key + "', got '" + v + "'");
  }
}

std::uint64_t parse_u64(const std::string& v, int line,
                        const std::string& key) {
  try {
    std::size_t used = 0;
    const unsigned long long x = std::stoull(v, &used);
    if (used != v.size() || v.find('-') != std::string::npos) {
      throw std::invalid_argument("");
    }
    return x;
  } catch (const std::exception&) {
    fail(line, "expected an unsigned integer for '" + key + "', got '" + v +
                   "'");
  }
}

bool parse_bool(const std::string& v, int line, const std::string& key) {
  if (v == "true") return true;
  if (v == "false") return false;
  fail(line, "expected true or false for '" + key + "', got '" + v + "'");
}

// Numbers separated by commas and/or whitespace.
std::vector<double> parse_double_list(const std::string& v, int line,
                                      const std::string& key) {
  std::string cleaned = v;
  for (char& c : cleaned) {
    if (c == ',') c = ' ';
  }
  std::istringstream in(cleaned);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(parse_double(tok, line, key));
  if (out.empty()) fail(line, "expected at least one number for '" + key + "'");
  return out;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  cfg.output_times.clear();  // refill from the file or restore the default

  std::map<std::string, int> seen;
  std::istringstream stream(text);
  std::string raw;
  int line = 0;
  bool have_output_times = false;

  while (std::getline(stream, raw)) {
    ++line;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string entry = trim(raw);
    if (entry.empty()) continue;
    const std::size_t eq = entry.find('=');
    if (eq == std::string::npos) {
      fail(line, "expected 'key = value', got '" + entry + "'");
    }
    const std::string key = trim(entry.substr(0, eq));
    const std::string value = trim(entry.substr(eq + 1));
    if (key.empty()) fail(line, "empty key");
    if (value.empty()) fail(line, "empty value for '" + key + "'");
    const auto [it, inserted] = seen.emplace(key, line);
    if (!inserted) {
      std::ostringstream msg;
      msg << "duplicate key '" << key << "' (first seen at line "
          << it->second << ")";
      fail(line, msg.str());
    }

    if (key == "grid.n") {
      const long long n = parse_int(value, line, key);
      if (n < 8 || n % 2 != 0) fail(line, "grid.n must be even and >= 8");
      cfg.grid.n = static_cast<int>(n);
    } else if (key == "grid.box_length") {
      const double L = parse_double(value, line, key);
      if (!(L > 0.0)) fail(line, "grid.box_length must be > 0");
      cfg.grid.box_length = L;
    } else if (key == "model.variant") {
      if (value == "mod1") {
        cfg.model.variant = ModelVariant::mod1;
      } else if (value == "mod2") {
        cfg.model.variant = ModelVariant::mod2;
      } else {
        fail(line, "model.variant must be mod1 or mod2");
      }
    } else if (key == "model.pressure") {
      if (value == "quadratic") {
        cfg.model.pressure_law = PressureLaw::quadratic;
      } else if (value == "linear") {
        cfg.model.pressure_law = PressureLaw::linear;
      } else {
        fail(line, "model.pressure must be quadratic or linear");
      }
    } else if (key == "kappa") {
      const double k = parse_double(value, line, key);
      if (!(k >= 0.0)) fail(line, "kappa must be >= 0");
      cfg.params.kappa = k;
    } else if (key == "init.preset") {
      using P = SphereTrace::Preset;
      if (value == "e1") {
        cfg.init.trace.preset = P::e1;
      } else if (value == "e2") {
        cfg.init.trace.preset = P::e2;
      } else if (value == "e3") {
        cfg.init.trace.preset = P::e3;
      } else if (value == "radial") {
        cfg.init.trace.preset = P::radial;
      } else if (value == "harmonic") {
        cfg.init.trace.preset = P::harmonic;
      } else {
        fail(line, "init.preset must be e1, e2, e3, radial, or harmonic");
      }
    } else if (key == "init.amplitude") {
      const double a = parse_double(value, line, key);
      if (!(a > 0.0)) fail(line, "init.amplitude must be > 0");
      cfg.init.amplitude = a;
    } else if (key == "init.inner_radius") {
      const double r = parse_double(value, line, key);
      if (!(r > 0.0)) fail(line, "init.inner_radius must be > 0");
      cfg.init.inner_radius = r;
    } else if (key == "init.outer_radius") {
      const double r = parse_double(value, line, key);
      if (!(r > 0.0)) fail(line, "init.outer_radius must be > 0");
      cfg.init.outer_radius = r;
    } else if (key == "init.cutoff_width") {
      const double r = parse_double(value, line, key);
      if (!(r > 0.0)) fail(line, "init.cutoff_width must be > 0");
      cfg.init.cutoff_width = r;
    } else if (key.rfind("init.harmonic.", 0) == 0) {
      const std::string rest = key.substr(14);
      const std::size_t dot = rest.find('.');
      if (dot == std::string::npos) {
        fail(line, "expected init.harmonic.<component>.<index>");
      }
      const long long c = parse_int(rest.substr(0, dot), line, key);
      const long long i = parse_int(rest.substr(dot + 1), line, key);
      if (c < 1 || c > 3 || i < 0 || i > 8) {
        fail(line,
             "init.harmonic component must be 1..3 and index 0..8");
      }
      cfg.init.trace.coef[static_cast<std::size_t>(c - 1)]
                         [static_cast<std::size_t>(i)] =
          parse_double(value, line, key);
    } else if (key == "stepper.scheme") {
      if (value == "etd_rk2") {
        cfg.stepper.scheme = Scheme::etd_rk2;
      } else if (value == "etd_rk4") {
        cfg.stepper.scheme = Scheme::etd_rk4;
      } else {
        fail(line, "stepper.scheme must be etd_rk2 or etd_rk4");
      }
    } else if (key == "stepper.dt") {
      const double dt = parse_double(value, line, key);
      if (!(dt > 0.0)) fail(line, "stepper.dt must be > 0");
      cfg.stepper.dt = dt;
    } else if (key == "stepper.cfl") {
      const double c = parse_double(value, line, key);
      if (!(c > 0.0 && c <= 1.0)) fail(line, "stepper.cfl must lie in (0, 1]");
      cfg.stepper.cfl = c;
    } else if (key == "stepper.t_end") {
      const double t = parse_double(value, line, key);
      if (!(t > 0.0)) fail(line, "stepper.t_end must be > 0");
      cfg.stepper.t_end = t;
    } else if (key == "stepper.dealias") {
      cfg.stepper.dealias = parse_bool(value, line, key);
    } else if (key == "output_times") {
      cfg.output_times = parse_double_list(value, line, key);
      for (double t : cfg.output_times) {
        if (t < 0.0) fail(line, "output_times must be >= 0");
      }
      have_output_times = true;
    } else if (key == "mild.tol") {
      const double t = parse_double(value, line, key);
      if (!(t > 0.0)) fail(line, "mild.tol must be > 0");
      cfg.mild_tol = t;
    } else if (key == "mild.max_iter") {
      const long long i = parse_int(value, line, key);
      if (i < 1) fail(line, "mild.max_iter must be >= 1");
      cfg.mild_max_iter = static_cast<int>(i);
    } else if (key == "mild.nodes") {
      const long long i = parse_int(value, line, key);
      if (i < 3 || i % 2 == 0) fail(line, "mild.nodes must be odd and >= 3");
      cfg.mild_nodes = static_cast<int>(i);
    } else if (key == "decay.annulus_inner") {
      const double r = parse_double(value, line, key);
      if (!(r > 0.0)) fail(line, "decay.annulus_inner must be > 0");
      cfg.decay_annulus_inner = r;
    } else if (key == "decay.annulus_outer") {
      const double r = parse_double(value, line, key);
      if (!(r > 0.0)) fail(line, "decay.annulus_outer must be > 0");
      cfg.decay_annulus_outer = r;
    } else if (key == "decay.shells") {
      const long long i = parse_int(value, line, key);
      if (i < 5) fail(line, "decay.shells must be >= 5");
      cfg.decay_shells = static_cast<int>(i);
    } else if (key == "decay.alphas") {
      cfg.decay_alphas.clear();
      std::istringstream groups(value);
      std::string group;
      while (std::getline(groups, group, ';')) {
        group = trim(group);
        if (group.empty()) continue;
        std::istringstream in(group);
        std::array<int, 3> alpha{};
        int got = 0;
        std::string tok;
        while (in >> tok && got < 3) {
          const long long a = parse_int(tok, line, key);
          if (a < 0 || a > 2) fail(line, "alpha entries must be 0, 1, or 2");
          alpha[got++] = static_cast<int>(a);
        }
        if (got != 3 || (in >> tok)) {
          fail(line, "each decay.alphas group must hold exactly 3 integers");
        }
        if (alpha[0] + alpha[1] + alpha[2] > 2) {
          fail(line, "decay.alphas groups must have |alpha| <= 2");
        }
        cfg.decay_alphas.push_back(alpha);
      }
      if (cfg.decay_alphas.empty()) {
        fail(line, "decay.alphas must hold at least one group");
      }
    } else if (key == "diag.theta") {
      const double t = parse_double(value, line, key);
      if (!(t > 0.0 && t < 1.0 / 3.0)) {
        fail(line, "diag.theta must lie in (0, 1/3)");
      }
      cfg.diag_theta = t;
    } else if (key == "diag.gamma") {
      const double gmm = parse_double(value, line, key);
      if (!(gmm > 0.0 && gmm <= 1.0)) {
        fail(line, "diag.gamma must lie in (0, 1]");
      }
      cfg.diag_gamma = gmm;
    } else if (key == "diag.center") {
      const auto v = parse_double_list(value, line, key);
      if (v.size() != 3) fail(line, "diag.center needs exactly 3 numbers");
      cfg.diag_center = {v[0], v[1], v[2]};
    } else if (key == "diag.t0") {
      cfg.diag_t0 = parse_double(value, line, key);
      if (!(cfg.diag_t0 > 0.0)) fail(line, "diag.t0 must be > 0");
    } else if (key == "diag.radius") {
      const double r = parse_double(value, line, key);
      if (!(r > 0.0)) fail(line, "diag.radius must be > 0");
      cfg.diag_radius = r;
    } else if (key == "diag.lambda") {
      const double l = parse_double(value, line, key);
      if (!(l > 0.0)) fail(line, "diag.lambda must be > 0");
      cfg.diag_lambda = l;
    } else if (key == "diag.apriori_radius") {
      const double r = parse_double(value, line, key);
      if (!(r > 0.0)) fail(line, "diag.apriori_radius must be > 0");
      cfg.diag_apriori_radius = r;
    } else if (key == "diag.stride") {
      const long long i = parse_int(value, line, key);
      if (i < 1) fail(line, "diag.stride must be >= 1");
      cfg.diag_stride = static_cast<int>(i);
    } else if (key == "diag.budget") {
      const long long i = parse_int(value, line, key);
      if (i < 0) fail(line, "diag.budget must be >= 0");
      cfg.diag_budget = static_cast<int>(i);
    } else if (key == "seed") {
      cfg.seed = parse_u64(value, line, key);
    } else if (key == "output_dir") {
      cfg.output_dir = value;
    } else {
      fail(line, "unknown key '" + key + "'");
    }
  }

  // Resolve length defaults now that the grid is known.
  cfg.grid = make_grid(cfg.grid.n, cfg.grid.box_length);
  const double L = cfg.grid.box_length;
  const double h = cfg.grid.spacing();
  if (cfg.init.inner_radius == 0.0) cfg.init.inner_radius = 4.0 * h;
  if (cfg.init.outer_radius == 0.0) cfg.init.outer_radius = L / 4.0;
  if (cfg.init.cutoff_width == 0.0) cfg.init.cutoff_width = L / 8.0;
  if (cfg.decay_annulus_inner == 0.0) cfg.decay_annulus_inner = L / 16.0;
  if (cfg.decay_annulus_outer == 0.0) cfg.decay_annulus_outer = L / 4.0;
  if (cfg.diag_radius == 0.0) cfg.diag_radius = L / 8.0;
  if (cfg.diag_apriori_radius == 0.0) cfg.diag_apriori_radius = L / 8.0;
  if (cfg.diag_t0 < 0.0) cfg.diag_t0 = cfg.stepper.t_end;
  if (!have_output_times) cfg.output_times = {cfg.stepper.t_end};

  if (cfg.stepper.dt && cfg.stepper.cfl) {
    throw std::invalid_argument(
        "config: set at most one of stepper.dt and stepper.cfl");
  }
  if (!cfg.stepper.dt && !cfg.stepper.cfl) cfg.stepper.dt = 0.02;

  std::sort(cfg.output_times.begin(), cfg.output_times.end());
  cfg.output_times.erase(
      std::unique(cfg.output_times.begin(), cfg.output_times.end()),
      cfg.output_times.end());
  for (double t : cfg.output_times) {
    if (t > cfg.stepper.t_end + 1e-12) {
      throw std::invalid_argument(
          "config: output_times must not exceed stepper.t_end");
    }
  }
  if (!(cfg.decay_annulus_inner < cfg.decay_annulus_outer)) {
    throw std::invalid_argument(
        "config: decay.annulus_inner must be < decay.annulus_outer");
  }
  validate(cfg.init, cfg.grid);
  validate(cfg.params);
  return cfg;
}

std::string dump_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "grid.n = " << cfg.grid.n << "\n";
  out << "grid.box_length = " << fmt(cfg.grid.box_length) << "\n";
  out << "model.variant = "
      << (cfg.model.variant == ModelVariant::mod1 ? "mod1" : "mod2") << "\n";
  out << "model.pressure = "
      << (cfg.model.pressure_law == PressureLaw::quadratic ? "quadratic"
                                                           : "linear")
      << "\n";
  out << "kappa = " << fmt(cfg.params.kappa) << "\n";
  const char* preset = "e1";
  switch (cfg.init.trace.preset) {
    case SphereTrace::Preset::e1: preset = "e1"; break;
    case SphereTrace::Preset::e2: preset = "e2"; break;
    case SphereTrace::Preset::e3: preset = "e3"; break;
    case SphereTrace::Preset::radial: preset = "radial"; break;
    case SphereTrace::Preset::harmonic: preset = "harmonic"; break;
  }
  out << "init.preset = " << preset << "\n";
  out << "init.amplitude = " << fmt(cfg.init.amplitude) << "\n";
  out << "init.inner_radius = " << fmt(cfg.init.inner_radius) << "\n";
  out << "init.outer_radius = " << fmt(cfg.init.outer_radius) << "\n";
  out << "init.cutoff_width = " << fmt(cfg.init.cutoff_width) << "\n";
  for (int c = 0; c < 3; ++c)
    for (int i = 0; i < 9; ++i) {
      const double v = cfg.init.trace.coef[c][i];
      if (v != 0.0) {
        out << "init.harmonic." << (c + 1) << "." << i << " = " << fmt(v)
            << "\n";
      }
    }
  out << "stepper.scheme = "
      << (cfg.stepper.scheme == Scheme::etd_rk2 ? "etd_rk2" : "etd_rk4")
      << "\n";
  if (cfg.stepper.dt) out << "stepper.dt = " << fmt(*cfg.stepper.dt) << "\n";
  if (cfg.stepper.cfl) {
    out << "stepper.cfl = " << fmt(*cfg.stepper.cfl) << "\n";
  }
  out << "stepper.t_end = " << fmt(cfg.stepper.t_end) << "\n";
  out << "stepper.dealias = " << (cfg.stepper.dealias ? "true" : "false")
      << "\n";
  out << "output_times = ";
  for (std::size_t i = 0; i < cfg.output_times.size(); ++i) {
    if (i) out << ", ";
    out << fmt(cfg.output_times[i]);
  }
  out << "\n";
  out << "mild.tol = " << fmt(cfg.mild_tol) << "\n";
  out << "mild.max_iter = " << cfg.mild_max_iter << "\n";
  out << "mild.nodes = " << cfg.mild_nodes << "\n";
  out << "decay.annulus_inner = " << fmt(cfg.decay_annulus_inner) << "\n";
  out << "decay.annulus_outer = " << fmt(cfg.decay_annulus_outer) << "\n";
  out << "decay.shells = " << cfg.decay_shells << "\n";
  out << "decay.alphas = ";
  for (std::size_t i = 0; i < cfg.decay_alphas.size(); ++i) {
    if (i) out << "; ";
    out << cfg.decay_alphas[i][0] << " " << cfg.decay_alphas[i][1] << " "
        << cfg.decay_alphas[i][2];
  }
  out << "\n";
  out << "diag.theta = " << fmt(cfg.diag_theta) << "\n";
  out << "diag.gamma = " << fmt(cfg.diag_gamma) << "\n";
  out << "diag.center = " << fmt(cfg.diag_center[0]) << " "
      << fmt(cfg.diag_center[1]) << " " << fmt(cfg.diag_center[2]) << "\n";
  out << "diag.t0 = " << fmt(cfg.diag_t0) << "\n";
  out << "diag.radius = " << fmt(cfg.diag_radius) << "\n";
  out << "diag.lambda = " << fmt(cfg.diag_lambda) << "\n";
  out << "diag.apriori_radius = " << fmt(cfg.diag_apriori_radius) << "\n";
  out << "diag.stride = " << cfg.diag_stride << "\n";
  out << "diag.budget = " << cfg.diag_budget << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "output_dir = " << cfg.output_dir << "\n";
  return out.str();
}

}  // namespace lmf
