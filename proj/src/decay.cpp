#include "lmf/decay.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "lmf/operators.hpp"
#include "lmf/semigroup.hpp"

namespace lmf {
namespace {

// Pointwise Euclidean magnitude of the alpha-derivative of each component.
RealArray derivative_magnitude(const VectorField3& f,
                               const std::array<int, 3>& alpha) {
  if (alpha == std::array<int, 3>{0, 0, 0}) return magnitude(f);
  const Grid3& g = f.grid();
  const auto kd = wavenumbers_deriv(g);
  const SpectralVector f_hat = forward(f);
  SpectralVector d_hat = make_spectral_vector(g);
  std::size_t idx = 0;
  for (int iz = 0; iz < g.n; ++iz)
    for (int iy = 0; iy < g.n; ++iy)
      for (int ix = 0; ix < g.n; ++ix, ++idx) {
        std::complex<double> mult(1.0, 0.0);
        const double kv[3] = {kd[ix], kd[iy], kd[iz]};
        for (int a = 0; a < 3; ++a)
          for (int rep = 0; rep < alpha[a]; ++rep)
            mult *= std::complex<double>(0.0, kv[a]);
        for (int c = 0; c < 3; ++c) d_hat.comp[c].coef[idx] = mult * f_hat.comp[c].coef[idx];
      }
  return magnitude(inverse(d_hat));
}

}  // namespace

ShellTable shell_sup(const VectorField3& f, const std::array<int, 3>& alpha,
                     const std::vector<double>& radii) {
  require_finite(f, "shell_sup");
  const int order = alpha[0] + alpha[1] + alpha[2];
  if (alpha[0] < 0 || alpha[1] < 0 || alpha[2] < 0 || order > 2) {
    throw std::invalid_argument(
        "shell_sup: alpha entries must be >= 0 with |alpha| <= 2");
  }
  const Grid3& g = f.grid();
  const double h = g.spacing();
  if (radii.empty()) {
    throw std::invalid_argument("shell_sup: need at least one radius");
  }
  for (std::size_t i = 0; i < radii.size(); ++i) {
    // Tiny slack so a radius computed as exactly 2h through a log/exp
    // roundtrip is not rejected for its last bit.
    if (radii[i] < 2.0 * h * (1.0 - 1e-12)) {
      throw std::invalid_argument(
          "shell_sup: radii must be at least 2 grid spacings");
    }
    if (i > 0 && radii[i] <= radii[i - 1]) {
      throw std::invalid_argument(
          "shell_sup: radii must be strictly increasing");
    }
  }

  const RealArray mag = derivative_magnitude(f, alpha);
  ShellTable table;
  table.alpha = alpha;
  table.radii = radii;
  table.sup_values.assign(radii.size(), -1.0);
  for (int iz = 0; iz < g.n; ++iz)
    for (int iy = 0; iy < g.n; ++iy)
      for (int ix = 0; ix < g.n; ++ix) {
        const auto p = g.point(ix, iy, iz);
        const double r = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
        const double v = mag[g.index(ix, iy, iz)];
        for (std::size_t s = 0; s < radii.size(); ++s) {
          if (r >= radii[s] - h && r <= radii[s] + h) {
            table.sup_values[s] = std::max(table.sup_values[s], v);
          }
        }
      }
  for (std::size_t s = 0; s < radii.size(); ++s) {
    if (table.sup_values[s] < 0.0) {
      std::ostringstream msg;
      msg << "shell_sup: the shell at r = " << radii[s]
          << " contains no grid points";
      throw std::invalid_argument(msg.str());
    }
  }
  return table;
}

std::vector<double> default_shell_radii(const Grid3& grid, int count) {
  if (count < 2) {
    throw std::invalid_argument("default_shell_radii: count must be >= 2");
  }
  const double lo = std::log1p(grid.box_length / 16.0);
  const double hi = std::log1p(grid.box_length / 4.0);
  std::vector<double> radii(count);
  for (int i = 0; i < count; ++i) {
    radii[i] = std::expm1(lo + (hi - lo) * i / (count - 1));
  }
  // Pin the endpoints exactly; the expm1/log1p roundtrip can miss them by a
  // final bit, which matters when L/16 sits right on the 2h floor.
  radii.front() = grid.box_length / 16.0;
  radii.back() = grid.box_length / 4.0;
  return radii;
}

DecayFit fit_decay(const ShellTable& table) {
  DecayFit fit;
  fit.table = table;
  std::vector<double> X, Y;
  for (std::size_t i = 0; i < table.radii.size(); ++i) {
    if (table.sup_values[i] <= 0.0) {
      fit.excluded.push_back(static_cast<int>(i));
    } else {
      X.push_back(std::log1p(table.radii[i]));
      Y.push_back(std::log(table.sup_values[i]));
    }
  }
  if (X.size() < 5) {
    throw std::invalid_argument(
        "fit_decay: fewer than 5 shells with positive sup");
  }
  fit.shells_used = static_cast<int>(X.size());
  const auto m = static_cast<double>(X.size());
  double xbar = 0.0, ybar = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    xbar += X[i];
    ybar += Y[i];
  }
  xbar /= m;
  ybar /= m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    sxx += (X[i] - xbar) * (X[i] - xbar);
    sxy += (X[i] - xbar) * (Y[i] - ybar);
    syy += (Y[i] - ybar) * (Y[i] - ybar);
  }
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * xbar;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    const double e = Y[i] - (fit.intercept + fit.slope * X[i]);
    ss_res += e * e;
  }
  if (syy > 0.0) {
    fit.r2 = 1.0 - ss_res / syy;
  } else {
    fit.r2 = ss_res <= 1e-24 ? 1.0 : 0.0;
  }
  return fit;
}

std::vector<DecayReportEntry> decay_report(
    const Trajectory& traj, const VectorField3& u0, const LameParams& params,
    const std::vector<std::array<int, 3>>& alphas,
    const std::vector<double>& radii) {
  validate(params);
  if (alphas.empty()) {
    throw std::invalid_argument("decay_report: need at least one alpha");
  }
  const VectorField3& U = traj.at_time(1.0, "decay_report");
  const Grid3& g = U.grid();
  if (!(u0.grid() == g)) {
    throw std::invalid_argument(
        "decay_report: u0 grid differs from the trajectory grid");
  }
  const std::vector<double> shells =
      radii.empty() ? default_shell_radii(g) : radii;

  const VectorField3 V = lame_apply(u0, 1.0, params);
  VectorField3 D = U;
  for (int c = 0; c < 3; ++c) D.comp[c].values -= V.comp[c].values;

  const double floor =
      1e3 * std::numeric_limits<double>::epsilon() * max_abs(U);
  std::vector<DecayReportEntry> report;
  for (const auto& alpha : alphas) {
    DecayReportEntry entry;
    entry.alpha = alpha;
    const ShellTable diff_table = shell_sup(D, alpha, shells);
    double top = 0.0;
    for (double v : diff_table.sup_values) top = std::max(top, v);
    entry.below_noise_floor = top < floor;
    if (!entry.below_noise_floor) {
      entry.difference_fit = fit_decay(diff_table);
    } else {
      entry.difference_fit.table = diff_table;
    }
    entry.profile_fit = fit_decay(shell_sup(U, alpha, shells));
    report.push_back(std::move(entry));
  }
  return report;
}

}  // namespace lmf
