#include "lmf/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "lmf/errors.hpp"

namespace lmf {
namespace {

constexpr double kTimeTol = 1e-12;

// phi_k(z) = (e^z - sum_{j<k} z^j/j!)/z^k.  Direct formulas cancel badly
// near 0, so |z| <= 1/2 switches to the Taylor series (16 terms reach
// machine precision there).
struct Phi {
  double p1, p2, p3;
};

Phi phis(double z) {
  if (std::abs(z) > 0.5) {
    const double em = std::expm1(z);
    return {em / z, (em - z) / (z * z), (em - z - 0.5 * z * z) / (z * z * z)};
  }
  // 1/(k+1)!, 1/(k+2)!, 1/(k+3)! running denominators.
  double p = 1.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  double f1 = 1.0;  // (k+1)!
  for (int k = 0; k <= 15; ++k) {
    f1 *= (k + 1);
    const double f2 = f1 * (k + 2);
    const double f3 = f2 * (k + 3);
    s1 += p / f1;
    s2 += p / f2;
    s3 += p / f3;
    p *= z;
  }
  return {s1, s2, s3};
}

// Per-mode eigenvalues of the two Helmholtz families.
struct Eigenvalues {
  RealArray sol;
  RealArray grad;
};

Eigenvalues eigenvalues(const Grid3& g, double kappa) {
  Eigenvalues ev{RealArray(g.size()), RealArray(g.size())};
  const auto kf = wavenumbers_full(g);
  const auto kd = wavenumbers_deriv(g);
  std::size_t idx = 0;
  for (int iz = 0; iz < g.n; ++iz)
    for (int iy = 0; iy < g.n; ++iy)
      for (int ix = 0; ix < g.n; ++ix, ++idx) {
        const double k2 = kf[ix] * kf[ix] + kf[iy] * kf[iy] + kf[iz] * kf[iz];
        const double kd2 = kd[ix] * kd[ix] + kd[iy] * kd[iy] + kd[iz] * kd[iz];
        ev.sol[idx] = -k2;
        ev.grad[idx] = -(k2 + kappa * kd2);
      }
  return ev;
}

// Exponential-integrator coefficient tables for one family at step h.
// Cox-Matthews: stages use E_half and Q = (h/2) phi1(hL/2); the update uses
// a = h(phi1 - 3 phi2 + 4 phi3), b = h(phi2 - 2 phi3), c = h(4 phi3 - phi2)
// at z = hL.  The two-stage scheme uses A = h phi1, B = h phi2.
struct FamilyTables {
  RealArray E, E_half, Q, a, b, c;  // etd_rk4
  RealArray A, B;                   // etd_rk2 (E shared)
};

FamilyTables build_tables(const RealArray& lambda, double h, Scheme scheme) {
  const Eigen::Index n = lambda.size();
  FamilyTables t;
  t.E.resize(n);
  if (scheme == Scheme::etd_rk4) {
    t.E_half.resize(n);
    t.Q.resize(n);
    t.a.resize(n);
    t.b.resize(n);
    t.c.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double z = h * lambda[i];
      t.E[i] = std::exp(z);
      t.E_half[i] = std::exp(0.5 * z);
      t.Q[i] = 0.5 * h * phis(0.5 * z).p1;
      const Phi p = phis(z);
      t.a[i] = h * (p.p1 - 3.0 * p.p2 + 4.0 * p.p3);
      t.b[i] = h * (p.p2 - 2.0 * p.p3);
      t.c[i] = h * (4.0 * p.p3 - p.p2);
    }
  } else {
    t.A.resize(n);
    t.B.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double z = h * lambda[i];
      const Phi p = phis(z);
      t.E[i] = std::exp(z);
      t.A[i] = h * p.p1;
      t.B[i] = h * p.p2;
    }
  }
  return t;
}

struct StepTables {
  FamilyTables sol;
  FamilyTables grad;
};

// State = (solenoidal, gradient) coefficient pair; the semigroup acts
// diagonally on each part.
struct SplitState {
  SpectralVector sol;
  SpectralVector grad;
};

SpectralVector combined(const SplitState& s) {
  SpectralVector u = s.sol;
  for (int c = 0; c < 3; ++c) u.comp[c].coef += s.grad.comp[c].coef;
  return u;
}

// dst = table .* src, per component.
SpectralVector scaled(const RealArray& table, const SpectralVector& src) {
  SpectralVector out = src;
  for (int c = 0; c < 3; ++c) {
    auto& a = out.comp[c].coef;
    for (Eigen::Index i = 0; i < a.size(); ++i) a[i] *= table[i];
  }
  return out;
}

void add_scaled(SpectralVector& dst, const RealArray& table,
                const SpectralVector& src, double factor = 1.0) {
  for (int c = 0; c < 3; ++c) {
    auto& d = dst.comp[c].coef;
    const auto& s = src.comp[c].coef;
    for (Eigen::Index i = 0; i < d.size(); ++i) d[i] += factor * table[i] * s[i];
  }
}

// F = -N(u), optionally dealiased, split into families.
SplitState forcing(const SpectralVector& u, const ModelKind& model,
                   bool dealias) {
  SpectralVector N = nonlinearity_hat(u, model);
  for (int c = 0; c < 3; ++c) N.comp[c].coef = -N.comp[c].coef;
  if (dealias) apply_dealias_mask(N);
  SplitState f{make_spectral_vector(u.grid()), make_spectral_vector(u.grid())};
  helmholtz_split_hat(N, f.sol, f.grad);
  return f;
}

double energy_of(const SpectralVector& u) {
  const double L = u.grid().box_length;
  double s = 0.0;
  for (const auto& c : u.comp) s += c.coef.abs2().sum();
  return 0.5 * L * L * L * s;
}

double dissipation_of(const SpectralVector& u, double kappa) {
  const Grid3& g = u.grid();
  const auto kd = wavenumbers_deriv(g);
  double grad2 = 0.0, div2 = 0.0;
  std::size_t idx = 0;
  for (int iz = 0; iz < g.n; ++iz)
    for (int iy = 0; iy < g.n; ++iy)
      for (int ix = 0; ix < g.n; ++ix, ++idx) {
        const double kv[3] = {kd[ix], kd[iy], kd[iz]};
        std::complex<double> div(0.0, 0.0);
        for (int c = 0; c < 3; ++c) {
          const auto v = u.comp[c].coef[idx];
          grad2 += (kv[0] * kv[0] + kv[1] * kv[1] + kv[2] * kv[2]) *
                   std::norm(v);
          div += kv[c] * v;
        }
        div2 += std::norm(div);
      }
  const double L = g.box_length;
  return L * L * L * (grad2 + kappa * div2);
}

std::vector<double> merge_targets(const StepperConfig& cfg) {
  std::vector<double> targets = cfg.output_times;
  targets.push_back(cfg.t_end);
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end(),
                            [](double a, double b) {
                              return std::abs(a - b) < kTimeTol;
                            }),
                targets.end());
  for (double t : targets) {
    if (t < -kTimeTol || t > cfg.t_end + kTimeTol) {
      throw std::invalid_argument(
          "evolve: output times must lie within [0, t_end]");
    }
  }
  return targets;
}

}  // namespace

const VectorField3& Trajectory::at_time(double t, const char* who) const {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (std::abs(times[i] - t) <= 1e-9 * std::max(1.0, std::abs(t)))
      return snapshots[i];
  }
  std::ostringstream msg;
  msg << who << ": time " << t << " is not a retained snapshot";
  throw std::invalid_argument(msg.str());
}

double cfl_dt(const VectorField3& u, const Grid3& grid, double cfl,
              const LameParams& params) {
  validate(params);
  if (!(cfl > 0.0 && cfl <= 1.0)) {
    throw std::invalid_argument("cfl_dt: cfl must lie in (0, 1]");
  }
  const double h = grid.spacing();
  return cfl * h / std::max(max_abs(u), h);
}

Trajectory evolve(const VectorField3& u0, const ModelKind& model,
                  const LameParams& params, const StepperConfig& cfg) {
  validate(params);
  require_finite(u0, "evolve");
  if (cfg.dt.has_value() == cfg.cfl.has_value()) {
    throw std::invalid_argument("evolve: provide exactly one of dt and cfl");
  }
  if (cfg.dt && !(*cfg.dt > 0.0)) {
    throw std::invalid_argument("evolve: dt must be > 0");
  }
  if (cfg.cfl && !(*cfg.cfl > 0.0 && *cfg.cfl <= 1.0)) {
    throw std::invalid_argument("evolve: cfl must lie in (0, 1]");
  }
  if (!(cfg.t_end > 0.0)) {
    throw std::invalid_argument("evolve: t_end must be > 0");
  }
  const Grid3& g = u0.grid();
  const std::vector<double> targets = merge_targets(cfg);
  const Eigenvalues ev = eigenvalues(g, params.kappa);

  SpectralVector u_hat = forward(u0);
  if (cfg.dealias) apply_dealias_mask(u_hat);
  SplitState state{make_spectral_vector(g), make_spectral_vector(g)};
  helmholtz_split_hat(u_hat, state.sol, state.grad);

  Trajectory traj;
  traj.model = model;
  traj.params = params;
  const double guard = 1e6 * max_abs(inverse(combined(state)));

  auto record_energy = [&](double t) {
    const SpectralVector u = combined(state);
    traj.energy_times.push_back(t);
    traj.energy.push_back(energy_of(u));
    traj.dissipation.push_back(dissipation_of(u, params.kappa));
  };
  auto retain = [&](double t) {
    traj.times.push_back(t);
    traj.snapshots.push_back(inverse(combined(state)));
  };

  record_energy(0.0);
  std::size_t target_i = 0;
  if (std::abs(targets.front()) < kTimeTol) {
    retain(0.0);
    ++target_i;
  } else {
    retain(0.0);
  }

  std::map<double, StepTables> table_cache;
  auto tables_for = [&](double h) -> const StepTables& {
    auto it = table_cache.find(h);
    if (it == table_cache.end()) {
      if (table_cache.size() > 64) table_cache.clear();
      it = table_cache
               .emplace(h, StepTables{build_tables(ev.sol, h, cfg.scheme),
                                      build_tables(ev.grad, h, cfg.scheme)})
               .first;
    }
    return it->second;
  };

  double t = 0.0;
  while (t < cfg.t_end - kTimeTol) {
    VectorField3 u_phys = inverse(combined(state));
    const double amp = max_abs(u_phys);
    if (!std::isfinite(amp) || (guard > 0.0 && amp > guard)) {
      std::ostringstream msg;
      msg << "evolve: blow-up guard tripped at t = " << t
          << " (|u|_inf = " << amp << " exceeds 1e6 x initial)";
      throw NumericalAbort(msg.str());
    }

    double h = cfg.dt ? *cfg.dt : cfl_dt(u_phys, g, *cfg.cfl, params);
    double landed_target = -1.0;
    if (target_i < targets.size() && t + h >= targets[target_i] - kTimeTol) {
      landed_target = targets[target_i];
      h = landed_target - t;
    }
    const StepTables& T = tables_for(h);

    const SpectralVector u = combined(state);
    const SplitState n0 = forcing(u, model, cfg.dealias);
    if (cfg.scheme == Scheme::etd_rk4) {
      SplitState sa{scaled(T.sol.E_half, state.sol),
                    scaled(T.grad.E_half, state.grad)};
      add_scaled(sa.sol, T.sol.Q, n0.sol);
      add_scaled(sa.grad, T.grad.Q, n0.grad);
      const SplitState na = forcing(combined(sa), model, cfg.dealias);

      SplitState sb{scaled(T.sol.E_half, state.sol),
                    scaled(T.grad.E_half, state.grad)};
      add_scaled(sb.sol, T.sol.Q, na.sol);
      add_scaled(sb.grad, T.grad.Q, na.grad);
      const SplitState nb = forcing(combined(sb), model, cfg.dealias);

      SplitState sc{scaled(T.sol.E_half, sa.sol),
                    scaled(T.grad.E_half, sa.grad)};
      add_scaled(sc.sol, T.sol.Q, nb.sol, 2.0);
      add_scaled(sc.sol, T.sol.Q, n0.sol, -1.0);
      add_scaled(sc.grad, T.grad.Q, nb.grad, 2.0);
      add_scaled(sc.grad, T.grad.Q, n0.grad, -1.0);
      const SplitState nc = forcing(combined(sc), model, cfg.dealias);

      SplitState next{scaled(T.sol.E, state.sol), scaled(T.grad.E, state.grad)};
      add_scaled(next.sol, T.sol.a, n0.sol);
      add_scaled(next.sol, T.sol.b, na.sol, 2.0);
      add_scaled(next.sol, T.sol.b, nb.sol, 2.0);
      add_scaled(next.sol, T.sol.c, nc.sol);
      add_scaled(next.grad, T.grad.a, n0.grad);
      add_scaled(next.grad, T.grad.b, na.grad, 2.0);
      add_scaled(next.grad, T.grad.b, nb.grad, 2.0);
      add_scaled(next.grad, T.grad.c, nc.grad);
      state = std::move(next);
    } else {
      SplitState sa{scaled(T.sol.E, state.sol), scaled(T.grad.E, state.grad)};
      add_scaled(sa.sol, T.sol.A, n0.sol);
      add_scaled(sa.grad, T.grad.A, n0.grad);
      const SplitState na = forcing(combined(sa), model, cfg.dealias);

      SplitState next = sa;
      add_scaled(next.sol, T.sol.B, na.sol);
      add_scaled(next.sol, T.sol.B, n0.sol, -1.0);
      add_scaled(next.grad, T.grad.B, na.grad);
      add_scaled(next.grad, T.grad.B, n0.grad, -1.0);
      state = std::move(next);
    }

    t = landed_target >= 0.0 ? landed_target : t + h;
    record_energy(t);
    if (landed_target >= 0.0) {
      retain(t);
      ++target_i;
    }
  }
  return traj;
}

MildResult mild_solve(const VectorField3& u0, const ModelKind& model,
                      const LameParams& params, double t_end, double tol,
                      int max_iter, int node_count) {
  validate(params);
  require_finite(u0, "mild_solve");
  if (!(t_end > 0.0)) {
    throw std::invalid_argument("mild_solve: t_end must be > 0");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("mild_solve: tol must be > 0");
  if (max_iter < 1) {
    throw std::invalid_argument("mild_solve: max_iter must be >= 1");
  }
  if (node_count < 3 || node_count % 2 == 0) {
    throw std::invalid_argument(
        "mild_solve: node_count must be odd and >= 3");
  }
  const Grid3& g = u0.grid();
  const int M = node_count - 1;
  const double h = t_end / M;
  const Eigenvalues ev = eigenvalues(g, params.kappa);

  // One-step semigroup multipliers per family.
  RealArray Ps(g.size()), Pg(g.size());
  for (Eigen::Index i = 0; i < Ps.size(); ++i) {
    Ps[i] = std::exp(ev.sol[i] * h);
    Pg[i] = std::exp(ev.grad[i] * h);
  }

  SpectralVector u0_hat = forward(u0);
  apply_dealias_mask(u0_hat);
  SplitState init{make_spectral_vector(g), make_spectral_vector(g)};
  helmholtz_split_hat(u0_hat, init.sol, init.grad);

  // Linear term S(t_i) u0 at every node, via direct exponentials.
  std::vector<SpectralVector> lin(node_count);
  for (int i = 0; i < node_count; ++i) {
    SplitState s = init;
    lame_apply_hat(s.sol, s.grad, h * i, params);
    lin[i] = combined(s);
  }

  // Quadrature weights for the target node i over nodes 0..i: composite
  // Simpson over the even prefix, plus a backward three-point parabola
  // (-1/12, 8/12, 5/12) for odd i (trapezoid when i = 1).
  auto weights_for = [&](int i) {
    std::vector<double> w(i + 1, 0.0);
    const int ieven = (i % 2 == 0) ? i : i - 1;
    if (ieven >= 2) {
      w[0] += 1.0 / 3.0;
      w[ieven] += 1.0 / 3.0;
      for (int j = 1; j < ieven; ++j) w[j] += (j % 2 == 1 ? 4.0 : 2.0) / 3.0;
    }
    if (i % 2 == 1) {
      if (i >= 3) {
        w[i - 2] += -1.0 / 12.0;
        w[i - 1] += 8.0 / 12.0;
        w[i] += 5.0 / 12.0;
      } else {
        w[0] += 0.5;
        w[1] += 0.5;
      }
    }
    for (double& x : w) x *= h;
    return w;
  };
  std::vector<std::vector<double>> weights(node_count);
  for (int i = 0; i < node_count; ++i) weights[i] = weights_for(i);

  std::vector<SpectralVector> prev = lin;
  MildResult result;
  int rising = 0;
  for (int iter = 0; iter < max_iter; ++iter) {
    // N at every node of the previous iterate, masked and split.
    std::vector<SplitState> N(node_count,
                              SplitState{make_spectral_vector(g),
                                         make_spectral_vector(g)});
    for (int i = 0; i < node_count; ++i) {
      SpectralVector n = nonlinearity_hat(prev[i], model);
      apply_dealias_mask(n);
      helmholtz_split_hat(n, N[i].sol, N[i].grad);
    }

    std::vector<SpectralVector> next(node_count);
    next[0] = lin[0];
    for (int i = 1; i < node_count; ++i) {
      // Ascending Horner: after the loop, node j has been propagated by
      // (i - j) semigroup steps, giving sum_j S((i-j)h) w_j N_j.
      SplitState acc{make_spectral_vector(g), make_spectral_vector(g)};
      const auto& w = weights[i];
      for (int j = 0; j <= i; ++j) {
        if (j > 0) {
          for (int c = 0; c < 3; ++c) {
            auto& as = acc.sol.comp[c].coef;
            auto& ag = acc.grad.comp[c].coef;
            for (Eigen::Index m = 0; m < as.size(); ++m) {
              as[m] *= Ps[m];
              ag[m] *= Pg[m];
            }
          }
        }
        if (w[j] != 0.0) {
          for (int c = 0; c < 3; ++c) {
            acc.sol.comp[c].coef += w[j] * N[j].sol.comp[c].coef;
            acc.grad.comp[c].coef += w[j] * N[j].grad.comp[c].coef;
          }
        }
      }
      next[i] = lin[i];
      for (int c = 0; c < 3; ++c) {
        next[i].comp[c].coef -=
            acc.sol.comp[c].coef + acc.grad.comp[c].coef;
      }
    }

    double d = 0.0;
    for (int i = 0; i < node_count; ++i) {
      SpectralVector diff = next[i];
      for (int c = 0; c < 3; ++c) diff.comp[c].coef -= prev[i].comp[c].coef;
      d = std::max(d, l2_norm_hat(diff));
    }
    result.sup_diffs.push_back(d);
    if (result.sup_diffs.size() >= 2) {
      const double ratio = d / result.sup_diffs[result.sup_diffs.size() - 2];
      result.ratios.push_back(ratio);
      rising = ratio >= 1.0 ? rising + 1 : 0;
      if (rising >= 3) {
        throw NumericalAbort(
            "mild_solve: difference ratio >= 1 for 3 consecutive iterations; "
            "reduce t_end or the data amplitude");
      }
    }
    prev = std::move(next);
    result.iterations = iter + 1;
    if (d <= tol) {
      result.converged = true;
      break;
    }
  }
  if (!result.converged) {
    throw NumericalAbort("mild_solve: max_iter exhausted before reaching tol");
  }

  Trajectory traj;
  traj.model = model;
  traj.params = params;
  for (int i = 0; i < node_count; ++i) {
    traj.times.push_back(h * i);
    traj.snapshots.push_back(inverse(prev[i]));
    traj.energy_times.push_back(h * i);
    traj.energy.push_back(energy_of(prev[i]));
    traj.dissipation.push_back(dissipation_of(prev[i], params.kappa));
  }
  result.trajectory = std::move(traj);
  return result;
}

}  // namespace lmf
