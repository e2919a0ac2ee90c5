#include "lmf/semigroup.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lmf {
namespace {

using Complex = std::complex<double>;

// Simpson weights for an odd number of uniform samples spanning [0, t].
std::vector<double> simpson_weights(std::size_t count, double t) {
  if (count < 3) {
    throw std::invalid_argument(
        "duhamel: need at least 3 uniformly spaced time samples");
  }
  if (count % 2 == 0) {
    throw std::invalid_argument(
        "duhamel: composite Simpson needs an odd sample count, got " +
        std::to_string(count));
  }
  const double h = t / static_cast<double>(count - 1);
  std::vector<double> w(count, 0.0);
  w.front() = w.back() = h / 3.0;
  for (std::size_t i = 1; i + 1 < count; ++i)
    w[i] = (i % 2 == 1 ? 4.0 : 2.0) * h / 3.0;
  return w;
}

// Eigenvalues of the two Helmholtz families at one mode.
struct ModeEigen {
  double sol;   // -|k|^2
  double grad;  // -(|k|^2 + kappa |k_d|^2)
};

template <typename Op>
void for_each_mode(const Grid3& g, double kappa, Op&& op) {
  const auto kf = wavenumbers_full(g);
  const auto kd = wavenumbers_deriv(g);
  std::size_t idx = 0;
  for (int iz = 0; iz < g.n; ++iz)
    for (int iy = 0; iy < g.n; ++iy)
      for (int ix = 0; ix < g.n; ++ix, ++idx) {
        const double k2 =
            kf[ix] * kf[ix] + kf[iy] * kf[iy] + kf[iz] * kf[iz];
        const double kd2 =
            kd[ix] * kd[ix] + kd[iy] * kd[iy] + kd[iz] * kd[iz];
        op(idx, ModeEigen{-k2, -(k2 + kappa * kd2)});
      }
}

}  // namespace

void validate(const LameParams& params) {
  if (!(params.kappa >= 0.0)) {
    throw std::invalid_argument("params: kappa must be >= 0");
  }
}

double heat_kernel(const HeatKernelQuery& q) {
  if (!(q.nu > 0.0)) throw std::invalid_argument("heat_kernel: nu must be > 0");
  if (!(q.t > 0.0)) throw std::invalid_argument("heat_kernel: t must be > 0");
  const double r2 = q.x[0] * q.x[0] + q.x[1] * q.x[1] + q.x[2] * q.x[2];
  const double d = 4.0 * M_PI * q.nu * q.t;
  return std::pow(d, -1.5) * std::exp(-r2 / (4.0 * q.nu * q.t));
}

void lame_apply_hat(SpectralVector& sol, SpectralVector& grad, double t,
                    const LameParams& params) {
  for_each_mode(sol.grid(), params.kappa, [&](std::size_t idx,
                                              const ModeEigen& ev) {
    const double es = std::exp(ev.sol * t);
    const double eg = std::exp(ev.grad * t);
    for (int c = 0; c < 3; ++c) {
      sol.comp[c].coef[idx] *= es;
      grad.comp[c].coef[idx] *= eg;
    }
  });
}

VectorField3 lame_apply(const VectorField3& u0, double t,
                        const LameParams& params) {
  validate(params);
  require_finite(u0, "lame_apply");
  if (t < 0.0) throw std::invalid_argument("lame_apply: t must be >= 0");
  if (t == 0.0) return u0;
  SpectralVector u_hat = forward(u0);
  SpectralVector sol, grad;
  helmholtz_split_hat(u_hat, sol, grad);
  lame_apply_hat(sol, grad, t, params);
  for (int c = 0; c < 3; ++c) sol.comp[c].coef += grad.comp[c].coef;
  return inverse(sol);
}

VectorField3 lame_solve_force(const std::vector<VectorField3>& f_samples,
                              double t, const LameParams& params) {
  validate(params);
  const auto w = simpson_weights(f_samples.size(), t);
  const Grid3& g = f_samples.front().grid();
  const double h = t / static_cast<double>(f_samples.size() - 1);
  SpectralVector acc_sol = make_spectral_vector(g);
  SpectralVector acc_grad = make_spectral_vector(g);
  for (std::size_t i = 0; i < f_samples.size(); ++i) {
    require_finite(f_samples[i], "lame_solve_force");
    SpectralVector f_hat = forward(f_samples[i]);
    SpectralVector fs, fg;
    helmholtz_split_hat(f_hat, fs, fg);
    const double tau = t - h * static_cast<double>(i);
    for_each_mode(g, params.kappa, [&](std::size_t idx, const ModeEigen& ev) {
      const double es = w[i] * std::exp(ev.sol * tau);
      const double eg = w[i] * std::exp(ev.grad * tau);
      for (int c = 0; c < 3; ++c) {
        acc_sol.comp[c].coef[idx] += es * fs.comp[c].coef[idx];
        acc_grad.comp[c].coef[idx] += eg * fg.comp[c].coef[idx];
      }
    });
  }
  for (int c = 0; c < 3; ++c) acc_sol.comp[c].coef += acc_grad.comp[c].coef;
  return inverse(acc_sol);
}

namespace {

std::vector<SpectralVector> divergence_samples(
    const std::vector<TensorField33>& F_samples) {
  std::vector<SpectralVector> out;
  out.reserve(F_samples.size());
  for (const auto& F : F_samples) {
    SpectralVector div_hat = make_spectral_vector(F[0].grid());
    for (int i = 0; i < 3; ++i) {
      require_finite(F[i], "lame_solve_divforce");
      div_hat.comp[i] = divergence_hat(forward(F[i]));
    }
    out.push_back(std::move(div_hat));
  }
  return out;
}

}  // namespace

VectorField3 lame_solve_divforce(const std::vector<TensorField33>& F_samples,
                                 double t, const LameParams& params) {
  validate(params);
  const auto w = simpson_weights(F_samples.size(), t);
  const Grid3& g = F_samples.front()[0].grid();
  const double h = t / static_cast<double>(F_samples.size() - 1);
  const auto div_hats = divergence_samples(F_samples);
  SpectralVector acc_sol = make_spectral_vector(g);
  SpectralVector acc_grad = make_spectral_vector(g);
  for (std::size_t i = 0; i < div_hats.size(); ++i) {
    SpectralVector fs, fg;
    helmholtz_split_hat(div_hats[i], fs, fg);
    const double tau = t - h * static_cast<double>(i);
    for_each_mode(g, params.kappa, [&](std::size_t idx, const ModeEigen& ev) {
      const double es = w[i] * std::exp(ev.sol * tau);
      const double eg = w[i] * std::exp(ev.grad * tau);
      for (int c = 0; c < 3; ++c) {
        acc_sol.comp[c].coef[idx] += es * fs.comp[c].coef[idx];
        acc_grad.comp[c].coef[idx] += eg * fg.comp[c].coef[idx];
      }
    });
  }
  for (int c = 0; c < 3; ++c) acc_sol.comp[c].coef += acc_grad.comp[c].coef;
  return inverse(acc_sol);
}

VectorField3 lame_solve_divforce_twostep(
    const std::vector<TensorField33>& F_samples, double t,
    const LameParams& params) {
  validate(params);
  const auto w = simpson_weights(F_samples.size(), t);
  const Grid3& g = F_samples.front()[0].grid();
  const double h = t / static_cast<double>(F_samples.size() - 1);
  const auto kd = wavenumbers_deriv(g);
  const auto kfull = wavenumbers_full(g);
  const auto div_hats = divergence_samples(F_samples);
  SpectralVector acc1 = make_spectral_vector(g);  // viscosity 1 + kappa
  SpectralVector acc2 = make_spectral_vector(g);  // viscosity 1
  const double nu1 = 1.0 + params.kappa;
  for (std::size_t i = 0; i < F_samples.size(); ++i) {
    // Delta q = div div F  =>  q_hat = sum_ab k_a k_b F_ab / |k_d|^2.
    SpectralScalar q = make_spectral_scalar(g);
    std::size_t idx = 0;
    for (int iz = 0; iz < g.n; ++iz)
      for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix, ++idx) {
          const double kv[3] = {kd[ix], kd[iy], kd[iz]};
          const double k2 = kv[0] * kv[0] + kv[1] * kv[1] + kv[2] * kv[2];
          if (k2 == 0.0) continue;
          Complex s(0.0, 0.0);
          for (int a = 0; a < 3; ++a) {
            // Row a of the tensor sample, transformed on demand below, would
            // cost nine transforms per node; instead reuse div F:
            // sum_ab k_a k_b F_ab = sum_a k_a * (-i) * (div F)_a.
            s += kv[a] * Complex(0.0, -1.0) * div_hats[i].comp[a].coef[idx];
          }
          q.coef[idx] = s / k2;
        }
    // grad q forcing for the (1+kappa)-heat solve; div F - grad q for the
    // plain heat solve.  (The leftover divergence-free forcing must be
    // div F - grad q for the sum to solve the grad-div system.)
    const double tau = t - h * static_cast<double>(i);
    idx = 0;
    for (int iz = 0; iz < g.n; ++iz)
      for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix, ++idx) {
          const double kv[3] = {kd[ix], kd[iy], kd[iz]};
          const double k2 = kfull[ix] * kfull[ix] + kfull[iy] * kfull[iy] +
                            kfull[iz] * kfull[iz];
          const double e1 = w[i] * std::exp(-nu1 * k2 * tau);
          const double e2 = w[i] * std::exp(-k2 * tau);
          for (int c = 0; c < 3; ++c) {
            const Complex gradq = Complex(0.0, 1.0) * kv[c] * q.coef[idx];
            acc1.comp[c].coef[idx] += e1 * gradq;
            acc2.comp[c].coef[idx] +=
                e2 * (div_hats[i].comp[c].coef[idx] - gradq);
          }
        }
  }
  for (int c = 0; c < 3; ++c) acc1.comp[c].coef += acc2.comp[c].coef;
  return inverse(acc1);
}

}  // namespace lmf
