#include "lmf/selfsimilar.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include <Eigen/Dense>

#include "lmf/helmholtz.hpp"
#include "lmf/operators.hpp"

namespace lmf {
namespace {

using Mat = Eigen::MatrixXcd;

// Evaluation matrix for one axis: row j is the trigonometric evaluation of
// every retained mode at lambda * p_j.  The Nyquist slot gets cos so that
// Hermitian (real-field) inputs stay real after the three contractions.
Mat evaluation_matrix(const Grid3& src, const Grid3& out, double lambda) {
  const int n = src.n;
  Mat E(out.n, n);
  for (int j = 0; j < out.n; ++j) {
    const double p = lambda * out.coord(j);
    for (int s = 0; s < n; ++s) {
      const double k = 2.0 * M_PI * mode_of(s, n) / src.box_length;
      if (s == n / 2) {
        E(j, s) = std::complex<double>(std::cos(k * p), 0.0);
      } else {
        E(j, s) = std::exp(std::complex<double>(0.0, k * p));
      }
    }
  }
  return E;
}

}  // namespace

VectorField3 rescale(const VectorField3& u, double lambda,
                     const Grid3& grid_out) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("rescale: lambda must be positive and finite");
  }
  const Grid3& src = u.grid();
  const double reach = lambda * grid_out.box_length / 2.0;
  if (reach > src.box_length / 2.0 + 1e-9 * src.box_length) {
    std::ostringstream msg;
    msg << "rescale: lambda * output box half-width " << reach
        << " exceeds the source half-width " << src.box_length / 2.0;
    throw std::invalid_argument(msg.str());
  }
  require_finite(u, "rescale");

  const SpectralVector u_hat = forward(u);
  const int n = src.n;
  const int m = grid_out.n;
  const Mat E = evaluation_matrix(src, grid_out, lambda);
  const Mat Et = E.transpose();

  VectorField3 out = make_vector(grid_out);
  Mat T2(m, static_cast<Eigen::Index>(m) * n);
  for (int c = 0; c < 3; ++c) {
    Eigen::Map<const Mat> M0(u_hat.comp[c].coef.data(), n,
                             static_cast<Eigen::Index>(n) * n);
    const Mat T1 = E * M0;  // rows jx, cols (iy, iz)
    for (int iz = 0; iz < n; ++iz) {
      T2.middleCols(static_cast<Eigen::Index>(iz) * m, m).noalias() =
          T1.middleCols(static_cast<Eigen::Index>(iz) * n, n) * Et;
    }
    // T2 memory is jx + m*jy + m^2*iz, so the same buffer re-viewed as
    // (m^2 x n) contracts the z axis directly into x-fastest output order.
    Eigen::Map<const Mat> T2r(T2.data(), static_cast<Eigen::Index>(m) * m, n);
    const Mat O = T2r * Et;  // rows (jx, jy), cols jz
    auto& vals = out.comp[c].values;
    const std::complex<double>* od = O.data();
    for (Eigen::Index i = 0; i < vals.size(); ++i) {
      vals[i] = lambda * od[i].real();
    }
  }
  return out;
}

DefectReport self_similarity_defect(const Trajectory& traj, double t1,
                                    double t2, double r_min, double r_max) {
  if (!(t1 > 0.0) || !(t2 > 0.0)) {
    throw std::invalid_argument(
        "self_similarity_defect: times must be positive");
  }
  if (t1 > t2) std::swap(t1, t2);  // the defect is symmetric
  if (t2 - t1 < 1e-12 * std::max(1.0, t2)) {
    throw std::invalid_argument(
        "self_similarity_defect: times must be distinct");
  }
  if (traj.snapshots.empty()) {
    throw std::invalid_argument("self_similarity_defect: empty trajectory");
  }
  const Grid3& g = traj.snapshots.front().grid();
  const double L = g.box_length;
  if (r_min <= 0.0) r_min = L / 16.0;
  if (r_max <= 0.0) r_max = L / 4.0;
  if (!(r_min < r_max)) {
    throw std::invalid_argument(
        "self_similarity_defect: need r_min < r_max");
  }

  const VectorField3& u1 = traj.at_time(t1, "self_similarity_defect");
  const VectorField3& u2 = traj.at_time(t2, "self_similarity_defect");
  const VectorField3 v1 = rescale(u1, std::sqrt(t1), g);
  const VectorField3 v2 = rescale(u2, std::sqrt(t2), g);

  double num = 0.0, den1 = 0.0, den2 = 0.0;
  for (int iz = 0; iz < g.n; ++iz)
    for (int iy = 0; iy < g.n; ++iy)
      for (int ix = 0; ix < g.n; ++ix) {
        const auto p = g.point(ix, iy, iz);
        const double r = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
        if (r < r_min || r > r_max) continue;
        const std::size_t idx = g.index(ix, iy, iz);
        for (int c = 0; c < 3; ++c) {
          const double a = v1.comp[c].values[idx];
          const double b = v2.comp[c].values[idx];
          num += (a - b) * (a - b);
          den1 += a * a;
          den2 += b * b;
        }
      }
  DefectReport report;
  const double den = std::sqrt(std::max(den1, den2));
  if (den == 0.0) {
    report.degenerate = true;
    report.value = 0.0;
  } else {
    report.value = std::sqrt(num) / den;
  }
  return report;
}

ProfileReport profile_residual(const VectorField3& U, const ModelKind& model,
                               const LameParams& params,
                               ProfileReport::Source source) {
  validate(params);
  require_finite(U, "profile_residual");
  const Grid3& g = U.grid();
  const SpectralVector u_hat = forward(U);
  const auto kf = wavenumbers_full(g);
  const auto kd = wavenumbers_deriv(g);

  // -Delta U - kappa grad div U in spectral space.
  SpectralVector lin_hat = make_spectral_vector(g);
  {
    std::size_t idx = 0;
    for (int iz = 0; iz < g.n; ++iz)
      for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix, ++idx) {
          const double k2 =
              kf[ix] * kf[ix] + kf[iy] * kf[iy] + kf[iz] * kf[iz];
          const double kv[3] = {kd[ix], kd[iy], kd[iz]};
          std::complex<double> kdotu(0.0, 0.0);
          for (int c = 0; c < 3; ++c) kdotu += kv[c] * u_hat.comp[c].coef[idx];
          for (int c = 0; c < 3; ++c) {
            lin_hat.comp[c].coef[idx] =
                k2 * u_hat.comp[c].coef[idx] + params.kappa * kv[c] * kdotu;
          }
        }
  }
  VectorField3 residual = inverse(lin_hat);

  // Drift and zeroth-order terms use the centered (non-periodic) coordinate.
  std::array<VectorField3, 3> dU{};
  for (int a = 0; a < 3; ++a) {
    SpectralVector d = make_spectral_vector(g);
    std::size_t idx = 0;
    for (int iz = 0; iz < g.n; ++iz)
      for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix, ++idx) {
          const double ka = a == 0 ? kd[ix] : (a == 1 ? kd[iy] : kd[iz]);
          const std::complex<double> ik(0.0, ka);
          for (int c = 0; c < 3; ++c) {
            d.comp[c].coef[idx] = ik * u_hat.comp[c].coef[idx];
          }
        }
    dU[a] = inverse(d);
  }
  {
    std::size_t idx = 0;
    for (int iz = 0; iz < g.n; ++iz)
      for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix, ++idx) {
          const auto p = g.point(ix, iy, iz);
          for (int c = 0; c < 3; ++c) {
            double drift = 0.0;
            for (int a = 0; a < 3; ++a) {
              drift += 0.5 * p[a] * dU[a].comp[c].values[idx];
            }
            residual.comp[c].values[idx] -=
                drift + 0.5 * U.comp[c].values[idx];
          }
        }
  }

  const BallRegion ball{{0.0, 0.0, 0.0}, g.box_length / 4.0};
  ProfileReport report;
  report.profile = U;
  report.source = source;
  report.linear_residual_norm = lp_norm(residual, 2.0, ball);

  const VectorField3 N = nonlinearity(U, model);
  for (int c = 0; c < 3; ++c) residual.comp[c].values += N.comp[c].values;
  report.full_residual_norm = lp_norm(residual, 2.0, ball);
  report.profile_norm = lp_norm(U, 2.0, ball);
  return report;
}

}  // namespace lmf
