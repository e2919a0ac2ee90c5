#include "lmf/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace lmf {
namespace {

// One FFTW plan per (n, sign), created against a throwaway buffer and reused
// through the new-array execute interface.  FFTW_UNALIGNED keeps the plan
// valid for any buffer Eigen hands us.
class PlanCache {
public:
  static fftw_plan get(int n, int sign) {
    static PlanCache cache;
    std::lock_guard<std::mutex> lock(cache.mutex_);
    auto key = std::make_pair(n, sign);
    auto it = cache.plans_.find(key);
    if (it != cache.plans_.end()) return it->second;
    std::size_t count = static_cast<std::size_t>(n) * n * n;
    fftw_complex* scratch = fftw_alloc_complex(count);
    fftw_plan plan = fftw_plan_dft_3d(n, n, n, scratch, scratch, sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    cache.plans_.emplace(key, plan);
    return plan;
  }

private:
  PlanCache() = default;
  std::mutex mutex_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

// The basis functions e^{i k_m x} evaluated at the centered points x_j pick
// up a factor (-1)^m relative to the index-space DFT; n is even, so the sign
// of a slot equals the parity of its stored index on each axis.
inline double slot_sign(int ix, int iy, int iz) {
  return ((ix + iy + iz) & 1) ? -1.0 : 1.0;
}

}  // namespace

SpectralScalar forward(const ScalarField& f) {
  require_finite(f, "transform");
  const Grid3& g = f.grid;
  const int n = g.n;
  SpectralScalar out{g, ComplexArray(g.size())};
  out.coef.real() = f.values;
  out.coef.imag().setZero();
  fftw_complex* buf = reinterpret_cast<fftw_complex*>(out.coef.data());
  fftw_execute_dft(PlanCache::get(n, FFTW_FORWARD), buf, buf);
  const double scale = 1.0 / g.size();
  std::size_t idx = 0;
  for (int iz = 0; iz < n; ++iz)
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix, ++idx)
        out.coef[idx] *= slot_sign(ix, iy, iz) * scale;
  return out;
}

ScalarField inverse(const SpectralScalar& F) {
  const Grid3& g = F.grid;
  const int n = g.n;
  if (!F.coef.allFinite()) {
    throw std::invalid_argument("transform: coefficients contain NaN or Inf");
  }
  ComplexArray work(g.size());
  std::size_t idx = 0;
  for (int iz = 0; iz < n; ++iz)
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix, ++idx)
        work[idx] = F.coef[idx] * slot_sign(ix, iy, iz);
  fftw_complex* buf = reinterpret_cast<fftw_complex*>(work.data());
  fftw_execute_dft(PlanCache::get(n, FFTW_BACKWARD), buf, buf);
  ScalarField out{g, work.real()};
  return out;
}

SpectralVector forward(const VectorField3& u) {
  require_same_grid(u, "transform");
  return SpectralVector{
      {forward(u.comp[0]), forward(u.comp[1]), forward(u.comp[2])}};
}

VectorField3 inverse(const SpectralVector& U) {
  return VectorField3{
      {inverse(U.comp[0]), inverse(U.comp[1]), inverse(U.comp[2])}};
}

}  // namespace lmf
