#include "lmf/synth.hpp"

#include <cmath>
#include <random>

#include "lmf/operators.hpp"

namespace lmf {
namespace {

// Fixed-algorithm standard normals: mt19937_64 bits mapped to (0,1] plus
// Box-Muller.  std::normal_distribution is implementation-defined, which
// would break seed reproducibility across standard libraries.
class NormalStream {
public:
  explicit NormalStream(std::uint64_t seed) : rng_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double m = std::sqrt(-2.0 * std::log(u1));
    spare_ = m * std::sin(2.0 * M_PI * u2);
    have_spare_ = true;
    return m * std::cos(2.0 * M_PI * u2);
  }

private:
  double uniform() {
    // 53 random bits into (0, 1]; never 0, so log() is safe.
    return (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;
  }
  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace

ScalarField random_smooth_scalar(const Grid3& grid, std::uint64_t seed,
                                 double mode_scale, int max_mode) {
  if (mode_scale <= 0.0) mode_scale = grid.n / 8.0;
  NormalStream normals(seed);
  ScalarField noise = make_scalar(grid);
  for (std::size_t i = 0; i < grid.size(); ++i)
    noise.values[i] = normals.next();
  SpectralScalar hat = forward(noise);
  std::size_t idx = 0;
  for (int iz = 0; iz < grid.n; ++iz)
    for (int iy = 0; iy < grid.n; ++iy)
      for (int ix = 0; ix < grid.n; ++ix, ++idx) {
        const int mx = mode_of(ix, grid.n);
        const int my = mode_of(iy, grid.n);
        const int mz = mode_of(iz, grid.n);
        if (max_mode > 0 && (std::abs(mx) > max_mode ||
                             std::abs(my) > max_mode ||
                             std::abs(mz) > max_mode)) {
          hat.coef[idx] = 0.0;
          continue;
        }
        const double m2 = static_cast<double>(mx) * mx +
                          static_cast<double>(my) * my +
                          static_cast<double>(mz) * mz;
        hat.coef[idx] *= std::exp(-m2 / (mode_scale * mode_scale));
      }
  return inverse(hat);
}

VectorField3 random_smooth_field(const Grid3& grid, std::uint64_t seed,
                                 double mode_scale, int max_mode) {
  return VectorField3{
      {random_smooth_scalar(grid, seed * 3 + 0, mode_scale, max_mode),
       random_smooth_scalar(grid, seed * 3 + 1, mode_scale, max_mode),
       random_smooth_scalar(grid, seed * 3 + 2, mode_scale, max_mode)}};
}

}  // namespace lmf
