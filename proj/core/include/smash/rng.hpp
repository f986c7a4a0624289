#ifndef SMASH_RNG_HPP
#define SMASH_RNG_HPP

#include <cstdint>
#include <random>

#include "smash/types.hpp"

namespace smash {

/// Seedable generator with fixed sampling algorithms (Box-Muller normals,
/// inversion Poisson) on top of mt19937_64, so simulated datasets are
/// reproducible independently of the standard library's distribution
/// implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform on (0, 1).
  double uniform() {
    double u;
    do {
      u = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    } while (u <= 0.0);
    return u;
  }

  /// Standard normal via Box-Muller (two uniforms per draw).
  double normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  /// Poisson by CDF inversion with sequential search; exact and portable for
  /// the mean ranges used here (well below the exp(-mean) underflow point).
  std::int64_t poisson(double mean);

 private:
  std::mt19937_64 gen_;
};

/// splitmix64-style mixing of a seed with a stream index.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace smash

#endif
