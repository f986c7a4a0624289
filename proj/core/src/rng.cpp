#include "smash/rng.hpp"

#include <cmath>

namespace smash {

std::int64_t Rng::poisson(double mean) {
  if (!(mean >= 0.0)) throw Error("poisson mean must be >= 0");
  if (mean == 0.0) return 0;
  if (mean > 700.0) throw Error("poisson mean too large for inversion sampling");
  const double u = uniform();
  double p = std::exp(-mean);
  double cdf = p;
  std::int64_t k = 0;
  const std::int64_t cap =
      static_cast<std::int64_t>(mean + 40.0 * std::sqrt(mean) + 100.0);
  while (u > cdf && k < cap) {
    ++k;
    p *= mean / static_cast<double>(k);
    cdf += p;
  }
  return k;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace smash
