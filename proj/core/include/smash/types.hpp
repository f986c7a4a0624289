#ifndef SMASH_TYPES_HPP
#define SMASH_TYPES_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace smash {

/// A real-valued signal sampled at T equally spaced positions.
using Signal = std::vector<double>;

/// A vector of nonnegative event counts.
using CountSignal = std::vector<std::int64_t>;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input-contract violations, named after the condition they report.
struct NonPowerOfTwoLength : Error { using Error::Error; };
struct MalformedPyramid : Error { using Error::Error; };
struct MalformedTable : Error { using Error::Error; };
struct NegativeVariance : Error { using Error::Error; };
struct NonPositiveVariance : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };
struct TooShort : Error { using Error::Error; };
struct EmptyObservations : Error { using Error::Error; };
struct InvalidObservations : Error { using Error::Error; };
struct NonFiniteLikelihood : Error { using Error::Error; };
struct WeightsNotSimplex : Error { using Error::Error; };
struct EmptyBlock : Error { using Error::Error; };
struct UnknownFunction : Error { using Error::Error; };
struct BadRange : Error { using Error::Error; };
struct InvalidFilter : Error { using Error::Error; };

inline bool is_power_of_two(std::size_t n) { return n >= 2 && std::has_single_bit(n); }

inline int ilog2(std::size_t n) { return std::bit_width(n) - 1; }

/// Circulant shift: result[i] = v[(i - t) mod T] (the first T-t elements move
/// t positions right, the last t wrap to the front).
template <typename T>
std::vector<T> rotate(const std::vector<T>& v, std::int64_t t) {
  const std::int64_t n = static_cast<std::int64_t>(v.size());
  if (n == 0) return {};
  std::vector<T> out(v.size());
  std::int64_t s = ((t % n) + n) % n;
  for (std::int64_t i = 0; i < n; ++i) out[(i + s) % n] = v[i];
  return out;
}

/// Order-independent sum: identical result under any permutation of v.
/// Summation runs over a value-sorted copy, so circularly shifted inputs
/// produce bit-identical reductions.
double stable_sum(const Signal& v);

inline double stable_mean(const Signal& v) {
  return v.empty() ? 0.0 : stable_sum(v) / static_cast<double>(v.size());
}

void require_finite(const Signal& v, const char* what);

}  // namespace smash

#endif
