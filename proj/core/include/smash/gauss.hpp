#ifndef SMASH_GAUSS_HPP
#define SMASH_GAUSS_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "smash/types.hpp"
#include "smash/wavelet.hpp"

namespace smash::gauss {

struct GaussianFit {
  Signal mean;
  Signal sd;
  Signal band_lower;  // mean - 2 * posterior sd of the mean
  Signal band_upper;
  int iterations = 0;  // smoothing cycles performed
};

/// Wavelet coefficients of squared residuals and their estimated sampling
/// variances: delta = ndwt(Z^2), gamma_var = propagate_variance((2/3) Z^4).
struct VarCoefficients {
  wavelet::TiCoefficientTable delta;
  std::vector<std::vector<double>> gamma_var;
};

VarCoefficients variance_coefficients(const Signal& squared_residuals,
                                      const wavelet::FilterPair& filter);

/// Mean estimation with known variance: per-level ash shrinkage of the
/// non-decimated coefficients with standard errors omega_jk, averaged back.
/// The band variance ignores coefficient correlations (documented
/// approximation: per-shift reconstruction variances averaged over shifts).
GaussianFit smooth_mean_known_var(const Signal& y, const Signal& var,
                                  const wavelet::FilterPair& filter = wavelet::FilterPair::symmlet8());

/// Variance estimation with known mean: smooths Z^2 = (y - mu)^2 with
/// per-point observation variance (2/3) Z^4, flooring the result at
/// max(1e-8 * mean(Z^2), 1e-12).
Signal estimate_variance_known_mean(const Signal& y, const Signal& mu,
                                    const wavelet::FilterPair& filter = wavelet::FilterPair::haar());

/// First-difference variance initializer on the circle:
/// 0.5 * ((y_t - y_{t-1})^2 + (y_t - y_{t+1})^2).
Signal init_variance(const Signal& y);

/// Joint mean/variance estimation: initialize the variance from
/// init_variance, then alternate (mean given variance, variance given mean)
/// `cycles` times. cycles = 0 returns the mean fit at the initial variance.
GaussianFit smooth_joint(const Signal& y, int cycles = 2,
                         const wavelet::FilterPair& mean_filter = wavelet::FilterPair::symmlet8(),
                         const wavelet::FilterPair& var_filter = wavelet::FilterPair::haar());

struct PadDescriptor {
  std::size_t original_length = 0;
  std::size_t padded_length = 0;
};

/// Two-stage right-edge mirroring onto a periodic signal of length
/// 2^ceil(log2(2n)): mirror, truncate to the largest power of two, mirror
/// again if needed.
std::pair<Signal, PadDescriptor> reflect_pad(const Signal& y);
std::pair<CountSignal, PadDescriptor> reflect_pad(const CountSignal& y);

Signal unpad(const Signal& padded, const PadDescriptor& pad);

/// Linear interpolation of uniformly indexed values at fractional position x
/// (clamped to [0, n-1]).
double interp_at(const Signal& values, double x);

}  // namespace smash::gauss

#endif
