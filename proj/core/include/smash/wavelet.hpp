#ifndef SMASH_WAVELET_HPP
#define SMASH_WAVELET_HPP

#include <string>
#include <vector>

#include "smash/types.hpp"

namespace smash::wavelet {

/// An orthonormal analysis filter pair. `high` is the quadrature mirror of
/// `low`: high[i] = (-1)^i low[L-1-i]. Orthonormality (sum low^2 = 1,
/// sum high^2 = 1, sum low*high = 0) is checked to 1e-12 on construction.
struct FilterPair {
  std::vector<double> low;
  std::vector<double> high;
  std::string name;

  FilterPair(std::vector<double> low_taps, std::vector<double> high_taps, std::string filter_name);

  /// Builds the pair from scaling taps via the quadrature mirror relation.
  static FilterPair from_lowpass(std::vector<double> low_taps, std::string filter_name);

  /// Orthonormal Haar (taps 1/sqrt(2)).
  static const FilterPair& haar();
  /// 8-tap least-asymmetric Daubechies (Symmlet8) scaling filter.
  static const FilterPair& symmlet8();
};

/// Pyramid coefficients of the decimated transform. Level j holds 2^j detail
/// entries (j = 0 coarsest .. J-1 finest) plus the single coarsest scaling
/// coefficient; entries total T = 2^J.
struct DwtCoefficients {
  std::vector<std::vector<double>> details;
  double scaling = 0.0;

  int levels() const { return static_cast<int>(details.size()); }
  std::size_t signal_length() const { return std::size_t{1} << details.size(); }
};

/// Non-decimated (translation-invariant) coefficient table. Row j holds the
/// level-j detail of every circulant shift: the decimated level-j coefficient
/// k of the shift-t signal sits at column (2^(J-j)*k - t) mod T. The level-0
/// scaling coefficient equals sum(y)/sqrt(T) for every shift and is stored
/// once.
struct TiCoefficientTable {
  std::vector<std::vector<double>> details;    // J rows of length T
  std::vector<std::vector<double>> variances;  // empty, or J rows of length T
  double level0_scaling = 0.0;

  int levels() const { return static_cast<int>(details.size()); }
  std::size_t length() const { return details.empty() ? 0 : details.front().size(); }
};

/// Periodic decimated wavelet transform (Mallat pyramid, full depth J).
DwtCoefficients dwt(const Signal& signal, const FilterPair& filter);

/// Exact inverse of dwt.
Signal idwt(const DwtCoefficients& coeffs, const FilterPair& filter);

/// Non-decimated transform via the a-trous cascade (all T rotations at once).
TiCoefficientTable ndwt(const Signal& signal, const FilterPair& filter);

/// Average-basis inverse: (1/T) sum_t rotate^-1(idwt(coefficients of shift t)).
/// Exact inverse of ndwt when the table is unmodified.
Signal indwt_average(const TiCoefficientTable& table, const FilterPair& filter);

/// Per-cell variances omega^2_jk = sum_t var_t W^2_(jk),t, computed by running
/// the a-trous cascade with squared taps. Rows follow the ndwt layout.
std::vector<std::vector<double>> propagate_variance(const Signal& var, const FilterPair& filter);

/// Pointwise variance of the average-basis inverse under the independence
/// approximation: the per-shift reconstruction variances (squared synthesis
/// weights applied to `cell_var`, plus `scaling_var` on the scaling path) are
/// averaged over all T shifts.
Signal indwt_average_variance(const std::vector<std::vector<double>>& cell_var,
                              double scaling_var, const FilterPair& filter);

}  // namespace smash::wavelet

#endif
