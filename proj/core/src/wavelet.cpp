#include "smash/wavelet.hpp"

#include <cmath>
#include <numeric>
#include <utility>

namespace smash {

namespace {

// Pairwise reduction down to single elements: permutation-invariant after the
// sort, exact for power-of-two runs of equal values, and symmetric under
// negating every input (for power-of-two lengths).
double pairwise_sum(const double* p, std::size_t n) {
  if (n == 0) return 0.0;
  if (n == 1) return p[0];
  const std::size_t half = n / 2;
  return pairwise_sum(p, half) + pairwise_sum(p + half, n - half);
}

}  // namespace

double stable_sum(const Signal& v) {
  Signal s(v);
  std::sort(s.begin(), s.end());
  return pairwise_sum(s.data(), s.size());
}

void require_finite(const Signal& v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x)) throw Error(std::string(what) + ": non-finite entry");
}

}  // namespace smash

namespace smash::wavelet {

namespace {

void check_orthonormal(const std::vector<double>& low, const std::vector<double>& high,
                       const std::string& name) {
  if (low.size() != high.size() || low.empty())
    throw InvalidFilter(name + ": low/high tap counts differ or empty");
  double ll = 0.0, hh = 0.0, lh = 0.0;
  for (std::size_t i = 0; i < low.size(); ++i) {
    ll += low[i] * low[i];
    hh += high[i] * high[i];
    lh += low[i] * high[i];
  }
  const double tol = 1e-12;
  if (std::abs(ll - 1.0) > tol || std::abs(hh - 1.0) > tol || std::abs(lh) > tol)
    throw InvalidFilter(name + ": taps are not orthonormal");
}

std::size_t checked_length(const Signal& signal) {
  if (!is_power_of_two(signal.size()))
    throw NonPowerOfTwoLength("signal length " + std::to_string(signal.size()) +
                              " is not a power of two >= 2");
  return signal.size();
}

}  // namespace

FilterPair::FilterPair(std::vector<double> low_taps, std::vector<double> high_taps,
                       std::string filter_name)
    : low(std::move(low_taps)), high(std::move(high_taps)), name(std::move(filter_name)) {
  check_orthonormal(low, high, name);
}

FilterPair FilterPair::from_lowpass(std::vector<double> low_taps, std::string filter_name) {
  const std::size_t L = low_taps.size();
  std::vector<double> high_taps(L);
  for (std::size_t i = 0; i < L; ++i) {
    double v = low_taps[L - 1 - i];
    high_taps[i] = (i % 2 == 0) ? v : -v;
  }
  return FilterPair(std::move(low_taps), std::move(high_taps), std::move(filter_name));
}

const FilterPair& FilterPair::haar() {
  static const FilterPair f =
      FilterPair::from_lowpass({M_SQRT1_2, M_SQRT1_2}, "haar");
  return f;
}

const FilterPair& FilterPair::symmlet8() {
  // Least-asymmetric Daubechies scaling taps with 4 vanishing moments.
  static const FilterPair f = FilterPair::from_lowpass(
      {-0.07576571478950221, -0.029635527646002493, 0.497618667632775,
       0.8037387518051321, 0.29785779560530606, -0.09921954357663353,
       -0.012603967262031304, 0.032223100604051466},
      "symmlet8");
  return f;
}

DwtCoefficients dwt(const Signal& signal, const FilterPair& filter) {
  const std::size_t T = checked_length(signal);
  require_finite(signal, "dwt input");
  const int J = ilog2(T);
  const std::size_t L = filter.low.size();

  DwtCoefficients out;
  out.details.resize(J);
  std::vector<double> a(signal), next;
  std::size_t n = T;
  for (int s = 1; s <= J; ++s) {
    const std::size_t half = n / 2;
    std::vector<double> d(half);
    next.assign(half, 0.0);
    for (std::size_t k = 0; k < half; ++k) {
      double acc_a = 0.0, acc_d = 0.0;
      for (std::size_t i = 0; i < L; ++i) {
        const double x = a[(2 * k + i) % n];
        acc_a += filter.low[i] * x;
        acc_d += filter.high[i] * x;
      }
      next[k] = acc_a;
      d[k] = acc_d;
    }
    out.details[J - s] = std::move(d);
    a.swap(next);
    n = half;
  }
  out.scaling = a[0];
  return out;
}

Signal idwt(const DwtCoefficients& coeffs, const FilterPair& filter) {
  const int J = coeffs.levels();
  if (J < 1) throw MalformedPyramid("empty coefficient pyramid");
  for (int j = 0; j < J; ++j)
    if (coeffs.details[j].size() != (std::size_t{1} << j))
      throw MalformedPyramid("level " + std::to_string(j) + " has " +
                             std::to_string(coeffs.details[j].size()) + " entries");
  const std::size_t L = filter.low.size();

  std::vector<double> a{coeffs.scaling};
  for (int j = 0; j < J; ++j) {
    const auto& d = coeffs.details[j];
    const std::size_t n = a.size() * 2;
    std::vector<double> out(n, 0.0);
    for (std::size_t k = 0; k < a.size(); ++k) {
      for (std::size_t i = 0; i < L; ++i) {
        const std::size_t idx = (2 * k + i) % n;
        out[idx] += filter.low[i] * a[k] + filter.high[i] * d[k];
      }
    }
    a.swap(out);
  }
  return a;
}

TiCoefficientTable ndwt(const Signal& signal, const FilterPair& filter) {
  const std::size_t T = checked_length(signal);
  require_finite(signal, "ndwt input");
  const int J = ilog2(T);
  const std::size_t L = filter.low.size();
  const std::size_t mask = T - 1;

  TiCoefficientTable table;
  table.details.resize(J);
  std::vector<double> a(signal), next(T);
  for (int s = 1; s <= J; ++s) {
    const std::size_t step = std::size_t{1} << (s - 1);
    std::vector<double> d(T);
    for (std::size_t m = 0; m < T; ++m) {
      double acc_a = 0.0, acc_d = 0.0;
      for (std::size_t i = 0; i < L; ++i) {
        const double x = a[(m + i * step) & mask];
        acc_a += filter.low[i] * x;
        acc_d += filter.high[i] * x;
      }
      next[m] = acc_a;
      d[m] = acc_d;
    }
    table.details[J - s] = std::move(d);
    a.swap(next);
  }
  table.level0_scaling = stable_sum(signal) / std::sqrt(static_cast<double>(T));
  return table;
}

namespace {

std::size_t checked_table(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw MalformedTable("table has no detail rows");
  const std::size_t T = rows.front().size();
  if (!is_power_of_two(T) || rows.size() != static_cast<std::size_t>(ilog2(T)))
    throw MalformedTable("table is not J x 2^J");
  for (const auto& row : rows)
    if (row.size() != T) throw MalformedTable("ragged detail rows");
  return T;
}

// Average-basis inverse cascade. Coarse to fine: within each residue class r
// (mod step) the two alignments of decimated coefficients reconstruct the
// same subsequence, shifted by one slot; averaging the pair at every stage
// telescopes into the full average over all T circulant shifts.
// With squared = true the synthesis taps are squared and the cascade instead
// propagates the shift-averaged reconstruction variance of independent cells.
Signal iswt_cascade(const std::vector<std::vector<double>>& rows, double scaling_value,
                    const FilterPair& filter, bool squared) {
  const std::size_t T = checked_table(rows);
  const int J = static_cast<int>(rows.size());
  const std::size_t L = filter.low.size();

  std::vector<double> lo(filter.low), hi(filter.high);
  if (squared) {
    for (auto& v : lo) v *= v;
    for (auto& v : hi) v *= v;
  }

  std::vector<double> a(T, scaling_value), anew(T);
  std::vector<double> xa(T), xb(T);
  for (int s = J; s >= 1; --s) {
    const std::size_t step = std::size_t{1} << (s - 1);
    const auto& d = rows[J - s];
    const std::size_t n2 = T / step;
    // Offset making q + pad - i nonnegative for every tap index.
    const std::size_t pad = (L / n2 + 1) * n2;
    for (std::size_t r = 0; r < step; ++r) {
      // Gather form (taps in ascending order) keeps every output's summation
      // sequence independent of absolute position, so reconstructions of
      // rotated tables are bit-identical rotations.
      for (std::size_t q = 0; q < n2; ++q) {
        double acc_a = 0.0, acc_b = 0.0;
        for (std::size_t i = q & 1; i < L; i += 2) {
          const std::size_t k = ((q + pad - i) % n2) / 2;
          const std::size_t pa = r + (2 * k) * step;
          const std::size_t pb = r + (2 * k + 1) * step;
          acc_a += lo[i] * a[pa] + hi[i] * d[pa];
          acc_b += lo[i] * a[pb] + hi[i] * d[pb];
        }
        xa[q] = acc_a;
        xb[q] = acc_b;
      }
      for (std::size_t q = 0; q < n2; ++q)
        anew[r + q * step] = 0.5 * (xa[q] + xb[(q + n2 - 1) % n2]);
    }
    a.swap(anew);
  }
  return a;
}

}  // namespace

Signal indwt_average(const TiCoefficientTable& table, const FilterPair& filter) {
  return iswt_cascade(table.details, table.level0_scaling, filter, /*squared=*/false);
}

Signal indwt_average_variance(const std::vector<std::vector<double>>& cell_var,
                              double scaling_var, const FilterPair& filter) {
  for (const auto& row : cell_var)
    for (double v : row)
      if (v < 0.0) throw NegativeVariance("cell variance < 0");
  if (scaling_var < 0.0) throw NegativeVariance("scaling variance < 0");
  Signal out = iswt_cascade(cell_var, scaling_var, filter, /*squared=*/true);
  for (double& v : out) v = std::max(v, 0.0);
  return out;
}

std::vector<std::vector<double>> propagate_variance(const Signal& var, const FilterPair& filter) {
  const std::size_t T = checked_length(var);
  for (double v : var)
    if (!(v >= 0.0)) throw NegativeVariance("variance entries must be >= 0 and finite");
  const int J = ilog2(T);
  const std::size_t L = filter.low.size();
  const std::size_t mask = T - 1;

  std::vector<double> lo(filter.low), hi(filter.high);
  for (auto& v : lo) v *= v;
  for (auto& v : hi) v *= v;

  std::vector<std::vector<double>> rows(J);
  std::vector<double> a(var), next(T);
  for (int s = 1; s <= J; ++s) {
    const std::size_t step = std::size_t{1} << (s - 1);
    std::vector<double> d(T);
    for (std::size_t m = 0; m < T; ++m) {
      double acc_a = 0.0, acc_d = 0.0;
      for (std::size_t i = 0; i < L; ++i) {
        const double x = a[(m + i * step) & mask];
        acc_a += lo[i] * x;
        acc_d += hi[i] * x;
      }
      next[m] = acc_a;
      d[m] = acc_d;
    }
    rows[J - s] = std::move(d);
    a.swap(next);
  }
  return rows;
}

}  // namespace smash::wavelet
