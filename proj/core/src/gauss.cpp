#include "smash/gauss.hpp"

#include <algorithm>
#include <cmath>

#include "smash/ash.hpp"

namespace smash::gauss {

using wavelet::FilterPair;
using wavelet::TiCoefficientTable;

namespace {

void check_signal_pair(const Signal& y, const Signal& other, const char* what) {
  if (y.size() != other.size()) throw LengthMismatch(std::string(what) + ": lengths differ");
  if (!is_power_of_two(y.size()))
    throw NonPowerOfTwoLength(std::string(what) + ": length is not a power of two");
}

struct ShrinkResult {
  std::vector<std::vector<double>> post_mean;
  std::vector<std::vector<double>> post_var;
};

// One ash fit per resolution level, pooled over all T shift positions.
ShrinkResult shrink_levels(const std::vector<std::vector<double>>& details,
                           const std::vector<std::vector<double>>& omega2) {
  const std::size_t J = details.size();
  ShrinkResult res;
  res.post_mean.resize(J);
  res.post_var.resize(J);
  for (std::size_t j = 0; j < J; ++j) {
    ash::ObservationSet obs;
    obs.betahat = details[j];
    obs.se.resize(omega2[j].size());
    for (std::size_t m = 0; m < omega2[j].size(); ++m) obs.se[m] = std::sqrt(omega2[j][m]);
    const auto fit = ash::fit_mixture(obs, ash::make_grid(obs));
    auto ps = ash::posterior(obs, fit.prior);
    res.post_mean[j] = std::move(ps.mean);
    res.post_var[j] = std::move(ps.variance);
  }
  return res;
}

GaussianFit smooth_with_omega(const Signal& y, const Signal& obs_var, const Signal& reported_var,
                              const FilterPair& filter) {
  const auto table = wavelet::ndwt(y, filter);
  const auto omega2 = wavelet::propagate_variance(obs_var, filter);
  const auto shrunk = shrink_levels(table.details, omega2);

  // Reconstruct as mean(y) + detail part so a constant input passes through
  // bit-exactly (its shrunk details are zero to well below one ulp).
  TiCoefficientTable post;
  post.details = shrunk.post_mean;
  post.level0_scaling = 0.0;
  const double ybar = stable_mean(y);
  Signal mu = wavelet::indwt_average(post, filter);
  for (double& v : mu) v += ybar;

  const double scaling_var = stable_mean(obs_var);
  Signal band_var = wavelet::indwt_average_variance(shrunk.post_var, scaling_var, filter);

  GaussianFit fit;
  fit.mean = std::move(mu);
  fit.sd.resize(reported_var.size());
  for (std::size_t t = 0; t < reported_var.size(); ++t) fit.sd[t] = std::sqrt(reported_var[t]);
  fit.band_lower.resize(y.size());
  fit.band_upper.resize(y.size());
  for (std::size_t t = 0; t < y.size(); ++t) {
    const double half_width = 2.0 * std::sqrt(band_var[t]);
    fit.band_lower[t] = fit.mean[t] - half_width;
    fit.band_upper[t] = fit.mean[t] + half_width;
  }
  fit.iterations = 1;
  return fit;
}

}  // namespace

VarCoefficients variance_coefficients(const Signal& squared_residuals, const FilterPair& filter) {
  VarCoefficients vc;
  vc.delta = wavelet::ndwt(squared_residuals, filter);
  Signal z4(squared_residuals.size());
  for (std::size_t t = 0; t < z4.size(); ++t)
    z4[t] = (2.0 / 3.0) * squared_residuals[t] * squared_residuals[t];
  vc.gamma_var = wavelet::propagate_variance(z4, filter);
  return vc;
}

GaussianFit smooth_mean_known_var(const Signal& y, const Signal& var, const FilterPair& filter) {
  check_signal_pair(y, var, "smooth_mean_known_var");
  require_finite(y, "smooth_mean_known_var y");
  for (double v : var)
    if (!(v > 0.0) || !std::isfinite(v))
      throw NonPositiveVariance("smooth_mean_known_var: var entries must be finite and > 0");
  return smooth_with_omega(y, var, var, filter);
}

Signal estimate_variance_known_mean(const Signal& y, const Signal& mu, const FilterPair& filter) {
  check_signal_pair(y, mu, "estimate_variance_known_mean");
  const std::size_t T = y.size();
  Signal z2(T), v4(T);
  double v4_max = 0.0;
  for (std::size_t t = 0; t < T; ++t) {
    const double z = y[t] - mu[t];
    z2[t] = z * z;
    v4[t] = (2.0 / 3.0) * z2[t] * z2[t];
    v4_max = std::max(v4_max, v4[t]);
  }
  const double z2_mean = stable_mean(z2);
  const double out_floor = std::max(1e-8 * z2_mean, 1e-12);
  if (v4_max == 0.0) return Signal(T, out_floor);

  // ash needs strictly positive standard errors.
  const double v4_floor = 1e-10 * v4_max;
  for (double& v : v4) v = std::max(v, v4_floor);

  GaussianFit fit = smooth_with_omega(z2, v4, v4, filter);
  Signal var = std::move(fit.mean);
  for (double& v : var) v = std::max(v, out_floor);
  return var;
}

Signal init_variance(const Signal& y) {
  const std::size_t T = y.size();
  Signal var(T);
  for (std::size_t t = 0; t < T; ++t) {
    const double prev = y[(t + T - 1) % T];
    const double next = y[(t + 1) % T];
    const double a = y[t] - prev;
    const double b = y[t] - next;
    var[t] = 0.5 * (a * a + b * b);
  }
  return var;
}

GaussianFit smooth_joint(const Signal& y, int cycles, const FilterPair& mean_filter,
                         const FilterPair& var_filter) {
  if (y.size() < 4) throw TooShort("smooth_joint needs T >= 4");
  if (!is_power_of_two(y.size()))
    throw NonPowerOfTwoLength("smooth_joint: length is not a power of two");
  require_finite(y, "smooth_joint y");
  if (cycles < 0) cycles = 0;

  Signal var = init_variance(y);
  const double var_mean = stable_mean(var);
  const double var_floor = std::max(1e-8 * var_mean, 1e-12);
  for (double& v : var) v = std::max(v, var_floor);

  GaussianFit fit = smooth_mean_known_var(y, var, mean_filter);
  for (int c = 2; c <= cycles; ++c) {
    var = estimate_variance_known_mean(y, fit.mean, var_filter);
    fit = smooth_mean_known_var(y, var, mean_filter);
  }
  if (cycles >= 1) var = estimate_variance_known_mean(y, fit.mean, var_filter);

  for (std::size_t t = 0; t < var.size(); ++t) fit.sd[t] = std::sqrt(var[t]);
  fit.iterations = std::max(cycles, 0);
  return fit;
}

namespace {

template <typename V>
std::pair<V, PadDescriptor> reflect_pad_impl(const V& y) {
  const std::size_t n = y.size();
  if (n < 2) throw TooShort("reflect_pad needs length >= 2");
  const std::size_t target = std::bit_ceil(2 * n);
  const std::size_t first = std::bit_floor(2 * n);

  V padded;
  padded.reserve(target);
  padded.insert(padded.end(), y.begin(), y.end());
  for (std::size_t i = 0; i < n && padded.size() < first; ++i) padded.push_back(y[n - 1 - i]);
  padded.resize(first);
  if (first < target) {
    const std::size_t m = padded.size();
    for (std::size_t i = 0; i < m; ++i) padded.push_back(padded[m - 1 - i]);
  }
  return {std::move(padded), PadDescriptor{n, target}};
}

}  // namespace

std::pair<Signal, PadDescriptor> reflect_pad(const Signal& y) { return reflect_pad_impl(y); }
std::pair<CountSignal, PadDescriptor> reflect_pad(const CountSignal& y) {
  return reflect_pad_impl(y);
}

Signal unpad(const Signal& padded, const PadDescriptor& pad) {
  if (padded.size() != pad.padded_length || pad.original_length > padded.size())
    throw LengthMismatch("unpad: descriptor does not match signal");
  return Signal(padded.begin(), padded.begin() + static_cast<std::ptrdiff_t>(pad.original_length));
}

double interp_at(const Signal& values, double x) {
  if (values.empty()) throw TooShort("interp_at: empty vector");
  if (x <= 0.0) return values.front();
  const double max_x = static_cast<double>(values.size() - 1);
  if (x >= max_x) return values.back();
  const std::size_t lo = static_cast<std::size_t>(x);
  const double frac = x - static_cast<double>(lo);
  return std::lerp(values[lo], values[lo + 1], frac);
}

}  // namespace smash::gauss
