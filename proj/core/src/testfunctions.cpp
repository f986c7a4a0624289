#include "smash/testfunctions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

// Closed forms for the classic test signals: Blocks, Bumps, Doppler and
// HeaviSine follow Donoho & Johnstone (1994); Spikes, Angles, Blip and Corner
// follow the Antoniadis-Bigot-Sapatinas catalogue (Corner is a reconstruction
// of the plotted shape, as are Bursts and the texp variance bump; see
// docs/test-functions.md).

namespace smash::bench {

namespace {

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

double blocks_fn(double t) {
  static const double pos[] = {0.1, 0.13, 0.15, 0.23, 0.25, 0.4, 0.44, 0.65, 0.76, 0.78, 0.81};
  static const double hgt[] = {4.0, -5.0, 3.0, -4.0, 5.0, -4.2, 2.1, 4.3, -3.1, 2.1, -4.2};
  double v = 0.0;
  for (int i = 0; i < 11; ++i) v += hgt[i] * (1.0 + sgn(t - pos[i])) / 2.0;
  return v;
}

double bumps_fn(double t) {
  static const double pos[] = {0.1, 0.13, 0.15, 0.23, 0.25, 0.4, 0.44, 0.65, 0.76, 0.78, 0.81};
  static const double hgt[] = {4.0, 5.0, 3.0, 4.0, 5.0, 4.2, 2.1, 4.3, 3.1, 5.1, 4.2};
  static const double wth[] = {0.005, 0.005, 0.006, 0.01, 0.01, 0.03, 0.01, 0.01, 0.005, 0.008, 0.005};
  double v = 0.0;
  for (int i = 0; i < 11; ++i) {
    const double u = std::abs(t - pos[i]) / wth[i];
    v += hgt[i] * std::pow(1.0 + u, -4.0);
  }
  return v;
}

double heavisine_fn(double t) { return 4.0 * std::sin(4.0 * M_PI * t) - sgn(t - 0.3) - sgn(0.72 - t); }

double doppler_fn(double t) {
  return std::sqrt(std::max(t * (1.0 - t), 0.0)) * std::sin(2.0 * M_PI * 1.05 / (t + 0.05));
}

double spikes_fn(double t) {
  return 0.75 * std::exp(-500.0 * (t - 0.23) * (t - 0.23)) +
         1.5 * std::exp(-2000.0 * (t - 0.33) * (t - 0.33)) +
         3.0 * std::exp(-8000.0 * (t - 0.47) * (t - 0.47)) +
         2.25 * std::exp(-16000.0 * (t - 0.69) * (t - 0.69)) +
         0.5 * std::exp(-32000.0 * (t - 0.83) * (t - 0.83));
}

double angles_fn(double t) {
  if (t <= 0.15) return 2.0 * t + 0.5;
  if (t <= 0.2) return -12.0 * (t - 0.15) + 0.8;
  if (t <= 0.5) return 0.2;
  if (t <= 0.6) return 6.0 * (t - 0.5) + 0.2;
  if (t <= 0.65) return -10.0 * (t - 0.6) + 0.8;
  if (t <= 0.85) return -0.5 * (t - 0.65) + 0.3;
  return 2.0 * (t - 0.85) + 0.2;
}

double blip_fn(double t) {
  const double base = 0.6 * t + 0.3 * std::exp(-100.0 * (t - 0.3) * (t - 0.3));
  if (t <= 0.8) return 0.32 + base;
  return -0.28 + 0.6 * t + 0.3 * std::exp(-100.0 * (t - 1.3) * (t - 1.3));
}

double corner_fn(double t) {
  // Cubic rise to a sharp peak at 0.5, linear descent.
  if (t <= 0.5) {
    const double u = 2.0 * t;
    return u * u * u;
  }
  return 1.0 - 1.8 * (t - 0.5);
}

double bursts_fn(double t) {
  return 4.0 * std::exp(-80.0 * std::abs(t - 0.27)) + 3.0 * std::exp(-60.0 * std::abs(t - 0.46)) +
         5.0 * std::exp(-100.0 * std::abs(t - 0.79));
}

double cblocks_fn(double t) { return std::max(blocks_fn(t), 0.0); }

double texp_fn(double t) { return std::exp(1.5 * std::cos(2.0 * M_PI * (t - 0.5))); }

using ShapeFn = double (*)(double);

const std::map<std::string, ShapeFn>& shape_registry() {
  static const std::map<std::string, ShapeFn> reg = {
      {"spikes", spikes_fn},   {"angles", angles_fn}, {"blocks", blocks_fn},
      {"doppler", doppler_fn}, {"bumps", bumps_fn},   {"blip", blip_fn},
      {"corner", corner_fn},   {"heavisine", heavisine_fn}, {"bursts", bursts_fn},
      {"cblocks", cblocks_fn}, {"texp", texp_fn},
  };
  return reg;
}

std::string canonical_name(std::string name) {
  std::transform(name.begin(), name.end(), name.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  std::replace(name.begin(), name.end(), '-', '_');
  if (name == "clipped_blocks" || name == "clippedblocks") return "cblocks";
  if (name == "const") return "constant";
  return name;
}

Signal sample_shape(ShapeFn fn, std::size_t T) {
  Signal v(T);
  for (std::size_t i = 0; i < T; ++i)
    v[i] = fn((static_cast<double>(i) + 0.5) / static_cast<double>(T));
  return v;
}

/// Affine map onto [lo, hi], exact at the extremes (std::lerp is monotone and
/// exact at t = 0 and t = 1).
Signal rescale(const Signal& v, double lo, double hi) {
  const auto [mn_it, mx_it] = std::minmax_element(v.begin(), v.end());
  const double mn = *mn_it, mx = *mx_it;
  if (mx == mn) throw Error("rescale: shape is constant");
  Signal out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    out[i] = std::lerp(lo, hi, (v[i] - mn) / (mx - mn));
  return out;
}

double population_sd(const Signal& v) {
  const double m = stable_mean(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(v.size()));
}

}  // namespace

Signal raw_shape(const std::string& name, std::size_t T) {
  const auto key = canonical_name(name);
  const auto& reg = shape_registry();
  const auto it = reg.find(key);
  if (it == reg.end()) throw UnknownFunction("unknown test function: " + name);
  return sample_shape(it->second, T);
}

Signal gen_mean(const std::string& name, std::size_t T) {
  const auto key = canonical_name(name);
  if (key == "constant" || key == "texp")
    throw UnknownFunction("not a mean function: " + name);
  return rescale(raw_shape(key, T), 0.2, 0.8);
}

Signal gen_var(const std::string& name, std::size_t T, double snr, const Signal& mean) {
  if (!(snr > 0.0)) throw BadRange("snr must be > 0");
  if (mean.size() != T) throw LengthMismatch("gen_var: mean length != T");
  const auto key = canonical_name(name);

  Signal shape;
  if (key == "constant") {
    shape.assign(T, 1.0);
  } else if (key == "texp" || key == "doppler" || key == "bumps" || key == "cblocks") {
    shape = rescale(raw_shape(key, T), 1e-3, 1.0);
  } else {
    throw UnknownFunction("unknown variance function: " + name);
  }

  double mean_sd = 0.0;
  for (double v : shape) mean_sd += std::sqrt(v);
  mean_sd /= static_cast<double>(T);
  const double scale_sd = population_sd(mean) / (snr * mean_sd);
  const double c = scale_sd * scale_sd;

  Signal var(T);
  for (std::size_t i = 0; i < T; ++i) var[i] = std::max(c * shape[i], 1e-6);
  return var;
}

Signal gen_intensity(const std::string& name, std::size_t T, double lo, double hi) {
  if (!(lo > 0.0) || !(lo < hi)) throw BadRange("need 0 < min < max intensity");
  return rescale(raw_shape(name, T), lo, hi);
}

std::vector<std::string> mean_function_names() {
  return {"spikes", "angles", "blocks", "doppler", "bumps",
          "blip",   "corner", "heavisine", "bursts", "cblocks"};
}

std::vector<std::string> var_function_names() {
  return {"constant", "texp", "doppler", "bumps", "cblocks"};
}

std::vector<std::string> intensity_function_names() {
  return {"spikes", "angles", "heavisine", "bursts", "cblocks", "bumps"};
}

}  // namespace smash::bench
