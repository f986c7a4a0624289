#ifndef SMASH_TESTFUNCTIONS_HPP
#define SMASH_TESTFUNCTIONS_HPP

#include <string>
#include <vector>

#include "smash/types.hpp"

namespace smash::bench {

/// Mean-function names: spikes, angles, blocks, doppler, bumps, blip, corner,
/// heavisine, bursts, cblocks. Sampled at t = (i + 0.5)/T and affinely
/// rescaled to [0.2, 0.8].
Signal gen_mean(const std::string& name, std::size_t T);

/// Variance-function names: constant, texp, doppler, bumps, cblocks. The raw
/// shape is mapped to [1e-3, 1] (constant stays 1), scaled so that
/// sd(mean)/mean(sd) equals `snr`, then floored at 1e-6.
Signal gen_var(const std::string& name, std::size_t T, double snr, const Signal& mean);

/// Intensity shape rescaled affinely to [lo, hi] exactly.
Signal gen_intensity(const std::string& name, std::size_t T, double lo, double hi);

/// Unscaled shape samples at t = (i + 0.5)/T (exposed for shape tests).
Signal raw_shape(const std::string& name, std::size_t T);

std::vector<std::string> mean_function_names();
std::vector<std::string> var_function_names();
std::vector<std::string> intensity_function_names();

}  // namespace smash::bench

#endif
