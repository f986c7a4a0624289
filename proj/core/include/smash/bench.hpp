#ifndef SMASH_BENCH_HPP
#define SMASH_BENCH_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "smash/testfunctions.hpp"
#include "smash/types.hpp"
#include "smash/wavelet.hpp"

namespace smash::bench {

inline constexpr const char* kVersion = "0.1.0";

enum class NoiseKind { gaussian, poisson };

struct Scenario {
  std::string name;  // filled by the runner when empty
  NoiseKind kind = NoiseKind::gaussian;
  std::string mean_fn = "spikes";
  std::string var_fn = "constant";  // Gaussian scenarios
  double snr = 3.0;                 // Gaussian scenarios
  double intensity_min = 0.01;     // Poisson scenarios
  double intensity_max = 3.0;
  std::size_t T = 1024;
  int replicates = 100;
  std::uint64_t seed = 0;  // 0: derived from the master seed by the runner
};

/// Gaussian draw Y_t ~ N(mean_t, var_t); deterministic in (scenario.seed,
/// replicate).
Signal simulate_gaussian(const Scenario& sc, int replicate);

/// Poisson draw Y_t ~ Poi(intensity_t); deterministic in (scenario.seed,
/// replicate).
CountSignal simulate_poisson(const Scenario& sc, int replicate);

/// Per-replicate integrated squared error, realized as sum_t (est - truth)^2.
double mise(const Signal& estimate, const Signal& truth);

/// Anscombe baseline: 2 sqrt(y + 3/8), TI-Haar universal-threshold denoising
/// at noise sd 1, inverted by (x/2)^2 - 3/8 and floored at 0.
Signal baseline_anscombe(const CountSignal& counts);

/// Universal hard thresholding of the non-decimated transform: cell (j,k) is
/// zeroed when |d_jk| <= omega_jk sqrt(2 log T).
Signal baseline_ti_thresh(const Signal& y, const Signal& sd,
                          const wavelet::FilterPair& filter = wavelet::FilterPair::symmlet8());

struct BenchConfig {
  std::vector<Scenario> scenarios;
  std::vector<std::string> gaussian_methods = {"smash", "smash-homo", "smash-truevar", "ti-thresh"};
  std::vector<std::string> poisson_methods = {"smash", "anscombe"};
  std::uint64_t master_seed = 1;
  int jobs = 0;  // 0: hardware concurrency
};

struct BenchCell {
  std::string scenario;
  std::string mean_fn;
  std::string var_or_range;
  std::size_t T = 0;
  std::string method;
  int replicate = 0;
  double mise_sum = 0.0;
  bool failed = false;
};

struct MethodSummary {
  std::string scenario;
  std::string method;
  double mean_mise = 0.0;
  double median_mise = 0.0;
  int samples = 0;  // successful replicates
};

struct BenchReport {
  std::vector<BenchCell> cells;
  std::vector<MethodSummary> summary;
  std::uint64_t master_seed = 0;
  std::string version;
};

/// Runs the full scenario x method x replicate grid. Per-cell failures are
/// recorded (cell marked failed) and the run continues. Deterministic given
/// the master seed, independent of the worker count.
BenchReport run_benchmark(const BenchConfig& config);

void write_report_csv(const BenchReport& report, std::ostream& out);
void write_report_json(const BenchReport& report, std::ostream& out);

/// Six intensity functions x three (min,max) ranges, methods smash/anscombe.
BenchConfig poisson_tables_suite(int replicates = 100);

/// Spikes with constant variance plus the two heteroskedastic pairs
/// (spikes x cblocks, corner x doppler), SNR 3, T = 1024.
BenchConfig gaussian_figures_suite(int replicates = 100);

/// Gaussian method names usable in configs.
std::vector<std::string> known_gaussian_methods();
std::vector<std::string> known_poisson_methods();

}  // namespace smash::bench

#endif
