#ifndef SMASH_POIS_HPP
#define SMASH_POIS_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "smash/types.hpp"

namespace smash::pois {

struct GartEstimate {
  double alpha_hat = 0.0;
  double se = 0.0;
};

/// Tukey-modified empirical log-odds of a binomial split with S successes and
/// F failures, and Gart's V** standard error. Finite for every S, F with
/// S + F >= 1; throws EmptyBlock when S + F == 0.
GartEstimate gart_estimate(std::int64_t S, std::int64_t F);

/// Translation-invariant table of the recursive binomial decomposition.
/// Level j (0 coarsest .. J-1 finest) splits the block of size 2^(J-j)
/// starting at position m into halves; the decimated level-j cell k of the
/// shift-t signal sits at column (2^(J-j)*k - t) mod T. Cells whose block sum
/// is zero carry se = +infinity and are excluded from shrinkage.
struct PoissonTiTable {
  std::size_t T = 0;
  int J = 0;
  std::vector<std::vector<std::int64_t>> totals;  // totals[s][m]: sum of 2^s counts from m
  std::vector<std::vector<double>> alpha_hat;     // [j][m]
  std::vector<std::vector<double>> se;
  std::vector<std::vector<double>> post_mean;
  std::vector<std::vector<double>> post_var;
  std::int64_t grand_total = 0;
};

PoissonTiTable build_ti_table(const CountSignal& counts);

/// Per-level ash shrinkage of the alpha estimates toward 0, pooled over all T
/// shift positions. Empty-block cells get posterior mean and variance 0.
PoissonTiTable shrink_table(PoissonTiTable table);

enum class ReconstructionMethod { delta, logscale };

struct PoissonFit {
  Signal mean;
  Signal var;
  Signal band_lower;
  Signal band_upper;
  ReconstructionMethod method = ReconstructionMethod::delta;
};

/// Second-order delta approximations E(p), E(q) from posterior moments of
/// alpha; E(p) + E(q) == 1 by construction.
std::pair<double, double> split_means_delta(double post_mean, double post_var);

/// Delta approximations of E(p^2), E(q^2).
std::pair<double, double> split_square_means_delta(double post_mean, double post_var);

/// Posterior-mean reconstruction via the delta method, averaged over all T
/// circulant shifts; fills mean, var and normal-approximation bands.
PoissonFit reconstruct_delta(const PoissonTiTable& table);

/// Plug-in reconstruction on the log scale (posterior means of alpha only),
/// exponentiated per shift and averaged arithmetically across shifts.
PoissonFit reconstruct_logscale(const PoissonTiTable& table);

/// Shift-averaged posterior variance of mu_t: E(mu^2) - (E mu)^2 per shift via
/// the product formula, floored at 0.
Signal reconstruct_variance(const PoissonTiTable& table);

/// Reconstruction for one circulant shift only (root-to-leaf products), in
/// original coordinates.
Signal reconstruct_shift(const PoissonTiTable& table, std::size_t shift,
                         ReconstructionMethod method = ReconstructionMethod::delta);

/// Full pipeline: build_ti_table, shrink_table, reconstruct. All-zero counts
/// short-circuit to the zero fit.
PoissonFit smooth_poisson(const CountSignal& counts,
                          ReconstructionMethod method = ReconstructionMethod::delta);

}  // namespace smash::pois

#endif
