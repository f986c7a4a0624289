#ifndef SMASH_ASH_HPP
#define SMASH_ASH_HPP

#include <vector>

#include "smash/types.hpp"

namespace smash::ash {

/// Paired estimates and standard errors. Lengths must match, se entries must
/// be strictly positive and finite (floor zero noise before constructing).
struct ObservationSet {
  std::vector<double> betahat;
  std::vector<double> se;

  std::size_t size() const { return betahat.size(); }
};

void validate(const ObservationSet& obs);

/// Zero-centered normal mixture prior: component sds `sigma` (nondecreasing,
/// sigma[0] may be 0) with simplex weights.
struct MixturePrior {
  std::vector<double> sigma;
  std::vector<double> weights;
};

/// sigma grid for fit_mixture: {0, min(se)/10, ... * sqrt(2) ...} extended to
/// at least 2 * sqrt(max(betahat^2 - se^2, 0)).
std::vector<double> make_grid(const ObservationSet& obs);

struct FitResult {
  MixturePrior prior;
  double loglik = 0.0;
  int iterations = 0;                 // EM map applications
  std::vector<double> loglik_trace;   // log-likelihood along the accepted path
};

/// Maximum-marginal-likelihood weights over the fixed sigma grid, via EM with
/// squared-iterant extrapolation (restart on likelihood decrease). Stops when
/// the relative log-likelihood change drops below 1e-8 or after 5000 EM steps.
/// The fit is invariant under permutation of the observations.
FitResult fit_mixture(const ObservationSet& obs, const std::vector<double>& grid);

/// sum_j log sum_k pi_k N(betahat_j; 0, sigma_k^2 + se_j^2), evaluated with
/// log-sum-exp.
double loglik(const ObservationSet& obs, const MixturePrior& prior);

struct PosteriorSummary {
  std::vector<double> mean;
  std::vector<double> variance;
};

/// Per-observation posterior mean and variance under the fitted prior.
PosteriorSummary posterior(const ObservationSet& obs, const MixturePrior& prior);

}  // namespace smash::ash

#endif
