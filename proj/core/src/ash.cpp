#include "smash/ash.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace smash::ash {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454836;
constexpr double kRelTol = 1e-8;
constexpr int kMaxEmSteps = 5000;
constexpr std::size_t kMaxGrid = 512;

double log_normal_density(double x, double variance) {
  return -0.5 * (kLogTwoPi + std::log(variance) + x * x / variance);
}

// Fixed per-problem quantities: the likelihood matrix does not change across
// EM iterations (only the weights do), so it is computed once, row-scaled by
// its max to avoid underflow.
struct EmWorkspace {
  std::size_t n = 0, K = 0;
  std::vector<double> dens;     // n x K, exp(logdens - rowmax)
  std::vector<double> row_max;  // n

  EmWorkspace(const ObservationSet& obs, const std::vector<double>& grid,
              const std::vector<std::size_t>& order) {
    n = obs.size();
    K = grid.size();
    dens.resize(n * K);
    row_max.resize(n);
    std::vector<double> sigma2(K);
    for (std::size_t k = 0; k < K; ++k) sigma2[k] = grid[k] * grid[k];
    for (std::size_t r = 0; r < n; ++r) {
      const std::size_t j = order[r];
      const double b = obs.betahat[j];
      const double s2 = obs.se[j] * obs.se[j];
      double* row = &dens[r * K];
      double m = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < K; ++k) {
        row[k] = log_normal_density(b, sigma2[k] + s2);
        m = std::max(m, row[k]);
      }
      row_max[r] = m;
      for (std::size_t k = 0; k < K; ++k) row[k] = std::exp(row[k] - m);
    }
  }

  // One EM map application. Returns the log-likelihood of the input weights.
  double step(const std::vector<double>& pi, std::vector<double>& out) const {
    std::fill(out.begin(), out.end(), 0.0);
    double ll = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      const double* row = &dens[r * K];
      double f = 0.0;
      for (std::size_t k = 0; k < K; ++k) f += pi[k] * row[k];
      if (!(f > 0.0)) {
        ll = -std::numeric_limits<double>::infinity();
        f = std::numeric_limits<double>::min();
      } else {
        ll += std::log(f) + row_max[r];
      }
      const double inv = 1.0 / f;
      for (std::size_t k = 0; k < K; ++k) out[k] += row[k] * inv;
    }
    double total = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      out[k] *= pi[k];
      total += out[k];
    }
    if (total > 0.0)
      for (std::size_t k = 0; k < K; ++k) out[k] /= total;
    return ll;
  }

  double loglik_of(const std::vector<double>& pi) const {
    double ll = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      const double* row = &dens[r * K];
      double f = 0.0;
      for (std::size_t k = 0; k < K; ++k) f += pi[k] * row[k];
      if (!(f > 0.0)) return -std::numeric_limits<double>::infinity();
      ll += std::log(f) + row_max[r];
    }
    return ll;
  }
};

void project_simplex(std::vector<double>& pi) {
  double total = 0.0;
  for (double& w : pi) {
    if (!(w > 0.0)) w = 0.0;
    total += w;
  }
  if (total <= 0.0) {
    std::fill(pi.begin(), pi.end(), 1.0 / static_cast<double>(pi.size()));
  } else {
    for (double& w : pi) w /= total;
  }
}

void check_prior(const MixturePrior& prior) {
  if (prior.sigma.empty() || prior.sigma.size() != prior.weights.size())
    throw WeightsNotSimplex("prior sigma/weights sizes differ or empty");
  double total = 0.0;
  for (double w : prior.weights) {
    if (!(w >= 0.0)) throw WeightsNotSimplex("negative or non-finite weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-8) throw WeightsNotSimplex("weights do not sum to 1");
  for (std::size_t k = 1; k < prior.sigma.size(); ++k)
    if (prior.sigma[k] < prior.sigma[k - 1]) throw WeightsNotSimplex("sigma grid not nondecreasing");
}

}  // namespace

void validate(const ObservationSet& obs) {
  if (obs.betahat.empty()) throw EmptyObservations("no observations");
  if (obs.betahat.size() != obs.se.size())
    throw LengthMismatch("betahat and se lengths differ");
  for (double b : obs.betahat)
    if (!std::isfinite(b)) throw InvalidObservations("betahat must be finite");
  for (double s : obs.se)
    if (!(s > 0.0) || !std::isfinite(s))
      throw InvalidObservations("se entries must be finite and > 0");
}

std::vector<double> make_grid(const ObservationSet& obs) {
  validate(obs);
  double min_se = std::numeric_limits<double>::infinity();
  double max_excess = 0.0;
  for (std::size_t j = 0; j < obs.size(); ++j) {
    min_se = std::min(min_se, obs.se[j]);
    max_excess = std::max(max_excess, obs.betahat[j] * obs.betahat[j] - obs.se[j] * obs.se[j]);
  }
  const double sigma1 = min_se / 10.0;
  double target = 2.0 * std::sqrt(std::max(max_excess, 0.0));
  if (target <= 0.0) target = sigma1 * M_SQRT2;

  std::vector<double> grid{0.0, sigma1};
  while (grid.back() < target && grid.size() < kMaxGrid) grid.push_back(grid.back() * M_SQRT2);
  if (grid.back() < target) grid.push_back(target);
  return grid;
}

FitResult fit_mixture(const ObservationSet& obs, const std::vector<double>& grid) {
  validate(obs);
  if (grid.empty()) throw Error("empty sigma grid");
  const std::size_t n = obs.size();
  const std::size_t K = grid.size();

  // Canonical processing order: reductions over observations must not depend
  // on input permutation, so circularly shifted coefficient rows fit to
  // bit-identical weights. Keyed on |betahat| because every per-observation
  // quantity in the E-step depends on betahat^2 only; negating the data then
  // leaves the summand sequence unchanged as well.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double fa = std::fabs(obs.betahat[a]);
    const double fb = std::fabs(obs.betahat[b]);
    if (fa != fb) return fa < fb;
    return obs.se[a] < obs.se[b];
  });

  const EmWorkspace ws(obs, grid, order);

  FitResult res;
  std::vector<double> pi(K, 1.0 / static_cast<double>(K));
  std::vector<double> pi1(K), pi2(K), prop(K), pi3(K), r(K), v(K);
  int steps = 0;
  double step_max = 1.0;
  double last_ll = -std::numeric_limits<double>::infinity();

  // Records a log-likelihood on the accepted path.
  const auto record = [&](double ll) {
    if (std::isnan(ll)) throw NonFiniteLikelihood("log-likelihood is NaN");
    res.loglik_trace.push_back(ll);
    res.loglik = ll;
  };

  while (true) {
    const double ll0 = ws.step(pi, pi1);
    ++steps;
    record(ll0);
    // Convergence judged across full extrapolation rounds; a round that
    // gains less than the tolerance ends the loop.
    if ((std::isfinite(last_ll) &&
         std::abs(ll0 - last_ll) <= kRelTol * std::max(1.0, std::abs(ll0))) ||
        steps >= kMaxEmSteps) {
      pi.swap(pi1);
      break;
    }
    last_ll = ll0;

    const double ll1 = ws.step(pi1, pi2);
    ++steps;
    record(ll1);
    if (steps >= kMaxEmSteps) {
      pi.swap(pi2);
      break;
    }

    // Squared-iterant extrapolation with a growing step bound: accepted
    // steps that hit the bound let it grow, a likelihood decrease restarts
    // from the plain EM iterate with the bound reset.
    double rr = 0.0, vv = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      r[k] = pi1[k] - pi[k];
      v[k] = pi2[k] - 2.0 * pi1[k] + pi[k];
      rr += r[k] * r[k];
      vv += v[k] * v[k];
    }
    if (vv > 0.0) {
      const double alpha = std::max(std::min(-std::sqrt(rr / vv), -1.0), -step_max);
      for (std::size_t k = 0; k < K; ++k)
        prop[k] = pi[k] - 2.0 * alpha * r[k] + alpha * alpha * v[k];
      project_simplex(prop);
      const double llp = ws.step(prop, pi3);
      ++steps;
      if (llp >= ll1) {
        if (alpha == -step_max) step_max = std::min(step_max * 4.0, 65536.0);
        pi.swap(pi3);
        record(llp);
        if (steps >= kMaxEmSteps) break;
        continue;
      }
      step_max = 1.0;
      if (steps >= kMaxEmSteps) {
        pi.swap(pi2);
        break;
      }
    }
    pi.swap(pi2);
  }

  res.iterations = steps;
  // Scatter is unnecessary: weights are observation-order free.
  res.prior.sigma = grid;
  project_simplex(pi);
  res.prior.weights = std::move(pi);
  res.loglik = ws.loglik_of(res.prior.weights);
  if (res.loglik_trace.empty() || res.loglik >= res.loglik_trace.back())
    res.loglik_trace.push_back(res.loglik);
  return res;
}

double loglik(const ObservationSet& obs, const MixturePrior& prior) {
  validate(obs);
  check_prior(prior);
  const std::size_t K = prior.sigma.size();
  std::vector<double> sigma2(K), logw(K);
  for (std::size_t k = 0; k < K; ++k) {
    sigma2[k] = prior.sigma[k] * prior.sigma[k];
    logw[k] = prior.weights[k] > 0.0 ? std::log(prior.weights[k])
                                     : -std::numeric_limits<double>::infinity();
  }
  double ll = 0.0;
  std::vector<double> terms(K);
  for (std::size_t j = 0; j < obs.size(); ++j) {
    const double s2 = obs.se[j] * obs.se[j];
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < K; ++k) {
      terms[k] = logw[k] + log_normal_density(obs.betahat[j], sigma2[k] + s2);
      m = std::max(m, terms[k]);
    }
    if (!std::isfinite(m)) return -std::numeric_limits<double>::infinity();
    double acc = 0.0;
    for (std::size_t k = 0; k < K; ++k) acc += std::exp(terms[k] - m);
    ll += m + std::log(acc);
  }
  return ll;
}

PosteriorSummary posterior(const ObservationSet& obs, const MixturePrior& prior) {
  validate(obs);
  check_prior(prior);
  const std::size_t n = obs.size();
  const std::size_t K = prior.sigma.size();
  std::vector<double> sigma2(K), logw(K);
  for (std::size_t k = 0; k < K; ++k) {
    sigma2[k] = prior.sigma[k] * prior.sigma[k];
    logw[k] = prior.weights[k] > 0.0 ? std::log(prior.weights[k])
                                     : -std::numeric_limits<double>::infinity();
  }

  PosteriorSummary out;
  out.mean.resize(n);
  out.variance.resize(n);
  std::vector<double> terms(K);
  for (std::size_t j = 0; j < n; ++j) {
    const double b = obs.betahat[j];
    const double s2 = obs.se[j] * obs.se[j];
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < K; ++k) {
      terms[k] = logw[k] + log_normal_density(b, sigma2[k] + s2);
      m = std::max(m, terms[k]);
    }
    double norm = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      terms[k] = std::exp(terms[k] - m);
      norm += terms[k];
    }
    // shrink_k in [0,1), so |mean| <= |betahat| with matching sign.
    double shrink_acc = 0.0, second_acc = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      const double w = terms[k] / norm;
      const double shrink = sigma2[k] / (sigma2[k] + s2);
      const double comp_mean = b * shrink;
      const double comp_var = shrink * s2;
      shrink_acc += w * shrink;
      second_acc += w * (comp_var + comp_mean * comp_mean);
    }
    const double mean = b * shrink_acc;
    out.mean[j] = mean;
    out.variance[j] = std::max(second_acc - mean * mean, 0.0);
  }
  return out;
}

}  // namespace smash::ash
