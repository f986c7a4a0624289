#include "smash/pois.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "smash/ash.hpp"

namespace smash::pois {

namespace {

constexpr double kMeanFloor = 1e-12;

double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// f'(x) = e^x / (1 + e^x)^2, symmetric in x.
double logistic_deriv(double x) {
  const double p = logistic(x);
  return p * (1.0 - p);
}

// f''(x) = e^x (1 - e^x) / (1 + e^x)^3 = f'(x) (1 - 2 f(x)); odd in x.
double logistic_second_deriv(double x) {
  const double p = logistic(x);
  return p * (1.0 - p) * (1.0 - 2.0 * p);
}

void check_counts(const CountSignal& counts) {
  if (!is_power_of_two(counts.size()))
    throw NonPowerOfTwoLength("count signal length is not a power of two >= 2");
  for (auto c : counts)
    if (c < 0) throw Error("counts must be nonnegative");
}

void check_table(const PoissonTiTable& table, bool need_posterior) {
  if (table.T == 0 || !is_power_of_two(table.T) || table.J != ilog2(table.T))
    throw MalformedTable("table dimensions inconsistent");
  const auto rows_ok = [&](const std::vector<std::vector<double>>& rows) {
    if (rows.size() != static_cast<std::size_t>(table.J)) return false;
    for (const auto& r : rows)
      if (r.size() != table.T) return false;
    return true;
  };
  if (!rows_ok(table.alpha_hat) || !rows_ok(table.se)) throw MalformedTable("alpha/se rows malformed");
  if (need_posterior && (!rows_ok(table.post_mean) || !rows_ok(table.post_var)))
    throw MalformedTable("posterior rows missing; run shrink_table first");
}

// Downward product cascade: U_J = start everywhere, and at each stage a block
// average of (left-factor, right-factor) contributions over the two parent
// classes. U_0[i] equals the average over all T shifts of the root-to-leaf
// product for leaf i.
Signal product_cascade(const PoissonTiTable& table,
                       const std::vector<std::vector<double>>& left,
                       const std::vector<std::vector<double>>& right, double start) {
  const std::size_t T = table.T;
  const std::size_t mask = T - 1;
  Signal u(T, start), unew(T);
  for (int r = table.J; r >= 1; --r) {
    const int j = table.J - r;
    const std::size_t half = std::size_t{1} << (r - 1);
    const auto& pj = left[j];
    const auto& qj = right[j];
    for (std::size_t m = 0; m < T; ++m) {
      const std::size_t msib = (m - half) & mask;
      unew[m] = 0.5 * (u[m] * pj[m] + u[msib] * qj[msib]);
    }
    u.swap(unew);
  }
  return u;
}

struct SplitFactors {
  std::vector<std::vector<double>> p, q;
};

template <typename F>
SplitFactors per_cell(const PoissonTiTable& table, F&& f) {
  SplitFactors out;
  out.p.assign(table.J, std::vector<double>(table.T));
  out.q.assign(table.J, std::vector<double>(table.T));
  for (int j = 0; j < table.J; ++j)
    for (std::size_t m = 0; m < table.T; ++m) {
      const auto pq = f(table.post_mean[j][m], table.post_var[j][m]);
      out.p[j][m] = pq.first;
      out.q[j][m] = pq.second;
    }
  return out;
}

PoissonFit assemble_fit(Signal mean, const PoissonTiTable& table, ReconstructionMethod method) {
  PoissonFit fit;
  fit.method = method;
  for (double& v : mean) v = std::max(v, kMeanFloor);
  fit.mean = std::move(mean);
  fit.var = reconstruct_variance(table);
  fit.band_lower.resize(table.T);
  fit.band_upper.resize(table.T);
  for (std::size_t t = 0; t < table.T; ++t) {
    const double half_width = 2.0 * std::sqrt(fit.var[t]);
    fit.band_lower[t] = fit.mean[t] - half_width;
    fit.band_upper[t] = fit.mean[t] + half_width;
  }
  return fit;
}

}  // namespace

GartEstimate gart_estimate(std::int64_t S, std::int64_t F) {
  if (S < 0 || F < 0) throw Error("gart_estimate: negative block sums");
  const std::int64_t N = S + F;
  if (N == 0) throw EmptyBlock("gart_estimate: S + F == 0");
  const double s = static_cast<double>(S);
  const double f = static_cast<double>(F);
  const double n = static_cast<double>(N);

  GartEstimate g;
  if (S == 0)
    g.alpha_hat = std::log((s + 0.5) / (f + 0.5)) - 0.5;
  else if (S == N)
    g.alpha_hat = std::log((s + 0.5) / (f + 0.5)) + 0.5;
  else
    g.alpha_hat = std::log(s / f);

  const double v3 = (n + 1.0) / n * (1.0 / (s + 1.0) + 1.0 / (f + 1.0));
  const double vstar = v3 * (1.0 - 2.0 / n + v3 / 2.0);
  const double vss = vstar - 0.5 * v3 * v3 * (v3 - 4.0 / n);
  g.se = std::sqrt(vss);
  return g;
}

PoissonTiTable build_ti_table(const CountSignal& counts) {
  check_counts(counts);
  const std::size_t T = counts.size();
  const int J = ilog2(T);
  const std::size_t mask = T - 1;

  PoissonTiTable table;
  table.T = T;
  table.J = J;
  table.totals.resize(J + 1);
  table.totals[0] = counts;
  for (int s = 1; s <= J; ++s) {
    const std::size_t half = std::size_t{1} << (s - 1);
    auto& dst = table.totals[s];
    const auto& src = table.totals[s - 1];
    dst.resize(T);
    for (std::size_t m = 0; m < T; ++m) dst[m] = src[m] + src[(m + half) & mask];
  }
  table.grand_total = table.totals[J][0];

  table.alpha_hat.assign(J, std::vector<double>(T));
  table.se.assign(J, std::vector<double>(T));
  for (int j = 0; j < J; ++j) {
    const int s_child = J - j - 1;
    const std::size_t half = std::size_t{1} << s_child;
    const auto& child = table.totals[s_child];
    for (std::size_t m = 0; m < T; ++m) {
      const std::int64_t S = child[m];
      const std::int64_t F = child[(m + half) & mask];
      if (S + F == 0) {
        table.alpha_hat[j][m] = 0.0;
        table.se[j][m] = std::numeric_limits<double>::infinity();
      } else {
        const GartEstimate g = gart_estimate(S, F);
        table.alpha_hat[j][m] = g.alpha_hat;
        table.se[j][m] = g.se;
      }
    }
  }
  return table;
}

PoissonTiTable shrink_table(PoissonTiTable table) {
  check_table(table, /*need_posterior=*/false);
  const std::size_t T = table.T;
  table.post_mean.assign(table.J, std::vector<double>(T, 0.0));
  table.post_var.assign(table.J, std::vector<double>(T, 0.0));

  std::vector<std::size_t> idx;
  for (int j = 0; j < table.J; ++j) {
    idx.clear();
    for (std::size_t m = 0; m < T; ++m)
      if (std::isfinite(table.se[j][m])) idx.push_back(m);
    if (idx.empty()) continue;

    ash::ObservationSet obs;
    obs.betahat.reserve(idx.size());
    obs.se.reserve(idx.size());
    for (std::size_t m : idx) {
      obs.betahat.push_back(table.alpha_hat[j][m]);
      obs.se.push_back(table.se[j][m]);
    }
    const auto fit = ash::fit_mixture(obs, ash::make_grid(obs));
    const auto ps = ash::posterior(obs, fit.prior);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      table.post_mean[j][idx[i]] = ps.mean[i];
      table.post_var[j][idx[i]] = ps.variance[i];
    }
  }
  return table;
}

std::pair<double, double> split_means_delta(double post_mean, double post_var) {
  const double p = logistic(post_mean);
  const double correction = 0.5 * logistic_second_deriv(post_mean) * post_var;
  return {p + correction, (1.0 - p) - correction};
}

std::pair<double, double> split_square_means_delta(double post_mean, double post_var) {
  const double p = logistic(post_mean);
  const double d1 = logistic_deriv(post_mean);
  const double d2 = logistic_second_deriv(post_mean);
  const double ep = p + 0.5 * d2 * post_var;
  const double eq = (1.0 - p) - 0.5 * d2 * post_var;
  const double fisher = d1 * d1 * post_var;
  return {ep * ep + fisher, eq * eq + fisher};
}

PoissonFit reconstruct_delta(const PoissonTiTable& table) {
  check_table(table, /*need_posterior=*/true);
  const auto factors = per_cell(table, split_means_delta);
  Signal mean =
      product_cascade(table, factors.p, factors.q, static_cast<double>(table.grand_total));
  return assemble_fit(std::move(mean), table, ReconstructionMethod::delta);
}

PoissonFit reconstruct_logscale(const PoissonTiTable& table) {
  check_table(table, /*need_posterior=*/true);
  const auto factors = per_cell(table, [](double pm, double) {
    const double p = logistic(pm);
    return std::pair<double, double>{p, 1.0 - p};
  });
  Signal mean =
      product_cascade(table, factors.p, factors.q, static_cast<double>(table.grand_total));
  return assemble_fit(std::move(mean), table, ReconstructionMethod::logscale);
}

Signal reconstruct_variance(const PoissonTiTable& table) {
  check_table(table, /*need_posterior=*/true);
  const double mu00 = static_cast<double>(table.grand_total);
  const auto square_factors = per_cell(table, split_square_means_delta);
  const auto mean_factors = per_cell(table, [](double pm, double pv) {
    const auto pq = split_means_delta(pm, pv);
    return std::pair<double, double>{pq.first * pq.first, pq.second * pq.second};
  });
  const Signal e2 = product_cascade(table, square_factors.p, square_factors.q, mu00 * mu00);
  const Signal m2 = product_cascade(table, mean_factors.p, mean_factors.q, mu00 * mu00);
  Signal var(table.T);
  for (std::size_t t = 0; t < table.T; ++t) var[t] = std::max(e2[t] - m2[t], 0.0);
  return var;
}

Signal reconstruct_shift(const PoissonTiTable& table, std::size_t shift,
                         ReconstructionMethod method) {
  check_table(table, /*need_posterior=*/true);
  const std::size_t T = table.T;
  const std::size_t mask = T - 1;
  const std::size_t t = shift & mask;
  Signal shifted(T);
  for (std::size_t i = 0; i < T; ++i) {
    double val = static_cast<double>(table.grand_total);
    for (int j = 0; j < table.J; ++j) {
      const std::size_t block = std::size_t{1} << (table.J - j);
      const std::size_t half = block / 2;
      const std::size_t block_start = i - (i & (block - 1));
      const std::size_t m = (block_start - t) & mask;
      std::pair<double, double> pq;
      if (method == ReconstructionMethod::delta)
        pq = split_means_delta(table.post_mean[j][m], table.post_var[j][m]);
      else {
        const double p = logistic(table.post_mean[j][m]);
        pq = {p, 1.0 - p};
      }
      val *= ((i & (block - 1)) < half) ? pq.first : pq.second;
    }
    shifted[i] = val;
  }
  // shifted estimates rotate(y, t); map back to original coordinates.
  Signal out(T);
  for (std::size_t i = 0; i < T; ++i) out[i] = shifted[(i + t) & mask];
  return out;
}

PoissonFit smooth_poisson(const CountSignal& counts, ReconstructionMethod method) {
  check_counts(counts);
  const std::size_t T = counts.size();
  std::int64_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) {
    PoissonFit fit;
    fit.method = method;
    fit.mean.assign(T, 0.0);
    fit.var.assign(T, 0.0);
    fit.band_lower.assign(T, 0.0);
    fit.band_upper.assign(T, 0.0);
    return fit;
  }
  const PoissonTiTable table = shrink_table(build_ti_table(counts));
  return method == ReconstructionMethod::delta ? reconstruct_delta(table)
                                               : reconstruct_logscale(table);
}

}  // namespace smash::pois
