#include "smash/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "smash/csv.hpp"
#include "smash/gauss.hpp"
#include "smash/pois.hpp"
#include "smash/rng.hpp"

namespace smash::bench {

namespace {

Signal scenario_mean(const Scenario& sc) { return gen_mean(sc.mean_fn, sc.T); }

Signal scenario_var(const Scenario& sc, const Signal& mean) {
  return gen_var(sc.var_fn, sc.T, sc.snr, mean);
}

Signal scenario_intensity(const Scenario& sc) {
  return gen_intensity(sc.mean_fn, sc.T, sc.intensity_min, sc.intensity_max);
}

std::string range_string(const Scenario& sc) {
  return "(" + io::format_double(sc.intensity_min) + "," + io::format_double(sc.intensity_max) + ")";
}

std::string default_name(const Scenario& sc) {
  std::ostringstream os;
  if (sc.kind == NoiseKind::gaussian)
    os << sc.mean_fn << "_" << sc.var_fn << "_snr" << io::format_double(sc.snr) << "_T" << sc.T;
  else
    os << sc.mean_fn << "_" << range_string(sc) << "_T" << sc.T;
  return os.str();
}

// Homoskedastic SMASH comparator: constant variance from the MAD of the
// finest decimated Haar details, one mean fit, one residual re-estimate of
// the constant, one refit.
Signal smash_homo_mean(const Signal& y) {
  const std::size_t half = y.size() / 2;
  Signal d(half);
  for (std::size_t k = 0; k < half; ++k) d[k] = std::abs(y[2 * k] - y[2 * k + 1]) * M_SQRT1_2;
  std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(half / 2), d.end());
  const double mad_sigma = d[half / 2] / 0.6744897501960817;
  double var0 = std::max(mad_sigma * mad_sigma, 1e-12);

  auto fit = gauss::smooth_mean_known_var(y, Signal(y.size(), var0));
  double resid = 0.0;
  for (std::size_t t = 0; t < y.size(); ++t) resid += (y[t] - fit.mean[t]) * (y[t] - fit.mean[t]);
  var0 = std::max(resid / static_cast<double>(y.size()), 1e-12);
  fit = gauss::smooth_mean_known_var(y, Signal(y.size(), var0));
  return fit.mean;
}

struct ScenarioData {
  Signal truth_mean;  // Gaussian truth or Poisson intensity
  Signal truth_var;   // Gaussian only
};

Signal apply_gaussian_method(const std::string& method, const Signal& y, const ScenarioData& data) {
  if (method == "smash") return gauss::smooth_joint(y).mean;
  if (method == "smash-homo") return smash_homo_mean(y);
  if (method == "smash-truevar") return gauss::smooth_mean_known_var(y, data.truth_var).mean;
  if (method == "ti-thresh") {
    Signal sd(data.truth_var.size());
    for (std::size_t t = 0; t < sd.size(); ++t) sd[t] = std::sqrt(data.truth_var[t]);
    return baseline_ti_thresh(y, sd);
  }
  throw Error("unknown gaussian method: " + method);
}

Signal apply_poisson_method(const std::string& method, const CountSignal& counts) {
  if (method == "smash") return pois::smooth_poisson(counts, pois::ReconstructionMethod::delta).mean;
  if (method == "smash-logscale")
    return pois::smooth_poisson(counts, pois::ReconstructionMethod::logscale).mean;
  if (method == "anscombe") return baseline_anscombe(counts);
  throw Error("unknown poisson method: " + method);
}

double median_of(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

Signal simulate_gaussian(const Scenario& sc, int replicate) {
  const Signal mean = scenario_mean(sc);
  const Signal var = scenario_var(sc, mean);
  Rng rng(mix_seed(sc.seed, static_cast<std::uint64_t>(replicate)));
  Signal y(sc.T);
  for (std::size_t t = 0; t < sc.T; ++t) y[t] = mean[t] + std::sqrt(var[t]) * rng.normal();
  return y;
}

CountSignal simulate_poisson(const Scenario& sc, int replicate) {
  const Signal intensity = scenario_intensity(sc);
  Rng rng(mix_seed(sc.seed, static_cast<std::uint64_t>(replicate)));
  CountSignal y(sc.T);
  for (std::size_t t = 0; t < sc.T; ++t) y[t] = rng.poisson(intensity[t]);
  return y;
}

double mise(const Signal& estimate, const Signal& truth) {
  if (estimate.size() != truth.size()) throw LengthMismatch("mise: lengths differ");
  double acc = 0.0;
  for (std::size_t t = 0; t < estimate.size(); ++t) {
    const double d = estimate[t] - truth[t];
    acc += d * d;
  }
  return acc;
}

Signal baseline_anscombe(const CountSignal& counts) {
  const std::size_t T = counts.size();
  Signal x(T);
  for (std::size_t t = 0; t < T; ++t)
    x[t] = 2.0 * std::sqrt(static_cast<double>(counts[t]) + 0.375);
  const Signal denoised = baseline_ti_thresh(x, Signal(T, 1.0), wavelet::FilterPair::haar());
  Signal out(T);
  for (std::size_t t = 0; t < T; ++t)
    out[t] = std::max(denoised[t] * denoised[t] / 4.0 - 0.375, 0.0);
  return out;
}

Signal baseline_ti_thresh(const Signal& y, const Signal& sd, const wavelet::FilterPair& filter) {
  if (y.size() != sd.size()) throw LengthMismatch("baseline_ti_thresh: lengths differ");
  Signal var(sd.size());
  for (std::size_t t = 0; t < sd.size(); ++t) {
    if (sd[t] < 0.0 || !std::isfinite(sd[t]))
      throw NonPositiveVariance("baseline_ti_thresh: sd must be finite and >= 0");
    var[t] = sd[t] * sd[t];
  }
  auto table = wavelet::ndwt(y, filter);
  const auto omega2 = wavelet::propagate_variance(var, filter);
  const double lambda = std::sqrt(2.0 * std::log(static_cast<double>(y.size())));
  for (int j = 0; j < table.levels(); ++j)
    for (std::size_t m = 0; m < y.size(); ++m)
      if (std::abs(table.details[j][m]) <= lambda * std::sqrt(omega2[j][m]))
        table.details[j][m] = 0.0;
  return wavelet::indwt_average(table, filter);
}

BenchReport run_benchmark(const BenchConfig& config) {
  BenchReport report;
  report.master_seed = config.master_seed;
  report.version = kVersion;

  struct Job {
    const Scenario* sc;
    const ScenarioData* data;
    std::string method;
    int replicate;
    std::size_t cell;
  };

  std::vector<Scenario> scenarios = config.scenarios;
  std::vector<ScenarioData> data(scenarios.size());
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    auto& sc = scenarios[i];
    if (sc.seed == 0) sc.seed = mix_seed(config.master_seed, i + 1);
    if (sc.name.empty()) sc.name = default_name(sc);
    if (sc.kind == NoiseKind::gaussian) {
      data[i].truth_mean = scenario_mean(sc);
      data[i].truth_var = scenario_var(sc, data[i].truth_mean);
    } else {
      data[i].truth_mean = scenario_intensity(sc);
    }
  }

  std::vector<Job> jobs;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    const auto& sc = scenarios[i];
    const auto& methods =
        sc.kind == NoiseKind::gaussian ? config.gaussian_methods : config.poisson_methods;
    for (const auto& method : methods) {
      for (int rep = 0; rep < sc.replicates; ++rep) {
        BenchCell cell;
        cell.scenario = sc.name;
        cell.mean_fn = sc.mean_fn;
        cell.var_or_range =
            sc.kind == NoiseKind::gaussian ? sc.var_fn : range_string(sc);
        cell.T = sc.T;
        cell.method = method;
        cell.replicate = rep;
        jobs.push_back(Job{&sc, &data[i], method, rep, report.cells.size()});
        report.cells.push_back(std::move(cell));
      }
    }
  }

  const auto run_job = [&](const Job& job) {
    BenchCell& cell = report.cells[job.cell];
    try {
      Signal estimate;
      if (job.sc->kind == NoiseKind::gaussian) {
        const Signal y = simulate_gaussian(*job.sc, job.replicate);
        estimate = apply_gaussian_method(job.method, y, *job.data);
      } else {
        const CountSignal y = simulate_poisson(*job.sc, job.replicate);
        estimate = apply_poisson_method(job.method, y);
      }
      cell.mise_sum = mise(estimate, job.data->truth_mean);
    } catch (const std::exception&) {
      cell.failed = true;
      cell.mise_sum = std::nan("");
    }
  };

  unsigned jobs_n = config.jobs > 0 ? static_cast<unsigned>(config.jobs)
                                    : std::max(1u, std::thread::hardware_concurrency());
  jobs_n = std::min<unsigned>(jobs_n, jobs.empty() ? 1 : static_cast<unsigned>(jobs.size()));
  if (jobs_n <= 1) {
    for (const auto& job : jobs) run_job(job);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(jobs_n);
    for (unsigned w = 0; w < jobs_n; ++w)
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= jobs.size()) return;
          run_job(jobs[i]);
        }
      });
    for (auto& th : pool) th.join();
  }

  // Per (scenario, method) summary in cell order.
  std::map<std::pair<std::string, std::string>, std::vector<double>> groups;
  std::vector<std::pair<std::string, std::string>> order;
  for (const auto& cell : report.cells) {
    const auto key = std::make_pair(cell.scenario, cell.method);
    if (groups.find(key) == groups.end()) order.push_back(key);
    if (!cell.failed) groups[key].push_back(cell.mise_sum);
    else groups[key];
  }
  for (const auto& key : order) {
    const auto& samples = groups[key];
    MethodSummary s;
    s.scenario = key.first;
    s.method = key.second;
    s.samples = static_cast<int>(samples.size());
    if (!samples.empty()) {
      double acc = 0.0;
      for (double v : samples) acc += v;
      s.mean_mise = acc / static_cast<double>(samples.size());
      s.median_mise = median_of(samples);
    } else {
      s.mean_mise = std::nan("");
      s.median_mise = std::nan("");
    }
    report.summary.push_back(std::move(s));
  }
  return report;
}

void write_report_csv(const BenchReport& report, std::ostream& out) {
  out << "scenario,mean_fn,var_fn_or_range,T,method,replicate,mise_sum,mise_mean\n";
  for (const auto& cell : report.cells) {
    out << cell.scenario << ',' << cell.mean_fn << ',' << cell.var_or_range << ',' << cell.T << ','
        << cell.method << ',' << cell.replicate << ',';
    if (cell.failed) {
      out << "NA,NA\n";
    } else {
      out << io::format_double(cell.mise_sum) << ','
          << io::format_double(cell.mise_sum / static_cast<double>(cell.T)) << '\n';
    }
  }
}

void write_report_json(const BenchReport& report, std::ostream& out) {
  nlohmann::json j;
  j["metadata"] = {
      {"master_seed", report.master_seed},
      {"version", report.version},
      {"generator", "mt19937_64 + box-muller + poisson-inversion"},
      {"mise_convention", "mise_sum = sum_t (est-truth)^2; mise_mean = mise_sum / T"},
  };
  j["results"] = nlohmann::json::array();
  for (const auto& cell : report.cells) {
    nlohmann::json c = {
        {"scenario", cell.scenario}, {"mean_fn", cell.mean_fn},
        {"var_fn_or_range", cell.var_or_range}, {"T", cell.T},
        {"method", cell.method}, {"replicate", cell.replicate},
    };
    if (cell.failed) {
      c["failed"] = true;
    } else {
      c["mise_sum"] = cell.mise_sum;
      c["mise_mean"] = cell.mise_sum / static_cast<double>(cell.T);
    }
    j["results"].push_back(std::move(c));
  }
  j["summary"] = nlohmann::json::array();
  for (const auto& s : report.summary) {
    nlohmann::json e = {{"scenario", s.scenario}, {"method", s.method}, {"samples", s.samples}};
    if (s.samples > 0) {
      e["mean_mise_sum"] = s.mean_mise;
      e["median_mise_sum"] = s.median_mise;
    }
    j["summary"].push_back(std::move(e));
  }
  out << j.dump(2) << '\n';
}

BenchConfig poisson_tables_suite(int replicates) {
  BenchConfig config;
  config.poisson_methods = {"smash", "anscombe"};
  const std::vector<std::pair<double, double>> ranges = {
      {0.01, 3.0}, {1.0 / 8.0, 8.0}, {1.0 / 128.0, 128.0}};
  for (const auto& fn : intensity_function_names()) {
    for (const auto& [lo, hi] : ranges) {
      Scenario sc;
      sc.kind = NoiseKind::poisson;
      sc.mean_fn = fn;
      sc.intensity_min = lo;
      sc.intensity_max = hi;
      sc.T = 1024;
      sc.replicates = replicates;
      config.scenarios.push_back(std::move(sc));
    }
  }
  return config;
}

BenchConfig gaussian_figures_suite(int replicates) {
  BenchConfig config;
  config.gaussian_methods = {"smash", "smash-homo", "smash-truevar", "ti-thresh"};
  const std::vector<std::pair<std::string, std::string>> pairs = {
      {"spikes", "constant"}, {"spikes", "cblocks"}, {"corner", "doppler"}};
  for (const auto& [mean_fn, var_fn] : pairs) {
    Scenario sc;
    sc.kind = NoiseKind::gaussian;
    sc.mean_fn = mean_fn;
    sc.var_fn = var_fn;
    sc.snr = 3.0;
    sc.T = 1024;
    sc.replicates = replicates;
    config.scenarios.push_back(std::move(sc));
  }
  return config;
}

std::vector<std::string> known_gaussian_methods() {
  return {"smash", "smash-homo", "smash-truevar", "ti-thresh"};
}

std::vector<std::string> known_poisson_methods() { return {"smash", "smash-logscale", "anscombe"}; }

}  // namespace smash::bench
