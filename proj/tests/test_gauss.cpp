#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "smash/bench.hpp"
#include "smash/gauss.hpp"
#include "smash/rng.hpp"
#include "smash/testfunctions.hpp"

using namespace smash;
using wavelet::FilterPair;

namespace {

Signal noisy(const Signal& mean, const Signal& var, std::uint64_t seed) {
  Rng rng(seed);
  Signal y(mean.size());
  for (std::size_t t = 0; t < y.size(); ++t) y[t] = mean[t] + std::sqrt(var[t]) * rng.normal();
  return y;
}

double sum_sq_diff(const Signal& a, const Signal& b) {
  double acc = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) acc += (a[t] - b[t]) * (a[t] - b[t]);
  return acc;
}

}  // namespace

TEST_CASE("constant input passes through exactly") {
  for (const auto* f : {&FilterPair::haar(), &FilterPair::symmlet8()}) {
    const Signal y(64, 1.6180339887);
    const auto fit = gauss::smooth_mean_known_var(y, Signal(64, 0.8), *f);
    for (double v : fit.mean) CHECK(v == 1.6180339887);
    for (std::size_t t = 0; t < y.size(); ++t) {
      CHECK(fit.band_lower[t] <= fit.mean[t]);
      CHECK(fit.band_upper[t] >= fit.mean[t]);
    }
  }
  const auto joint = gauss::smooth_joint(Signal(32, -4.25));
  for (double v : joint.mean) CHECK(v == -4.25);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(gauss::smooth_mean_known_var(Signal(8, 0.0), Signal(7, 1.0)), LengthMismatch);
  CHECK_THROWS_AS(gauss::smooth_mean_known_var(Signal(8, 0.0), Signal(8, 0.0)), NonPositiveVariance);
  CHECK_THROWS_AS(gauss::estimate_variance_known_mean(Signal(8, 0.0), Signal(4, 0.0)),
                  LengthMismatch);
  CHECK_THROWS_AS(gauss::smooth_joint(Signal(2, 1.0)), TooShort);
}

TEST_CASE("pure noise is shrunk near zero") {
  double total_ms = 0.0;
  const int reps = 20;
  for (int rep = 0; rep < reps; ++rep) {
    const Signal y = noisy(Signal(1024, 0.0), Signal(1024, 1.0), 500 + rep);
    const auto fit = gauss::smooth_mean_known_var(y, Signal(1024, 1.0));
    double ms = 0.0;
    for (double v : fit.mean) ms += v * v;
    total_ms += ms / 1024.0;
  }
  CHECK(total_ms / reps < 0.1);
}

TEST_CASE("spikes at SNR 3 beats the raw data by a factor above 3") {
  const auto mean = bench::gen_mean("spikes", 1024);
  const auto var = bench::gen_var("constant", 1024, 3.0, mean);
  double mise_fit = 0.0, mise_raw = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    const Signal y = noisy(mean, var, 900 + rep);
    const auto fit = gauss::smooth_mean_known_var(y, var);
    mise_fit += sum_sq_diff(fit.mean, mean);
    mise_raw += sum_sq_diff(y, mean);
  }
  CHECK(mise_raw / mise_fit > 3.0);
}

TEST_CASE("(2/3) Z^4 is nearly unbiased for Var(Z^2)") {
  const double sigma = 1.3;
  const double truth = 2.0 * std::pow(sigma, 4.0);
  Rng rng(321);
  double acc = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    const double z = sigma * rng.normal();
    acc += (2.0 / 3.0) * z * z * z * z;
  }
  CHECK(std::abs(acc / n - truth) / truth < 0.05);
}

TEST_CASE("variance estimation recovers a constant variance") {
  const auto mean = bench::gen_mean("spikes", 1024);
  const double sigma2 = 0.04;
  double acc = 0.0;
  const int reps = 20;
  for (int rep = 0; rep < reps; ++rep) {
    const Signal y = noisy(mean, Signal(1024, sigma2), 40 + rep);
    const auto est = gauss::estimate_variance_known_mean(y, mean);
    acc += stable_mean(est);
  }
  CHECK(std::abs(acc / reps - sigma2) / sigma2 < 0.15);
}

TEST_CASE("zero residuals hit the variance floor") {
  const Signal y(32, 2.5);
  const auto est = gauss::estimate_variance_known_mean(y, y);
  for (double v : est) {
    CHECK(v == doctest::Approx(1e-12));
    CHECK(v > 0.0);
  }
}

TEST_CASE("variance estimates stay strictly positive") {
  const auto mean = bench::gen_mean("blocks", 256);
  const Signal y = noisy(mean, Signal(256, 0.01), 77);
  const auto est = gauss::estimate_variance_known_mean(y, mean);
  for (double v : est) CHECK(v > 0.0);
}

TEST_CASE("init_variance implements the circular first-difference rule") {
  const auto v = gauss::init_variance({1.0, 2.0, 3.0, 4.0});
  REQUIRE(v.size() == 4);
  CHECK(v[0] == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(v[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(v[2] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(v[3] == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("joint fit with cycles=0 anchors to the init-variance mean fit") {
  const auto mean = bench::gen_mean("angles", 128);
  const Signal y = noisy(mean, Signal(128, 0.02), 5);
  const auto joint = gauss::smooth_joint(y, 0);

  Signal var = gauss::init_variance(y);
  const double floor = std::max(1e-8 * stable_mean(var), 1e-12);
  for (double& v : var) v = std::max(v, floor);
  const auto anchor = gauss::smooth_mean_known_var(y, var);
  for (std::size_t t = 0; t < y.size(); ++t) CHECK(joint.mean[t] == anchor.mean[t]);
  CHECK(joint.iterations == 0);
}

TEST_CASE("joint fit tracks the known-variance fit on homoskedastic spikes") {
  const auto mean = bench::gen_mean("spikes", 1024);
  const auto var = bench::gen_var("constant", 1024, 3.0, mean);
  double mise_joint = 0.0, mise_known = 0.0;
  for (int rep = 0; rep < 8; ++rep) {
    const Signal y = noisy(mean, var, 7000 + rep);
    mise_joint += sum_sq_diff(gauss::smooth_joint(y).mean, mean);
    mise_known += sum_sq_diff(gauss::smooth_mean_known_var(y, var).mean, mean);
  }
  CHECK(mise_joint < 1.6 * mise_known);  // desk-scale check; acceptance runs 50 reps
}

TEST_CASE("allowing heteroskedasticity helps under a clipped-blocks variance") {
  const auto mean = bench::gen_mean("spikes", 1024);
  const auto var = bench::gen_var("cblocks", 1024, 3.0, mean);
  double mise_hetero = 0.0, mise_const = 0.0;
  for (int rep = 0; rep < 8; ++rep) {
    const Signal y = noisy(mean, var, 8100 + rep);
    mise_hetero += sum_sq_diff(gauss::smooth_joint(y).mean, mean);
    mise_const +=
        sum_sq_diff(gauss::smooth_mean_known_var(y, Signal(1024, stable_mean(var))).mean, mean);
  }
  CHECK(mise_hetero < mise_const);
}

TEST_CASE("smoothing is equivariant under circular shifts (exact)") {
  const auto mean = bench::gen_mean("blip", 64);
  auto var = bench::gen_var("doppler", 64, 2.0, mean);
  const Signal y = noisy(mean, var, 99);
  const auto base = gauss::smooth_mean_known_var(y, var);
  for (int t : {1, 13}) {
    const auto shifted = gauss::smooth_mean_known_var(rotate(y, t), rotate(var, t));
    const auto expect_mean = rotate(base.mean, t);
    const auto expect_lower = rotate(base.band_lower, t);
    for (std::size_t i = 0; i < y.size(); ++i) {
      CHECK(shifted.mean[i] == expect_mean[i]);
      CHECK(shifted.band_lower[i] == expect_lower[i]);
    }
  }
}

TEST_CASE("negating the data negates the fitted mean exactly") {
  const auto mean = bench::gen_mean("heavisine", 64);
  const auto var = bench::gen_var("constant", 64, 2.0, mean);
  const Signal y = noisy(mean, var, 123);
  Signal neg(y.size());
  for (std::size_t t = 0; t < y.size(); ++t) neg[t] = -y[t];
  const auto f1 = gauss::smooth_mean_known_var(y, var);
  const auto f2 = gauss::smooth_mean_known_var(neg, var);
  for (std::size_t t = 0; t < y.size(); ++t) CHECK(f2.mean[t] == -f1.mean[t]);

  const auto j1 = gauss::smooth_joint(y);
  const auto j2 = gauss::smooth_joint(neg);
  for (std::size_t t = 0; t < y.size(); ++t) {
    CHECK(j2.mean[t] == -j1.mean[t]);
    CHECK(j2.sd[t] == j1.sd[t]);
  }
}

TEST_CASE("variance_coefficients exposes delta = W Z^2 and its variances") {
  const Signal z2{0.5, 1.25, 0.0, 2.0, 0.75, 0.1, 0.9, 1.4};
  const auto vc = gauss::variance_coefficients(z2, FilterPair::haar());
  const auto direct = wavelet::ndwt(z2, FilterPair::haar());
  for (int j = 0; j < direct.levels(); ++j)
    for (std::size_t m = 0; m < z2.size(); ++m)
      CHECK(vc.delta.details[j][m] == direct.details[j][m]);
  Signal z4(z2.size());
  for (std::size_t t = 0; t < z2.size(); ++t) z4[t] = (2.0 / 3.0) * z2[t] * z2[t];
  const auto expect = wavelet::propagate_variance(z4, FilterPair::haar());
  for (std::size_t j = 0; j < expect.size(); ++j)
    for (std::size_t m = 0; m < z2.size(); ++m)
      CHECK(vc.gamma_var[j][m] == expect[j][m]);
}

TEST_CASE("reflect_pad") {
  SUBCASE("length 133 pads to 512 and unpads to the original") {
    Signal y(133);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = std::sin(0.1 * static_cast<double>(i));
    const auto [padded, pad] = gauss::reflect_pad(y);
    CHECK(padded.size() == 512);
    CHECK(pad.padded_length == 512);
    CHECK(pad.original_length == 133);
    const auto back = gauss::unpad(padded, pad);
    REQUIRE(back.size() == y.size());
    for (std::size_t i = 0; i < y.size(); ++i) CHECK(back[i] == y[i]);
  }
  SUBCASE("power-of-two input doubles") {
    Signal y(128);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = static_cast<double>(i % 7);
    const auto [padded, pad] = gauss::reflect_pad(y);
    CHECK(padded.size() == 256);
    for (std::size_t i = 0; i < 128; ++i) {
      CHECK(padded[i] == y[i]);
      CHECK(padded[128 + i] == y[127 - i]);  // mirrored tail
    }
  }
  SUBCASE("counts overload keeps integers") {
    const CountSignal c{3, 0, 7};
    const auto [padded, pad] = gauss::reflect_pad(c);
    CHECK(padded.size() == 8);
    CHECK(pad.original_length == 3);
  }
  SUBCASE("too short rejected") {
    CHECK_THROWS_AS(gauss::reflect_pad(Signal{1.0}), TooShort);
  }
}

TEST_CASE("interp_at clamps and interpolates") {
  const Signal v{1.0, 3.0, 2.0};
  CHECK(gauss::interp_at(v, -1.0) == 1.0);
  CHECK(gauss::interp_at(v, 0.5) == doctest::Approx(2.0));
  CHECK(gauss::interp_at(v, 1.25) == doctest::Approx(2.75));
  CHECK(gauss::interp_at(v, 5.0) == 2.0);
}
