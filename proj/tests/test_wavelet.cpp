#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <random>

#include "smash/types.hpp"
#include "smash/wavelet.hpp"

using namespace smash;
using wavelet::FilterPair;

namespace {

Signal random_signal(std::size_t T, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-scale, scale);
  Signal y(T);
  for (auto& v : y) v = u(gen);
  return y;
}

// Explicit orthonormal periodic Haar matrix, rows indexed like
// DwtCoefficients: row (j, k) is +/-2^-((J-j)/2) on the two halves of block
// [k 2^(J-j), (k+1) 2^(J-j)); the last row is the constant scaling row.
struct HaarMatrix {
  std::size_t T;
  int J;

  explicit HaarMatrix(std::size_t len) : T(len), J(ilog2(len)) {}

  std::vector<double> detail_row(int j, std::size_t k) const {
    std::vector<double> row(T, 0.0);
    const std::size_t block = T >> j;
    const double c = 1.0 / std::sqrt(static_cast<double>(block));
    for (std::size_t u = 0; u < block; ++u)
      row[k * block + u] = (u < block / 2) ? c : -c;
    return row;
  }

  std::vector<double> scaling_row() const {
    return std::vector<double>(T, 1.0 / std::sqrt(static_cast<double>(T)));
  }
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double max_abs_diff(const Signal& a, const Signal& b) {
  REQUIRE(a.size() == b.size());
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_abs(const Signal& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST_CASE("filters are orthonormal") {
  for (const auto* f : {&FilterPair::haar(), &FilterPair::symmlet8()}) {
    double ll = 0, hh = 0, lh = 0, lsum = 0;
    for (std::size_t i = 0; i < f->low.size(); ++i) {
      ll += f->low[i] * f->low[i];
      hh += f->high[i] * f->high[i];
      lh += f->low[i] * f->high[i];
      lsum += f->low[i];
    }
    CHECK(ll == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(hh == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(lh) < 1e-12);
    CHECK(lsum == doctest::Approx(M_SQRT2).epsilon(1e-12));
  }
  CHECK_THROWS_AS(FilterPair::from_lowpass({0.5, 0.5}, "bad"), InvalidFilter);
}

TEST_CASE("dwt of a constant signal") {
  const double c = 2.75;
  const Signal y(16, c);
  const auto coeffs = wavelet::dwt(y, FilterPair::haar());
  for (const auto& level : coeffs.details)
    for (double d : level) CHECK(d == 0.0);
  CHECK(coeffs.scaling == doctest::Approx(c * 4.0).epsilon(1e-14));
}

TEST_CASE("dwt of [1,2,3,4] matches the explicit Haar matrix") {
  const Signal y{1, 2, 3, 4};
  const auto coeffs = wavelet::dwt(y, FilterPair::haar());
  REQUIRE(coeffs.levels() == 2);
  // Frozen values from the 4x4 orthonormal matrix multiply below.
  CHECK(coeffs.details[1][0] == doctest::Approx(-1.0 / M_SQRT2).epsilon(1e-14));
  CHECK(coeffs.details[1][1] == doctest::Approx(-1.0 / M_SQRT2).epsilon(1e-14));
  CHECK(coeffs.details[0][0] == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(coeffs.scaling == doctest::Approx(5.0).epsilon(1e-14));

  const HaarMatrix W(4);
  for (int j = 0; j < 2; ++j)
    for (std::size_t k = 0; k < (std::size_t{1} << j); ++k)
      CHECK(coeffs.details[j][k] == doctest::Approx(dot(W.detail_row(j, k), y)).epsilon(1e-13));
  CHECK(coeffs.scaling == doctest::Approx(dot(W.scaling_row(), y)).epsilon(1e-13));
}

TEST_CASE("idwt inverts dwt and hand-built pyramids") {
  SUBCASE("zero details give a constant") {
    wavelet::DwtCoefficients c;
    c.details = {{0.0}, {0.0, 0.0}};
    c.scaling = 6.0;
    const auto y = wavelet::idwt(c, FilterPair::symmlet8());
    for (double v : y) CHECK(v == doctest::Approx(3.0).epsilon(1e-12));
  }
  SUBCASE("hand-built coefficients reproduce [1,2,3,4]") {
    wavelet::DwtCoefficients c;
    c.details = {{-2.0}, {-1.0 / M_SQRT2, -1.0 / M_SQRT2}};
    c.scaling = 5.0;
    const auto y = wavelet::idwt(c, FilterPair::haar());
    const Signal expect{1, 2, 3, 4};
    CHECK(max_abs_diff(y, expect) < 1e-12);
  }
  SUBCASE("round trip, Haar T=256") {
    const auto y = random_signal(256, 7);
    const auto back = wavelet::idwt(wavelet::dwt(y, FilterPair::haar()), FilterPair::haar());
    CHECK(max_abs_diff(back, y) < 1e-10 * max_abs(y));
  }
  SUBCASE("round trip, Symmlet8 T=64") {
    const auto y = random_signal(64, 8);
    const auto back = wavelet::idwt(wavelet::dwt(y, FilterPair::symmlet8()), FilterPair::symmlet8());
    CHECK(max_abs_diff(back, y) < 1e-10 * max_abs(y));
  }
  SUBCASE("malformed pyramid rejected") {
    wavelet::DwtCoefficients c;
    c.details = {{0.0, 0.0}};
    CHECK_THROWS_AS(wavelet::idwt(c, FilterPair::haar()), MalformedPyramid);
  }
}

TEST_CASE("round trips and Parseval across sizes and filters") {
  for (const auto* f : {&FilterPair::haar(), &FilterPair::symmlet8()}) {
    for (std::size_t T : {8u, 16u, 64u, 256u, 1024u}) {
      const auto y = random_signal(T, 1000 + T);
      const auto coeffs = wavelet::dwt(y, *f);
      const auto back = wavelet::idwt(coeffs, *f);
      CHECK(max_abs_diff(back, y) < 1e-10 * max_abs(y));

      double energy = coeffs.scaling * coeffs.scaling;
      for (const auto& lvl : coeffs.details)
        for (double d : lvl) energy += d * d;
      double input_energy = 0.0;
      for (double v : y) input_energy += v * v;
      CHECK(energy == doctest::Approx(input_energy).epsilon(1e-9));
    }
  }
}

TEST_CASE("non-power-of-two lengths rejected") {
  const Signal y(12, 1.0);
  CHECK_THROWS_AS(wavelet::dwt(y, FilterPair::haar()), NonPowerOfTwoLength);
  CHECK_THROWS_AS(wavelet::ndwt(y, FilterPair::haar()), NonPowerOfTwoLength);
  CHECK_THROWS_AS(wavelet::propagate_variance(y, FilterPair::haar()), NonPowerOfTwoLength);
}

TEST_CASE("ndwt of a constant signal has zero detail rows") {
  const Signal y(32, -1.25);
  const auto table = wavelet::ndwt(y, FilterPair::haar());
  for (const auto& row : table.details)
    for (double d : row) CHECK(d == 0.0);
  CHECK(table.level0_scaling ==
        doctest::Approx(-1.25 * std::sqrt(32.0)).epsilon(1e-14));
}

TEST_CASE("ndwt rows are shift-equivariant (exact)") {
  for (const auto* f : {&FilterPair::haar(), &FilterPair::symmlet8()}) {
    const auto y = random_signal(32, 21);
    const auto base = wavelet::ndwt(y, *f);
    for (int t : {1, 5, 17}) {
      const auto shifted = wavelet::ndwt(rotate(y, t), *f);
      for (int j = 0; j < base.levels(); ++j) {
        const auto expect = rotate(base.details[j], t);
        for (std::size_t m = 0; m < y.size(); ++m)
          CHECK(shifted.details[j][m] == expect[m]);
      }
      CHECK(shifted.level0_scaling == base.level0_scaling);
    }
  }
}

TEST_CASE("ndwt cells hold every shift's decimated coefficients, T=8") {
  const auto y = random_signal(8, 33);
  const int J = 3;
  for (const auto* f : {&FilterPair::haar(), &FilterPair::symmlet8()}) {
    const auto table = wavelet::ndwt(y, *f);
    for (int t = 0; t < 8; ++t) {
      const auto dec = wavelet::dwt(rotate(y, t), *f);
      for (int j = 0; j < J; ++j) {
        const std::size_t stride = std::size_t{1} << (J - j);
        for (std::size_t k = 0; k < (std::size_t{1} << j); ++k) {
          const std::size_t cell = (stride * k - static_cast<std::size_t>(t)) & 7u;
          CHECK(table.details[j][cell] ==
                doctest::Approx(dec.details[j][k]).epsilon(1e-13));
        }
      }
      CHECK(table.level0_scaling == doctest::Approx(dec.scaling).epsilon(1e-12));
    }
  }
}

TEST_CASE("indwt_average inverts ndwt") {
  for (const auto* f : {&FilterPair::haar(), &FilterPair::symmlet8()}) {
    const auto y = random_signal(128, 55);
    const auto back = wavelet::indwt_average(wavelet::ndwt(y, *f), *f);
    CHECK(max_abs_diff(back, y) < 1e-10 * max_abs(y));
  }
}

TEST_CASE("indwt_average with zeroed details returns the signal mean") {
  const auto y = random_signal(64, 77, 3.0);
  auto table = wavelet::ndwt(y, FilterPair::symmlet8());
  for (auto& row : table.details) std::fill(row.begin(), row.end(), 0.0);
  const auto flat = wavelet::indwt_average(table, FilterPair::symmlet8());
  const double ybar = stable_mean(y);
  for (double v : flat) CHECK(v == doctest::Approx(ybar).epsilon(1e-12));
}

TEST_CASE("indwt_average equals the literal average over all shifts, T=16") {
  // Oracle: read each shift's decimated coefficients out of the (modified)
  // table, invert, rotate back, average. Independent of the cascade.
  const std::size_t T = 16;
  const int J = 4;
  for (const auto* f : {&FilterPair::haar(), &FilterPair::symmlet8()}) {
    auto table = wavelet::ndwt(random_signal(T, 91), *f);
    // Perturb the coefficients so the table is NOT a valid transform.
    std::mt19937_64 gen(4242);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& row : table.details)
      for (auto& v : row) v += u(gen);

    Signal avg(T, 0.0);
    for (std::size_t t = 0; t < T; ++t) {
      wavelet::DwtCoefficients c;
      c.details.resize(J);
      for (int j = 0; j < J; ++j) {
        const std::size_t stride = std::size_t{1} << (J - j);
        c.details[j].resize(std::size_t{1} << j);
        for (std::size_t k = 0; k < c.details[j].size(); ++k)
          c.details[j][k] = table.details[j][(stride * k - t) & (T - 1)];
      }
      c.scaling = table.level0_scaling;
      const auto rec = wavelet::idwt(c, *f);  // estimates rotate(y, t)
      for (std::size_t i = 0; i < T; ++i) avg[i] += rec[(i + t) & (T - 1)];
    }
    for (auto& v : avg) v /= static_cast<double>(T);

    const auto fast = wavelet::indwt_average(table, *f);
    CHECK(max_abs_diff(fast, avg) < 1e-12);
  }
}

TEST_CASE("propagate_variance") {
  SUBCASE("constant variance stays constant at every cell") {
    for (const auto* f : {&FilterPair::haar(), &FilterPair::symmlet8()}) {
      const auto rows = wavelet::propagate_variance(Signal(64, 1.7), *f);
      for (const auto& row : rows)
        for (double v : row) CHECK(v == doctest::Approx(1.7).epsilon(1e-12));
    }
  }
  SUBCASE("zero variance propagates to zero") {
    const auto rows = wavelet::propagate_variance(Signal(32, 0.0), FilterPair::symmlet8());
    for (const auto& row : rows)
      for (double v : row) CHECK(v == 0.0);
  }
  SUBCASE("negative variance rejected") {
    Signal var(16, 1.0);
    var[3] = -0.5;
    CHECK_THROWS_AS(wavelet::propagate_variance(var, FilterPair::haar()), NegativeVariance);
  }
  SUBCASE("matches explicit sum sigma^2_t W^2 for Haar, T=16, all shifts") {
    const std::size_t T = 16;
    const int J = 4;
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> u(0.1, 2.0);
    Signal var(T);
    for (auto& v : var) v = u(gen);

    const auto rows = wavelet::propagate_variance(var, FilterPair::haar());
    const HaarMatrix W(T);
    for (std::size_t t = 0; t < T; ++t) {
      for (int j = 0; j < J; ++j) {
        const std::size_t stride = std::size_t{1} << (J - j);
        for (std::size_t k = 0; k < (std::size_t{1} << j); ++k) {
          const auto row = W.detail_row(j, k);
          double expect = 0.0;
          for (std::size_t u2 = 0; u2 < T; ++u2)
            expect += row[u2] * row[u2] * var[(u2 - t) & (T - 1)];
          const std::size_t cell = (stride * k - t) & (T - 1);
          CHECK(rows[j][cell] == doctest::Approx(expect).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("indwt_average_variance of unit cell variances") {
  // Unit variance at every detail cell and on the scaling path: summing
  // squared synthesis weights over a full orthonormal basis gives 1.
  const std::size_t T = 32;
  std::vector<std::vector<double>> cells(5, std::vector<double>(T, 1.0));
  for (const auto* f : {&FilterPair::haar(), &FilterPair::symmlet8()}) {
    const auto v = wavelet::indwt_average_variance(cells, 1.0, *f);
    for (double x : v) CHECK(x == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("ndwt/indwt_average cost scales like T log T") {
  using clock = std::chrono::steady_clock;
  const auto time_once = [](std::size_t T) {
    const auto y = random_signal(T, T);
    double best = 1e100;
    for (int rep = 0; rep < 3; ++rep) {
      const auto t0 = clock::now();
      const auto table = wavelet::ndwt(y, FilterPair::symmlet8());
      const auto back = wavelet::indwt_average(table, FilterPair::symmlet8());
      const auto t1 = clock::now();
      best = std::min(best, std::chrono::duration<double>(t1 - t0).count() +
                                1e-12 * back[0]);
    }
    return best;
  };
  const double t14 = time_once(std::size_t{1} << 14);
  const double t15 = time_once(std::size_t{1} << 15);
  CHECK(t15 / t14 < 3.0);
}
