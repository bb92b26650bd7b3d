// Copyright 2026 The gaitug Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>

#include "error.hpp"
#include "oracles.hpp"
#include "stats.hpp"

using namespace gaitug;
using namespace gaitug::stats;

namespace {

template <typename Fn>
ErrorKind kind_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected gaitug::Error");
  return ErrorKind::kIo;
}

struct FrozenShapiro {
  std::vector<double> sample;
  double w;
  double p;
};

// W and p from a reference implementation of the same algorithm.
std::vector<FrozenShapiro> frozen_shapiro() {
  std::vector<FrozenShapiro> out;
  out.push_back({{148, 154, 158, 160, 161, 162, 166, 170, 182, 195, 236},
                 0.7888146948631716, 0.006703814061898823});
  std::vector<double> b, d, e;
  for (int k = 1; k <= 20; ++k) b.push_back(0.1 * k * k);
  out.push_back({b, 0.9061306286053874, 0.053809589128654696});
  out.push_back({{1, 2, 4}, 0.9642857142857142, 0.6368868450289689});
  for (int k = 1; k <= 50; ++k) d.push_back(std::sin(1.7 * k) + 0.1 * k);
  out.push_back({d, 0.9776255818038099, 0.45674930218528975});
  for (int k = 1; k <= 300; ++k) e.push_back(std::sin(0.37 * k) * std::cos(1.3 * k) + 0.02 * k);
  out.push_back({e, 0.9727533568350452, 1.827627851451605e-05});
  return out;
}

}  // namespace

TEST_SUITE("stats") {

TEST_CASE("shapiro-wilk reproduces reference values") {
  for (const auto& f : frozen_shapiro()) {
    const ShapiroResult r = shapiro_wilk(f.sample);
    CHECK(r.n == f.sample.size());
    CHECK(r.w_statistic == doctest::Approx(f.w).epsilon(1e-6));
    CHECK(r.p_value == doctest::Approx(f.p).epsilon(1e-4));
  }
}

TEST_CASE("shapiro-wilk is order and location-scale free") {
  std::vector<double> x{3.2, 1.1, 4.8, 2.2, 2.9, 3.9, 0.4, 5.5, 2.0};
  const ShapiroResult a = shapiro_wilk(x);
  std::vector<double> y;
  for (auto it = x.rbegin(); it != x.rend(); ++it) y.push_back(7.0 + 2.5 * *it);
  const ShapiroResult b = shapiro_wilk(y);
  CHECK(a.w_statistic == doctest::Approx(b.w_statistic).epsilon(1e-12));
  CHECK(a.p_value == doctest::Approx(b.p_value).epsilon(1e-10));
}

TEST_CASE("shapiro-wilk power and size") {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::exponential_distribution<double> expo(1.0);
  int normal_pass = 0, expo_reject = 0;
  for (int s = 0; s < 500; ++s) {
    std::vector<double> a(50), b(50);
    for (double& v : a) v = normal(rng);
    for (double& v : b) v = expo(rng);
    if (shapiro_wilk(a).p_value > 0.05) ++normal_pass;
    if (shapiro_wilk(b).p_value < 0.05) ++expo_reject;
  }
  CHECK(normal_pass >= 450);
  CHECK(expo_reject >= 450);
}

TEST_CASE("shapiro-wilk preconditions") {
  CHECK(kind_of([] { shapiro_wilk(std::vector<double>{1.0, 2.0}); }) == ErrorKind::kPrecondition);
  CHECK(kind_of([] { shapiro_wilk(std::vector<double>(10, 3.0)); }) == ErrorKind::kDegenerate);
  CHECK(kind_of([] { shapiro_wilk(std::vector<double>(5001, 0.0)); }) == ErrorKind::kPrecondition);
}

TEST_CASE("spearman examples") {
  const std::vector<double> x{1, 2, 3};
  CHECK(spearman(x, std::vector<double>{1, 4, 9}).rho == doctest::Approx(1.0));
  CHECK(spearman(x, std::vector<double>{-1, -2, -3}).rho == doctest::Approx(-1.0));
  const SpearmanResult tied = spearman(std::vector<double>{1, 1, 2}, std::vector<double>{3, 5, 4});
  CHECK(tied.rho == doctest::Approx(test::brute_spearman({1, 1, 2}, {3, 5, 4})).epsilon(1e-12));
  CHECK(std::abs(tied.rho) < 1e-12);

  const std::vector<double> a{3.1, 1.2, 5.5, 2.2, 2.2, 9.0, 4.4, 0.5};
  const std::vector<double> b{2.0, 1.0, 6.0, 2.5, 3.0, 8.0, 3.5, 1.5};
  const SpearmanResult r = spearman(a, b);
  CHECK(r.n == 8);
  CHECK(r.rho == doctest::Approx(0.8982196964349441).epsilon(1e-12));
  CHECK(r.p_value == doctest::Approx(0.002438796796382353).epsilon(1e-8));
}

TEST_CASE("spearman preconditions") {
  CHECK(kind_of([] { spearman(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2}); }) ==
        ErrorKind::kPrecondition);
  CHECK(kind_of([] { spearman(std::vector<double>{1, 2}, std::vector<double>{1, 2}); }) ==
        ErrorKind::kPrecondition);
  CHECK(kind_of([] { spearman(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}); }) ==
        ErrorKind::kDegenerate);
  CHECK(kind_of([] { spearman(std::vector<double>{1, NAN, 3}, std::vector<double>{1, 2, 3}); }) ==
        ErrorKind::kPrecondition);
}

TEST_CASE("midranks and brute-force agreement") {
  CHECK(midranks(std::vector<double>{10, 20, 20, 5, 20}) == std::vector<double>{2, 4, 4, 1, 4});
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> small(0, 6);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 3 + t % 40;
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = t % 2 ? small(rng) : normal(rng);
      y[i] = t % 3 ? small(rng) : normal(rng);
    }
    if (test::brute_midranks(x) == std::vector<double>(n, test::brute_midranks(x)[0])) continue;
    if (test::brute_midranks(y) == std::vector<double>(n, test::brute_midranks(y)[0])) continue;
    CHECK(midranks(x) == test::brute_midranks(x));
    CHECK(std::abs(spearman(x, y).rho - test::brute_spearman(x, y)) < 1e-12);
  }
}

TEST_CASE("spearman is invariant under strictly monotone transforms") {
  std::mt19937_64 rng(37);
  std::uniform_int_distribution<int> small(-5, 5);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> x(25), y(25);
    for (std::size_t i = 0; i < 25; ++i) {
      x[i] = small(rng);
      y[i] = small(rng) + 0.5 * x[i];
    }
    std::vector<double> fx, gy;
    for (double v : x) fx.push_back(std::exp(v) + v * v * v);
    for (double v : y) gy.push_back(-std::atan(v));
    const SpearmanResult a = spearman(x, y);
    const SpearmanResult b = spearman(fx, gy);
    CHECK(b.rho == doctest::Approx(-a.rho).epsilon(1e-12));
    CHECK(b.p_value == doctest::Approx(a.p_value).epsilon(1e-9));
  }
}

TEST_CASE("normal distribution helpers") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5));
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-12));
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(normal_quantile(normal_cdf(-2.7)) == doctest::Approx(-2.7).epsilon(1e-10));
}

TEST_CASE("video-insole agreement keeps complete participants") {
  std::vector<TrialPair> pairs;
  for (int p = 1; p <= 4; ++p) {
    for (int t = 1; t <= 3; ++t) {
      const double v = 0.45 + 0.01 * (3 * p + t);
      pairs.push_back({{"P" + std::to_string(p), t}, v, v});
    }
  }
  pairs.push_back({{"P9", 1}, 0.5, 0.5});
  pairs.push_back({{"P9", 2}, 0.5, 0.5});
  const AgreementReport r = compare_video_insole(pairs);
  CHECK(r.spearman.rho == doctest::Approx(1.0));
  CHECK(r.mean_bias_s == doctest::Approx(0.0));
  CHECK(r.pairs.size() == 12);
  REQUIRE(r.excluded.size() == 1);
  CHECK(r.excluded[0].participant_id == "P9");

  std::vector<TrialPair> too_few{{{"P1", 1}, 0.5, 0.5}, {{"P1", 2}, 0.5, 0.6}};
  CHECK(kind_of([&] { compare_video_insole(too_few); }) == ErrorKind::kPrecondition);
  std::vector<TrialPair> dup{{{"P1", 1}, 0.5, 0.5}, {{"P1", 1}, 0.5, 0.6}};
  CHECK(kind_of([&] { compare_video_insole(dup); }) == ErrorKind::kStructure);
}

TEST_CASE("video-insole agreement recovers an injected offset") {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> spread(0.55, 0.06);
  std::normal_distribution<double> jitter(0.0, 0.020);
  int strong = 0;
  double bias_sum = 0.0;
  for (int s = 0; s < 100; ++s) {
    std::vector<TrialPair> pairs;
    for (int p = 0; p < 30; ++p) {
      for (int t = 1; t <= 3; ++t) {
        const double video = spread(rng);
        pairs.push_back({{"P" + std::to_string(p), t}, video, video + jitter(rng) + 0.030});
      }
    }
    const AgreementReport r = compare_video_insole(pairs);
    if (r.spearman.rho >= 0.9) ++strong;
    bias_sum += r.mean_bias_s;
    CHECK(r.mean_bias_s == doctest::Approx(-0.030).epsilon(0.25));
  }
  CHECK(strong == 100);
  CHECK(bias_sum / 100.0 == doctest::Approx(-0.030).epsilon(0.02));
}

}  // TEST_SUITE
