#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "treefire/distributions.hpp"
#include "treefire/random.hpp"
#include "treefire/stats.hpp"

using namespace treefire;

TEST_CASE("kolmogorov threshold") {
  CHECK(kolmogorov_threshold(10000, 0.01) == doctest::Approx(1.6276 / 100.0).epsilon(1e-3));
  CHECK(kolmogorov_threshold(100, 0.05) == doctest::Approx(0.1358).epsilon(1e-3));
  CHECK_THROWS_AS(kolmogorov_threshold(0, 0.01), std::domain_error);
  CHECK_THROWS_AS(kolmogorov_threshold(10, 1.5), std::domain_error);
}

TEST_CASE("ks statistic basics") {
  const auto uniform_cdf = [](double x) { return std::clamp(x, 0.0, 1.0); };
  const std::vector<double> median{0.5};
  CHECK(ks_statistic(median, uniform_cdf).statistic == doctest::Approx(0.5));
  const std::vector<double> constant(100, 0.5);
  CHECK(ks_statistic(constant, uniform_cdf).statistic == doctest::Approx(0.5));
  const std::vector<double> grid{0.125, 0.375, 0.625, 0.875};
  CHECK(ks_statistic(grid, uniform_cdf).statistic == doctest::Approx(0.125));
  CHECK_THROWS_AS(ks_statistic(std::vector<double>{}, uniform_cdf), std::domain_error);

  Rng rng(1);
  std::vector<double> xs(10000);
  for (auto& x : xs) x = rayleigh_sample(rng);
  const auto r = ks_statistic(xs, rayleigh_cdf);
  CHECK(r.statistic >= 0.0);
  CHECK(r.statistic <= 1.0);
  CHECK(r.statistic < 1.63 / 100.0);
  CHECK(r.pass);
  CHECK(r.sample_size == xs.size());

  // Invariant under a monotone change of variables applied to both sides.
  std::vector<double> cubed(xs);
  for (auto& x : cubed) x = x * x * x;
  const auto c = ks_statistic(cubed, [](double y) { return rayleigh_cdf(std::cbrt(y)); });
  CHECK(c.statistic == doctest::Approx(r.statistic).epsilon(1e-12));

  // A shifted law is detected.
  std::vector<double> shifted(xs);
  for (auto& x : shifted) x += 0.2;
  CHECK_FALSE(ks_statistic(shifted, rayleigh_cdf).pass);
}

TEST_CASE("ks calibration under the null") {
  Rng rng(2);
  int passes = 0;
  constexpr int kReps = 200;
  for (int rep = 0; rep < kReps; ++rep) {
    std::vector<double> xs(2000);
    for (auto& x : xs) x = rng.uniform();
    passes += ks_statistic(xs, [](double x) { return x; }).pass;
  }
  CHECK(passes >= kReps - 8);
}

TEST_CASE("two-sample ks") {
  Rng rng(3);
  std::vector<double> a(5000), b(7000), c(7000);
  for (auto& x : a) x = rng.uniform();
  for (auto& x : b) x = rng.uniform();
  for (auto& x : c) x = rng.uniform() * 0.9;
  CHECK(ks_two_sample(a, b).pass);
  CHECK_FALSE(ks_two_sample(a, c).pass);
  CHECK(ks_two_sample(a, a).statistic == 0.0);
}

TEST_CASE("chi-square goodness of fit") {
  const std::vector<double> pmf{0.1, 0.2, 0.3, 0.4};
  const std::vector<std::uint64_t> exact{1000, 2000, 3000, 4000};
  const auto perfect = chi_square_gof(exact, pmf);
  CHECK(perfect.statistic == 0.0);
  CHECK(perfect.pass);
  CHECK(perfect.dof == 3);

  const std::vector<std::uint64_t> skewed{1400, 2000, 3000, 3600};
  CHECK_FALSE(chi_square_gof(skewed, pmf).pass);

  // Bins with small expectations are pooled.
  const std::vector<double> tail{0.9, 0.05, 0.02, 0.02, 0.01};
  const std::vector<std::uint64_t> small{180, 10, 4, 4, 2};
  const auto pooled = chi_square_gof(small, tail);
  CHECK(pooled.dof == 2);
  CHECK(pooled.statistic == doctest::Approx(0.0));

  const std::vector<std::uint64_t> tiny{1, 0, 0, 0};
  CHECK_THROWS_AS(chi_square_gof(tiny, pmf), std::domain_error);
  CHECK_THROWS_AS(chi_square_gof(exact, std::vector<double>{0.5, 0.5}), std::domain_error);
  CHECK_THROWS_AS(chi_square_gof(exact, std::vector<double>{0.5, 0.5, 0.5, 0.5}),
                  std::domain_error);
}

TEST_CASE("chi-square calibration under the null") {
  const std::vector<double> pmf{0.05, 0.1, 0.15, 0.2, 0.2, 0.15, 0.1, 0.05};
  std::vector<double> cumulative(pmf.size());
  double running = 0.0;
  for (std::size_t i = 0; i < pmf.size(); ++i) cumulative[i] = running += pmf[i];
  Rng rng(4);
  int passes = 0;
  constexpr int kReps = 100;
  for (int rep = 0; rep < kReps; ++rep) {
    std::vector<std::uint64_t> counts(pmf.size(), 0);
    for (int i = 0; i < 100000; ++i) {
      const double u = rng.uniform();
      const auto bin = std::upper_bound(cumulative.begin(), cumulative.end() - 1, u) -
                       cumulative.begin();
      ++counts[bin];
    }
    passes += chi_square_gof(counts, pmf).pass;
  }
  CHECK(passes >= kReps - 4);
}

TEST_CASE("summaries") {
  const std::vector<double> one{3.5};
  const auto s1 = summarize(one);
  CHECK(s1.mean == 3.5);
  CHECK(s1.std_error == 0.0);
  CHECK(s1.min == 3.5);
  CHECK(s1.max == 3.5);
  const std::vector<double> two{0.0, 1.0};
  CHECK(summarize(two).mean == 0.5);
  CHECK(summarize(two).std_error == doctest::Approx(0.5));
  CHECK_THROWS_AS(summarize(std::vector<double>{}), std::domain_error);

  Rng rng(5);
  std::vector<double> xs(1'000'000);
  for (auto& x : xs) x = rng.uniform();
  const auto s = summarize(xs);
  CHECK(std::abs(s.mean - 0.5) < 3.0 * s.std_error);
  CHECK(s.std_error == doctest::Approx(std::sqrt(1.0 / 12 / xs.size())).epsilon(1e-2));

  std::vector<double> shuffled(xs.begin(), xs.begin() + 10000);
  const auto before = summarize(shuffled);
  rng.shuffle(std::span<double>(shuffled));
  const auto after = summarize(shuffled);
  CHECK(before.mean == after.mean);
  CHECK(before.std_error == after.std_error);
}

TEST_CASE("ecdf") {
  const std::vector<double> xs{3.0, 1.0, 2.0, 2.0};
  const Ecdf f(xs);
  CHECK(f(0.5) == 0.0);
  CHECK(f(1.0) == 0.25);
  CHECK(f(2.0) == 0.75);
  CHECK(f(10.0) == 1.0);
}
