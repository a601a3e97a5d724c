#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "treefire/cutting.hpp"
#include "treefire/distributions.hpp"
#include "treefire/exact.hpp"
#include "treefire/fire.hpp"
#include "treefire/stats.hpp"

using namespace treefire;

TEST_CASE("isolation on tiny trees") {
  Rng rng(1);
  const LabeledTree edge(2, {{0, 1}});
  const std::vector<Vertex> first{0};
  CHECK(isolate(edge, first, rng).cuts == 1);

  // The center of a three-vertex path always needs both edges cut.
  const LabeledTree path(3, {{0, 1}, {1, 2}});
  const std::vector<Vertex> center{1};
  for (int i = 0; i < 50; ++i) CHECK(isolate(path, center, rng).cuts == 2);
  const std::vector<Vertex> leaf{0};
  std::vector<EdgeId> order{1, 0};
  CHECK(isolate_in_order(path, leaf, order).cuts == 2);
  order = {0, 1};
  CHECK(isolate_in_order(path, leaf, order).cuts == 1);

  const LabeledTree single(1, {});
  CHECK(isolate(single, first, rng).cuts == 0);
  CHECK_THROWS_AS(isolate(path, std::vector<Vertex>{}, rng), std::domain_error);
  CHECK_THROWS_AS(isolate(path, std::vector<Vertex>{3}, rng), std::domain_error);
}

TEST_CASE("exhaustive isolation means") {
  const auto one = exhaustive_isolation_mean(2, 1);
  CHECK(one.numerator == one.denominator);
  const auto three = exhaustive_isolation_mean(3, 1);
  CHECK(three.numerator == 5);
  CHECK(three.denominator == 3);
  CHECK(exhaustive_isolation_mean(3, 3).value() >= three.value());
  CHECK_THROWS_AS(exhaustive_isolation_mean(6, 1), std::domain_error);
  CHECK_THROWS_AS(exhaustive_isolation_mean(3, 4), std::domain_error);
  CHECK_THROWS_AS(exhaustive_isolation_mean(3, 0), std::domain_error);
}

TEST_CASE("scan order agrees with sequential uniform cutting exactly") {
  for (unsigned n = 2; n <= 4; ++n) {
    for (const auto& tree : all_labeled_trees(n)) {
      for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<bool> is_target(n);
        std::vector<Vertex> targets;
        for (Vertex v = 0; v < n; ++v) {
          if ((mask >> v) & 1u) {
            is_target[v] = true;
            targets.push_back(v);
          }
        }
        const auto expected = oracle::sequential_cut_law(tree, is_target);
        std::map<std::uint64_t, oracle::Rational> scanned;
        std::vector<EdgeId> order(tree.num_edges());
        std::iota(order.begin(), order.end(), EdgeId{0});
        std::int64_t orders = 0;
        std::map<std::uint64_t, std::int64_t> tally;
        do {
          ++tally[isolate_in_order(tree, targets, order).cuts];
          ++orders;
        } while (std::next_permutation(order.begin(), order.end()));
        for (auto& [cuts, count] : tally) scanned[cuts] = oracle::Rational(count, orders);
        CHECK(scanned == expected);
      }
    }
  }
}

TEST_CASE("Monte Carlo isolation mean matches the exhaustive mean") {
  Rng rng(31);
  for (unsigned n = 2; n <= 4; ++n) {
    for (unsigned k = 1; k <= 2; ++k) {
      std::vector<double> xs(40000);
      for (auto& x : xs) {
        const auto tree = sample_uniform_tree(n, rng);
        std::vector<Vertex> targets(k);
        for (auto& t : targets) t = static_cast<Vertex>(rng.below(n));
        x = static_cast<double>(isolate(tree, targets, rng).cuts);
      }
      const auto s = summarize(xs);
      CAPTURE(n);
      CAPTURE(k);
      CHECK(std::abs(s.mean - exhaustive_isolation_mean(n, k).value()) <= 3.0 * s.std_error);
    }
  }
}

TEST_CASE("isolation properties on random instances") {
  Rng rng(55);
  for (int t = 0; t < 10000; ++t) {
    const std::size_t n = 2 + rng.below(99);
    const auto tree = sample_uniform_tree(n, rng);
    std::vector<EdgeId> order(tree.num_edges());
    std::iota(order.begin(), order.end(), EdgeId{0});
    rng.shuffle(std::span<EdgeId>(order));
    std::vector<Vertex> small{static_cast<Vertex>(rng.below(n))};
    std::vector<Vertex> large = small;
    const std::size_t extra = rng.below(4);
    for (std::size_t i = 0; i < extra; ++i) large.push_back(static_cast<Vertex>(rng.below(n)));
    const auto a = isolate_in_order(tree, small, order);
    const auto b = isolate_in_order(tree, large, order);
    CHECK(a.cuts >= 1);
    CHECK(a.cuts <= n - 1);
    CHECK(b.cuts >= a.cuts);
    CHECK(b.cuts <= n - 1);
    // The first offered edge is always a cut.
    REQUIRE(a.first_split.has_value());
    std::vector<std::uint8_t> keep(tree.num_edges(), 1);
    keep[order.front()] = 0;
    const auto comps = components_of(tree, keep);
    CHECK(a.first_split->first == std::max(comps.sizes[0], comps.sizes[1]));
    CHECK(a.first_split->first + a.first_split->second == n);
  }
}

TEST_CASE("cut process discards targetless sides") {
  const LabeledTree path(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  const std::vector<Vertex> targets{1};
  CutProcess process(path, targets);
  CHECK(process.offer(2));
  CHECK_FALSE(process.retained(3));
  CHECK_FALSE(process.retained(4));
  CHECK_FALSE(process.offer(3));
  CHECK_FALSE(process.finished());
  CHECK(process.offer(0));
  CHECK_FALSE(process.finished());
  CHECK(process.offer(1));
  CHECK(process.finished());
  CHECK(process.cuts() == 3);
  CHECK(process.retained(1));
  CHECK_FALSE(process.offer(1));
}

TEST_CASE("first cut split") {
  Rng rng(6);
  const LabeledTree edge(2, {{0, 1}});
  CHECK(first_cut_split(edge, rng) == SplitSizes{1, 1});
  CHECK_THROWS_AS(first_cut_split(LabeledTree(1, {}), rng), std::domain_error);

  for (unsigned n = 2; n <= 6; ++n) {
    const auto counts = exact_first_cut_counts(n);
    double total = n - 1;
    for (unsigned i = 2; i < n; ++i) total *= n;
    for (unsigned m = (n + 1) / 2; m < n; ++m) {
      CHECK(counts[m] / total == doctest::Approx(first_cut_pmf(n, m)).epsilon(1e-12));
    }
  }

  constexpr std::size_t kN = 10;
  std::vector<std::uint64_t> counts(kN - 5, 0);
  std::vector<double> pmf(kN - 5);
  for (std::size_t m = 5; m < kN; ++m) pmf[m - 5] = first_cut_pmf(kN, m);
  for (int i = 0; i < 50000; ++i) {
    ++counts[first_cut_split(sample_uniform_tree(kN, rng), rng).first - 5];
  }
  CHECK(chi_square_gof(counts, pmf).pass);
}

TEST_CASE("fire density averages the isolation generating function") {
  // A vertex stays fireproof iff none of the X(n,1) edges that isolate it
  // ignites, so E[D_n] = E[(1-q)^{X(n,1)}].
  constexpr std::size_t kN = 30;
  const double q = 0.15;
  Rng rng(808);
  std::vector<double> density(20000), generating(20000);
  for (std::size_t i = 0; i < density.size(); ++i) {
    const auto tree = sample_uniform_tree(kN, rng);
    density[i] = run_fire(tree, FireConfig::from_probability(kN, q), rng).density();
    const std::vector<Vertex> target{static_cast<Vertex>(rng.below(kN))};
    generating[i] = std::pow(1.0 - q, static_cast<double>(isolate(tree, target, rng).cuts));
  }
  const auto a = summarize(density);
  const auto b = summarize(generating);
  CHECK(std::abs(a.mean - b.mean) < 4.0 * std::hypot(a.std_error, b.std_error));
}
