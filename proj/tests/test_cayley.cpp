#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "treefire/cayley.hpp"
#include "treefire/distributions.hpp"
#include "treefire/exact.hpp"
#include "treefire/stats.hpp"

using namespace treefire;

namespace {

std::set<std::pair<Vertex, Vertex>> edge_set(const LabeledTree& tree) {
  std::set<std::pair<Vertex, Vertex>> out;
  for (const Edge& e : tree.edges()) out.emplace(std::min(e.u, e.v), std::max(e.u, e.v));
  return out;
}

std::vector<double> pmf_vector(std::size_t size, auto&& pmf) {
  std::vector<double> out(size);
  for (std::size_t i = 0; i < size; ++i) out[i] = pmf(i);
  return out;
}

}  // namespace

TEST_CASE("prufer decode small cases") {
  const auto two = prufer_decode(std::vector<Vertex>{});
  CHECK(two.size() == 2);
  CHECK(edge_set(two) == std::set<std::pair<Vertex, Vertex>>{{0, 1}});
  const auto three = prufer_decode(std::vector<Vertex>{2});
  CHECK(edge_set(three) == std::set<std::pair<Vertex, Vertex>>{{0, 2}, {1, 2}});
  const auto star = prufer_decode(std::vector<Vertex>{0, 0, 0});
  CHECK(star.degree(0) == 4);
  CHECK_THROWS_AS(prufer_decode(std::vector<Vertex>{3}), std::domain_error);
}

TEST_CASE("prufer round trip on random sequences") {
  Rng rng(11);
  constexpr std::size_t kN = 50;
  for (int t = 0; t < 10000; ++t) {
    std::vector<Vertex> code(kN - 2);
    for (auto& c : code) c = static_cast<Vertex>(rng.below(kN));
    const LabeledTree tree = prufer_decode(code);
    REQUIRE(tree.is_spanning_tree());
    CHECK(prufer_encode(tree) == code);
    const LabeledTree again = prufer_decode(prufer_encode(tree));
    CHECK(edge_set(again) == edge_set(tree));
  }
}

TEST_CASE("all labeled trees are distinct spanning trees") {
  for (unsigned n = 1; n <= 6; ++n) {
    const auto trees = all_labeled_trees(n);
    std::size_t expected = 1;
    for (unsigned i = 2; i < n; ++i) expected *= n;
    CHECK(trees.size() == expected);
    std::set<std::set<std::pair<Vertex, Vertex>>> seen;
    for (const auto& t : trees) {
      CHECK(t.is_spanning_tree());
      seen.insert(edge_set(t));
    }
    CHECK(seen.size() == expected);
  }
}

TEST_CASE("is_spanning_tree rejects a cycle") {
  const LabeledTree bad(4, {{0, 1}, {1, 2}, {2, 0}});
  CHECK_FALSE(bad.is_spanning_tree());
  CHECK_THROWS_AS(LabeledTree(3, {{0, 1}}), std::domain_error);
  CHECK_THROWS_AS(LabeledTree(3, {{0, 1}, {1, 3}}), std::domain_error);
}

TEST_CASE("uniform tree sampler") {
  Rng rng(3);
  CHECK(sample_uniform_tree(1, rng).size() == 1);
  CHECK(sample_uniform_tree(1, rng).num_edges() == 0);
  CHECK_THROWS_AS(sample_uniform_tree(0, rng), std::domain_error);
  CHECK(sample_uniform_tree(100000, rng).is_spanning_tree());

  // n = 3: three trees, each with probability 1/3.
  std::map<Vertex, std::uint64_t> centers;
  constexpr int kDraws = 100000;
  for (int i = 0; i < kDraws; ++i) {
    const auto t = sample_uniform_tree(3, rng);
    for (Vertex v = 0; v < 3; ++v) {
      if (t.degree(v) == 2) ++centers[v];
    }
  }
  std::vector<std::uint64_t> counts;
  for (auto& [v, c] : centers) counts.push_back(c);
  REQUIRE(counts.size() == 3);
  CHECK(chi_square_gof(counts, std::vector<double>(3, 1.0 / 3)).pass);

  // n = 4: all sixteen trees equally likely.
  std::map<std::vector<Vertex>, std::uint64_t> codes;
  for (int i = 0; i < kDraws; ++i) ++codes[prufer_encode(sample_uniform_tree(4, rng))];
  counts.clear();
  for (auto& [code, c] : codes) counts.push_back(c);
  REQUIRE(counts.size() == 16);
  CHECK(chi_square_gof(counts, std::vector<double>(16, 1.0 / 16)).pass);
}

TEST_CASE("tree text format") {
  Rng rng(9);
  const auto tree = sample_uniform_tree(30, rng);
  std::stringstream buffer;
  write_tree(buffer, tree);
  std::string first;
  std::getline(buffer, first);
  CHECK(first == "30");
  buffer.seekg(0);
  const auto back = read_tree(buffer);
  CHECK(edge_set(back) == edge_set(tree));

  std::stringstream cyclic("4\n1 2\n2 3\n3 1\n");
  CHECK_THROWS(read_tree(cyclic));
  std::stringstream zero_label("2\n0 1\n");
  CHECK_THROWS(read_tree(zero_label));
}

TEST_CASE("spinal decomposition examples") {
  const LabeledTree path(3, {{0, 1}, {1, 2}});
  const auto same = spinal_decompose(path, 1, 1);
  CHECK(same.length() == 0);
  CHECK(same.bush_sizes() == std::vector<std::size_t>{3});

  const auto full = spinal_decompose(path, 0, 2);
  CHECK(full.length() == 2);
  CHECK(full.spine == std::vector<Vertex>{0, 1, 2});
  CHECK(full.bush_sizes() == std::vector<std::size_t>{1, 1, 1});

  const LabeledTree star(4, {{0, 1}, {0, 2}, {0, 3}});
  const auto leafs = spinal_decompose(star, 1, 2);
  CHECK(leafs.spine == std::vector<Vertex>{1, 0, 2});
  CHECK(leafs.bush_sizes() == std::vector<std::size_t>{1, 2, 1});
  CHECK_THROWS_AS(spinal_decompose(star, 0, 4), std::domain_error);
}

TEST_CASE("spinal decomposition partitions the vertex set") {
  Rng rng(21);
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 2 + rng.below(60);
    const auto tree = sample_uniform_tree(n, rng);
    const auto u = static_cast<Vertex>(rng.below(n));
    const auto v = static_cast<Vertex>(rng.below(n));
    const auto d = spinal_decompose(tree, u, v);
    REQUIRE(d.bushes.size() == d.spine.size());
    std::vector<int> hits(n, 0);
    for (std::size_t i = 0; i < d.bushes.size(); ++i) {
      CHECK(d.bushes[i].root == d.spine[i]);
      for (auto w : d.bushes[i].vertices) ++hits[w];
    }
    CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
    for (std::size_t i = 0; i + 1 < d.spine.size(); ++i) {
      bool adjacent = false;
      for (const auto& inc : tree.incident(d.spine[i])) adjacent |= inc.neighbor == d.spine[i + 1];
      CHECK(adjacent);
    }
  }
}

TEST_CASE("spine length law matches exhaustive counts") {
  for (unsigned n = 1; n <= 5; ++n) {
    const auto counts = exact_spine_counts(n);
    double total = 1.0;
    for (unsigned i = 0; i < n; ++i) total *= n;
    for (unsigned k = 0; k < n; ++k) {
      CHECK(counts[k] / total == doctest::Approx(spine_pmf(n, k)).epsilon(1e-12));
    }
  }
  Rng rng(8);
  std::vector<std::uint64_t> counts(3, 0);
  for (int i = 0; i < 60000; ++i) {
    const auto t = sample_uniform_tree(3, rng);
    ++counts[spinal_decompose(t, static_cast<Vertex>(rng.below(3)),
                              static_cast<Vertex>(rng.below(3))).length()];
  }
  CHECK(chi_square_gof(counts, pmf_vector(3, [](std::size_t k) { return spine_pmf(3, k); })).pass);
}

TEST_CASE("bush sizes given spine length are conditioned Borel") {
  // Given lambda = k the k+1 bush sizes are i.i.d. Borel conditioned to sum
  // to n. Compare the first bush with the exact marginal and with draws of
  // conditioned_borel_sample.
  constexpr std::size_t kN = 30;
  Rng rng(1234);
  std::map<std::size_t, std::vector<double>> first_bush;
  for (int t = 0; t < 100000; ++t) {
    const auto tree = sample_uniform_tree(kN, rng);
    const auto d = spinal_decompose(tree, static_cast<Vertex>(rng.below(kN)),
                                    static_cast<Vertex>(rng.below(kN)));
    if (d.length() >= 1 && d.length() <= 3) {
      first_bush[d.length()].push_back(static_cast<double>(d.bush_sizes().front()));
    }
  }
  for (std::size_t k = 1; k <= 3; ++k) {
    const auto& sample = first_bush[k];
    REQUIRE(sample.size() > 1000);
    std::vector<std::uint64_t> counts(kN + 1, 0);
    for (double s : sample) ++counts[static_cast<std::size_t>(s)];
    const double norm = borel_tanner_pmf(k + 1, kN);
    std::vector<double> pmf(kN + 1, 0.0);
    for (std::size_t m = 1; m + k <= kN; ++m) {
      pmf[m] = borel_pmf(m) * borel_tanner_pmf(k, kN - m) / norm;
    }
    CAPTURE(k);
    CHECK(chi_square_gof(counts, pmf).pass);

    std::vector<double> reference(sample.size());
    for (auto& r : reference) {
      r = static_cast<double>(conditioned_borel_sample(k + 1, kN, rng).front());
    }
    CHECK(ks_two_sample(sample, reference).pass);
  }
}

TEST_CASE("remove uniform edges") {
  Rng rng(17);
  const auto tree = sample_uniform_tree(12, rng);
  const auto none = remove_uniform_edges(tree, 0, rng);
  CHECK(none.sizes == std::vector<std::size_t>{12});
  const auto all = remove_uniform_edges(tree, 11, rng);
  CHECK(all.sizes == std::vector<std::size_t>(12, 1));
  CHECK_THROWS_AS(remove_uniform_edges(tree, 12, rng), std::domain_error);

  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 2 + rng.below(40);
    const auto tr = sample_uniform_tree(n, rng);
    const std::size_t j = rng.below(n);
    const auto frag = remove_uniform_edges(tr, j, rng);
    CHECK(frag.parts.size() == j + 1);
    CHECK(std::set<EdgeId>(frag.removed_edges.begin(), frag.removed_edges.end()).size() == j);
    std::vector<bool> keep(tr.num_edges(), true);
    for (auto e : frag.removed_edges) keep[e] = false;
    const auto label = oracle::naive_labels(tr, keep);
    std::size_t covered = 0;
    for (std::size_t i = 0; i < frag.parts.size(); ++i) {
      CHECK(frag.parts[i].size() == frag.sizes[i]);
      covered += frag.sizes[i];
      for (auto v : frag.parts[i]) CHECK(label[v] == label[frag.parts[i].front()]);
    }
    CHECK(covered == n);
  }

  // n = 4, one removal: the larger side is 3 with probability 3/4.
  int threes = 0;
  constexpr int kDraws = 40000;
  for (int i = 0; i < kDraws; ++i) {
    const auto frag = remove_uniform_edges(sample_uniform_tree(4, rng), 1, rng);
    threes += std::max(frag.sizes[0], frag.sizes[1]) == 3;
  }
  const double sigma = std::sqrt(0.75 * 0.25 / kDraws);
  CHECK(std::abs(threes / double(kDraws) - 0.75) < 3.0 * sigma);
}

TEST_CASE("parts of size three have uniformly labeled shapes") {
  // A part of size three is a path; its center is equally likely to be the
  // smallest, middle or largest label.
  Rng rng(99);
  std::vector<std::uint64_t> position(3, 0);
  for (int t = 0; t < 30000; ++t) {
    const auto tree = sample_uniform_tree(9, rng);
    const auto frag = remove_uniform_edges(tree, 2, rng);
    std::vector<bool> keep(tree.num_edges(), true);
    for (auto e : frag.removed_edges) keep[e] = false;
    for (const auto& part : frag.parts) {
      if (part.size() != 3) continue;
      std::vector<Vertex> sorted = part;
      std::sort(sorted.begin(), sorted.end());
      for (std::size_t i = 0; i < 3; ++i) {
        int inner = 0;
        for (const auto& inc : tree.incident(sorted[i])) inner += keep[inc.edge];
        if (inner == 2) ++position[i];
      }
    }
  }
  CHECK(chi_square_gof(position, std::vector<double>(3, 1.0 / 3)).pass);
}

TEST_CASE("conditioned borel sample") {
  Rng rng(4);
  CHECK(conditioned_borel_sample(1, 7, rng) == std::vector<std::size_t>{7});
  CHECK(conditioned_borel_sample(5, 5, rng) == std::vector<std::size_t>(5, 1));
  CHECK_THROWS_AS(conditioned_borel_sample(6, 5, rng), std::domain_error);
  CHECK_THROWS_AS(conditioned_borel_sample(0, 5, rng), std::domain_error);

  const double exact13 =
      2.0 * borel_pmf(1) * borel_pmf(3) / borel_tanner_pmf(2, 4);
  CHECK(exact13 == doctest::Approx(0.75).epsilon(1e-12));
  int hits = 0;
  constexpr int kDraws = 50000;
  for (int i = 0; i < kDraws; ++i) {
    auto s = conditioned_borel_sample(2, 4, rng);
    std::sort(s.begin(), s.end());
    hits += s == std::vector<std::size_t>{1, 3};
  }
  CHECK(std::abs(hits / double(kDraws) - exact13) < 3.0 * std::sqrt(exact13 * (1 - exact13) / kDraws));
}

TEST_CASE("components_of") {
  const LabeledTree path(4, {{0, 1}, {1, 2}, {2, 3}});
  const std::vector<std::uint8_t> keep{1, 0, 1};
  const auto comps = components_of(path, keep);
  CHECK(comps.sizes.size() == 2);
  CHECK(comps.component_of[0] == comps.component_of[1]);
  CHECK(comps.component_of[2] == comps.component_of[3]);
  CHECK(comps.component_of[1] != comps.component_of[2]);
}
