#include "treefire/exact.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace treefire {

std::vector<LabeledTree> all_labeled_trees(unsigned n) {
  if (n < 1 || n > 6) throw std::domain_error("all_labeled_trees: n in [1,6]");
  std::vector<LabeledTree> trees;
  if (n == 1) {
    trees.emplace_back(1, std::vector<Edge>{});
    return trees;
  }
  std::uint64_t count = 1;
  for (unsigned i = 2; i < n; ++i) count *= n;
  std::vector<Vertex> code(n - 2);
  for (std::uint64_t index = 0; index < count; ++index) {
    std::uint64_t rest = index;
    for (auto it = code.rbegin(); it != code.rend(); ++it) {
      *it = static_cast<Vertex>(rest % n);
      rest /= n;
    }
    trees.push_back(prufer_decode(code));
  }
  return trees;
}

FireLaw exact_fire_law(const LabeledTree& tree) {
  const std::size_t m = tree.num_edges();
  FireLaw law;
  std::vector<EdgeId> order(m);
  std::iota(order.begin(), order.end(), EdgeId{0});
  std::vector<std::uint8_t> ignite(m);
  do {
    for (std::uint64_t pattern = 0; pattern < (std::uint64_t{1} << m);
         ++pattern) {
      unsigned ignitions = 0;
      for (std::size_t e = 0; e < m; ++e) {
        ignite[e] = (pattern >> e) & 1u;
        ignitions += ignite[e];
      }
      const FireOutcome outcome = run_fire_with(tree, order, ignite);
      auto& coefficients = law[outcome.edge_states];
      coefficients.resize(m + 1, 0);
      ++coefficients[ignitions];
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return law;
}

double evaluate_fire_law(const std::vector<std::uint64_t>& coefficients,
                         double q) {
  const std::size_t m = coefficients.size() - 1;
  double factorial = 1.0;
  for (std::size_t i = 2; i <= m; ++i) factorial *= static_cast<double>(i);
  double total = 0.0;
  for (std::size_t i = 0; i <= m; ++i) {
    total += static_cast<double>(coefficients[i]) *
             std::pow(q, static_cast<double>(i)) *
             std::pow(1.0 - q, static_cast<double>(m - i));
  }
  return total / factorial;
}

std::vector<std::uint64_t> exact_first_cut_counts(unsigned n) {
  if (n < 2) throw std::domain_error("exact_first_cut_counts: n >= 2");
  std::vector<std::uint64_t> counts(n, 0);
  for (const LabeledTree& tree : all_labeled_trees(n)) {
    for (EdgeId e = 0; e < tree.num_edges(); ++e) {
      std::vector<std::uint8_t> keep(tree.num_edges(), 1);
      keep[e] = 0;
      const Components comps = components_of(tree, keep);
      ++counts[std::max(comps.sizes[0], comps.sizes[1])];
    }
  }
  return counts;
}

std::vector<std::uint64_t> exact_spine_counts(unsigned n) {
  std::vector<std::uint64_t> counts(n, 0);
  for (const LabeledTree& tree : all_labeled_trees(n)) {
    for (Vertex u = 0; u < n; ++u) {
      for (Vertex v = 0; v < n; ++v) {
        ++counts[spinal_decompose(tree, u, v).length()];
      }
    }
  }
  return counts;
}

}  // namespace treefire
