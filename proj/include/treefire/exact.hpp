#pragma once

// Exhaustive small-n enumerations that produce exact reference laws.

#include <cstdint>
#include <map>
#include <vector>

#include "treefire/cayley.hpp"
#include "treefire/fire.hpp"

namespace treefire {

/// Every labeled tree on n vertices (1 <= n <= 6), in Pruefer-code order.
std::vector<LabeledTree> all_labeled_trees(unsigned n);

/// Terminal edge-state law of the fire dynamics on a fixed tree.
///
/// For each outcome, coefficients[i] counts the (order, coin pattern) pairs
/// with exactly i igniting coins, so that
///   P(outcome) = sum_i coefficients[i] q^i (1-q)^{m-i} / m!
/// where m is the number of edges. Coins of skipped edges are enumerated too.
using FireLaw = std::map<std::vector<EdgeState>, std::vector<std::uint64_t>>;
FireLaw exact_fire_law(const LabeledTree& tree);

/// Evaluates one outcome's probability at a given q.
double evaluate_fire_law(const std::vector<std::uint64_t>& coefficients,
                         double q);

/// Number of (tree, edge) pairs whose removal leaves a larger side of m,
/// indexed by m; total is n^{n-2} (n-1).
std::vector<std::uint64_t> exact_first_cut_counts(unsigned n);

/// Number of (tree, u, u2) triples with spine length k, indexed by k; total
/// is n^{n-2} n^2.
std::vector<std::uint64_t> exact_spine_counts(unsigned n);

}  // namespace treefire
