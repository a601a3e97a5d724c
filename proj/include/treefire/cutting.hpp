#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "treefire/cayley.hpp"
#include "treefire/random.hpp"

namespace treefire {

/// Split sizes (larger, smaller).
using SplitSizes = std::pair<std::size_t, std::size_t>;

struct CutResult {
  std::uint64_t cuts = 0;
  std::optional<SplitSizes> first_split;
};

/// State of the isolation algorithm on one tree.
///
/// Edges are offered in scan order. An offered edge counts as a cut iff it
/// still lies in the retained forest, i.e. in a subtree holding at least one
/// target. After each cut the side without targets, if any, is discarded.
/// Offering edges in the order of a uniform permutation is the same as
/// removing a uniform edge of the current forest at every step.
class CutProcess {
 public:
  CutProcess(const LabeledTree& tree, std::span<const Vertex> targets);

  /// Returns true iff `e` was active and has been cut.
  bool offer(EdgeId e);

  bool finished() const { return retained_edges_ == 0; }
  std::uint64_t cuts() const { return cuts_; }
  const std::optional<SplitSizes>& first_split() const { return first_split_; }
  bool retained(Vertex v) const { return component_[v] != kDiscarded; }

 private:
  static constexpr std::uint32_t kDiscarded = 0xffffffffu;

  // Explores from `start` over live edges, appending to `queue`; one vertex
  // per call. Returns false once the side is exhausted.
  bool expand(std::vector<Vertex>& queue, std::size_t& head,
              std::uint32_t stamp);
  void relabel(std::span<const Vertex> vertices, std::uint32_t component);

  const LabeledTree* tree_;
  std::vector<std::uint8_t> is_target_;
  std::vector<std::uint8_t> removed_;
  std::vector<std::uint32_t> component_;
  std::vector<std::uint32_t> component_targets_;
  std::vector<std::size_t> component_size_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t next_stamp_ = 1;
  std::vector<Vertex> side_a_;
  std::vector<Vertex> side_b_;
  std::size_t retained_edges_ = 0;
  std::uint64_t cuts_ = 0;
  std::optional<SplitSizes> first_split_;
};

/// Runs the isolation algorithm to termination with a uniform edge order.
/// Targets are a multiset (duplicates allowed); it must be nonempty.
CutResult isolate(const LabeledTree& tree, std::span<const Vertex> targets,
                  Rng& rng);

/// Same, scanning the given edge order (a permutation of all edge ids).
CutResult isolate_in_order(const LabeledTree& tree,
                           std::span<const Vertex> targets,
                           std::span<const EdgeId> order);

/// Removes one uniform edge and reports the component sizes.
SplitSizes first_cut_split(const LabeledTree& tree, Rng& rng);

struct ExactMean {
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 1;
  double value() const {
    return static_cast<double>(numerator) / static_cast<double>(denominator);
  }
};

/// E[X(n,k)] by brute force over all trees, edge orders and target tuples.
/// Only 2 <= n <= 5 is accepted.
ExactMean exhaustive_isolation_mean(unsigned n, unsigned k);

}  // namespace treefire
