#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "treefire/cayley.hpp"
#include "treefire/random.hpp"

namespace treefire {

enum class EdgeState : std::uint8_t { Inflammable, Fireproof, Burnt };

/// Per-edge fire probability q for a tree on n vertices.
///
/// With firing rate r, each time an edge's clock rings it becomes fireproof
/// with probability 1/(1+r) and ignites with probability q = r/(1+r).
struct FireConfig {
  enum class Rate { Exponent, Scale, Direct };

  std::size_t n = 0;
  double q = 0.0;
  Rate rate = Rate::Direct;
  /// alpha for Rate::Exponent (r = n^{-alpha}), a for Rate::Scale
  /// (r = a / sqrt(n)), q itself for Rate::Direct.
  double parameter = 0.0;

  static FireConfig from_alpha(std::size_t n, double alpha);
  static FireConfig from_scale(std::size_t n, double a);
  static FireConfig from_probability(std::size_t n, double q);
};

/// Shared randomness for one run: edge processing order and one uniform per
/// edge. An edge ignites at its turn iff its uniform is below q.
struct FireRandomness {
  std::vector<EdgeId> order;
  std::vector<double> uniforms;

  static FireRandomness draw(const LabeledTree& tree, Rng& rng);
};

struct FireOutcome {
  std::vector<EdgeState> edge_states;
  std::vector<std::uint8_t> fireproof_vertex;
  /// Component index in the fireproof forest; kNoComponent for burnt vertices.
  std::vector<std::uint32_t> component_of;
  /// Sizes indexed by component index.
  std::vector<std::size_t> component_size;
  /// Edges where a fire started, in processing order.
  std::vector<EdgeId> ignitions;
  /// Processing step at which each edge reached its terminal state.
  std::vector<std::uint32_t> settled_at;
  std::size_t fireproof_count = 0;

  static constexpr std::uint32_t kNoComponent = 0xffffffffu;

  double density() const;
  double largest_fraction() const;
};

/// Terminal state of the fire dynamics with a fresh uniform order and coins.
FireOutcome run_fire(const LabeledTree& tree, const FireConfig& config,
                     Rng& rng);

/// Deterministic core: scans `order`; a Burnt edge is skipped, otherwise the
/// edge turns Fireproof unless ignite[e] is set, in which case its whole
/// inflammable cluster burns.
FireOutcome run_fire_with(const LabeledTree& tree,
                          std::span<const EdgeId> order,
                          std::span<const std::uint8_t> ignite);

FireOutcome run_fire_with(const LabeledTree& tree, double q,
                          const FireRandomness& randomness);

/// Two runs sharing order and uniforms; the burnt set at q_low is contained
/// in the burnt set at q_high.
std::pair<FireOutcome, FireOutcome> run_fire_coupled(const LabeledTree& tree,
                                                     double q_low,
                                                     double q_high, Rng& rng);

/// True iff both vertices are fireproof and in the same fireproof-forest
/// component. For u == u2 this is "u is fireproof".
bool are_connected(const FireOutcome& outcome, Vertex u, Vertex u2);

/// Fireproof-forest component sizes, largest first.
std::vector<std::size_t> component_sizes(const FireOutcome& outcome);

}  // namespace treefire
