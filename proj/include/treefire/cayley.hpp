#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "treefire/random.hpp"

namespace treefire {

/// Vertices are 0-based in the library (labels 1..n appear only in text
/// formats).
using Vertex = std::uint32_t;
using EdgeId = std::uint32_t;

struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Incidence {
  Vertex neighbor = 0;
  EdgeId edge = 0;
};

/// Labeled tree stored as a flat edge list plus a CSR incidence index.
class LabeledTree {
 public:
  /// Requires exactly n-1 edges with endpoints in [0, n). Acyclicity is not
  /// re-checked here; see is_spanning_tree().
  LabeledTree(std::size_t n, std::vector<Edge> edges);

  std::size_t size() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }
  std::span<const Incidence> incident(Vertex v) const {
    return {incidence_.data() + offsets_[v], incidence_.data() + offsets_[v + 1]};
  }
  std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }

  /// Full check: connected, acyclic, adjacency consistent with edges.
  bool is_spanning_tree() const;

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
  std::vector<std::uint32_t> offsets_;
  std::vector<Incidence> incidence_;
};

/// Decodes a Pruefer sequence of length n-2 (entries in [0, n)), n >= 2.
LabeledTree prufer_decode(std::span<const Vertex> sequence);
std::vector<Vertex> prufer_encode(const LabeledTree& tree);

/// Uniform over the n^{n-2} labeled trees on n vertices.
LabeledTree sample_uniform_tree(std::size_t n, Rng& rng);

/// Text format: a line with n, then n-1 lines "u v" with 1-based labels.
void write_tree(std::ostream& out, const LabeledTree& tree);
LabeledTree read_tree(std::istream& in);

struct Bush {
  Vertex root = 0;
  std::vector<Vertex> vertices;
};

/// Spine from u to u2 (spine.front() == u, spine.back() == u2) and the
/// bushes left after deleting the spine edges, bushes[i] rooted at spine[i].
struct SpinalDecomposition {
  std::vector<Vertex> spine;
  std::vector<Bush> bushes;

  std::size_t length() const { return spine.size() - 1; }
  std::vector<std::size_t> bush_sizes() const;
};

SpinalDecomposition spinal_decompose(const LabeledTree& tree, Vertex u,
                                     Vertex u2);

/// Result of deleting uniformly chosen edges. Part order is uniformly
/// permuted so the coordinates are exchangeable.
struct Fragmentation {
  std::vector<EdgeId> removed_edges;
  std::vector<std::vector<Vertex>> parts;
  std::vector<std::size_t> sizes;
};

Fragmentation remove_uniform_edges(const LabeledTree& tree, std::size_t count,
                                   Rng& rng);

/// k i.i.d. Borel(1) variables conditioned to sum to n, drawn exactly as the
/// part sizes after deleting k-1 uniform edges of a uniform tree on n vertices.
std::vector<std::size_t> conditioned_borel_sample(std::size_t k, std::size_t n,
                                                  Rng& rng);

/// Connected component sizes of `tree` restricted to edges with keep[e] set,
/// together with the component index of every vertex.
struct Components {
  std::vector<std::uint32_t> component_of;
  std::vector<std::size_t> sizes;
};
Components components_of(const LabeledTree& tree,
                         std::span<const std::uint8_t> keep);

}  // namespace treefire
