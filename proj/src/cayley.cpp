#include "treefire/cayley.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace treefire {

namespace {

constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();

}  // namespace

LabeledTree::LabeledTree(std::size_t n, std::vector<Edge> edges)
    : n_(n), edges_(std::move(edges)) {
  if (n == 0) throw std::domain_error("LabeledTree: n must be >= 1");
  if (edges_.size() != n - 1) {
    throw std::domain_error("LabeledTree: a tree on n vertices has n-1 edges");
  }
  if (n > std::numeric_limits<Vertex>::max()) {
    throw std::domain_error("LabeledTree: n exceeds vertex label range");
  }
  offsets_.assign(n + 1, 0);
  for (const Edge& e : edges_) {
    if (e.u >= n || e.v >= n) {
      throw std::domain_error("LabeledTree: edge endpoint out of range");
    }
    ++offsets_[e.u + 1];
    ++offsets_[e.v + 1];
  }
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
  incidence_.resize(2 * edges_.size());
  std::vector<std::uint32_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (EdgeId id = 0; id < edges_.size(); ++id) {
    const Edge& e = edges_[id];
    incidence_[cursor[e.u]++] = {e.v, id};
    incidence_[cursor[e.v]++] = {e.u, id};
  }
}

bool LabeledTree::is_spanning_tree() const {
  for (Vertex v = 0; v < n_; ++v) {
    for (const Incidence& inc : incident(v)) {
      const Edge& e = edges_[inc.edge];
      const bool consistent = (e.u == v && e.v == inc.neighbor) ||
                              (e.v == v && e.u == inc.neighbor);
      if (!consistent || inc.neighbor == v) return false;
    }
  }
  // n-1 edges and connected implies acyclic.
  std::vector<std::uint8_t> seen(n_, 0);
  std::vector<Vertex> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const Vertex v = stack.back();
    stack.pop_back();
    for (const Incidence& inc : incident(v)) {
      if (!seen[inc.neighbor]) {
        seen[inc.neighbor] = 1;
        ++reached;
        stack.push_back(inc.neighbor);
      }
    }
  }
  return reached == n_;
}

LabeledTree prufer_decode(std::span<const Vertex> sequence) {
  const std::size_t n = sequence.size() + 2;
  std::vector<std::uint32_t> degree(n, 1);
  for (Vertex x : sequence) {
    if (x >= n) throw std::domain_error("prufer_decode: label out of range");
    ++degree[x];
  }
  std::vector<Edge> edges;
  edges.reserve(n - 1);
  std::size_t ptr = 0;
  while (degree[ptr] != 1) ++ptr;
  Vertex leaf = static_cast<Vertex>(ptr);
  for (Vertex x : sequence) {
    edges.push_back({leaf, x});
    if (--degree[x] == 1 && x < ptr) {
      leaf = x;
    } else {
      ++ptr;
      while (degree[ptr] != 1) ++ptr;
      leaf = static_cast<Vertex>(ptr);
    }
  }
  edges.push_back({leaf, static_cast<Vertex>(n - 1)});
  return LabeledTree(n, std::move(edges));
}

std::vector<Vertex> prufer_encode(const LabeledTree& tree) {
  const std::size_t n = tree.size();
  if (n < 2) throw std::domain_error("prufer_encode: n must be >= 2");
  // Parents with respect to the root n-1.
  std::vector<Vertex> parent(n, 0);
  std::vector<std::uint8_t> seen(n, 0);
  std::vector<Vertex> stack{static_cast<Vertex>(n - 1)};
  seen[n - 1] = 1;
  while (!stack.empty()) {
    const Vertex v = stack.back();
    stack.pop_back();
    for (const Incidence& inc : tree.incident(v)) {
      if (!seen[inc.neighbor]) {
        seen[inc.neighbor] = 1;
        parent[inc.neighbor] = v;
        stack.push_back(inc.neighbor);
      }
    }
  }
  std::vector<std::size_t> degree(n);
  for (Vertex v = 0; v < n; ++v) degree[v] = tree.degree(v);
  std::vector<Vertex> code;
  code.reserve(n - 2);
  std::size_t ptr = 0;
  while (degree[ptr] != 1) ++ptr;
  Vertex leaf = static_cast<Vertex>(ptr);
  for (std::size_t i = 0; i + 2 < n; ++i) {
    const Vertex next = parent[leaf];
    code.push_back(next);
    if (--degree[next] == 1 && next < ptr) {
      leaf = next;
    } else {
      ++ptr;
      while (degree[ptr] != 1) ++ptr;
      leaf = static_cast<Vertex>(ptr);
    }
  }
  return code;
}

LabeledTree sample_uniform_tree(std::size_t n, Rng& rng) {
  if (n == 0) throw std::domain_error("sample_uniform_tree: n must be >= 1");
  if (n == 1) return LabeledTree(1, {});
  std::vector<Vertex> sequence(n - 2);
  for (Vertex& x : sequence) x = static_cast<Vertex>(rng.below(n));
  return prufer_decode(sequence);
}

void write_tree(std::ostream& out, const LabeledTree& tree) {
  out << tree.size() << '\n';
  for (const Edge& e : tree.edges()) out << e.u + 1 << ' ' << e.v + 1 << '\n';
}

LabeledTree read_tree(std::istream& in) {
  std::size_t n = 0;
  if (!(in >> n) || n == 0) {
    throw std::invalid_argument("read_tree: missing vertex count");
  }
  std::vector<Edge> edges(n - 1);
  for (Edge& e : edges) {
    std::uint64_t u = 0;
    std::uint64_t v = 0;
    if (!(in >> u >> v)) throw std::invalid_argument("read_tree: truncated");
    if (u < 1 || v < 1 || u > n || v > n) {
      throw std::invalid_argument("read_tree: label out of range");
    }
    e = {static_cast<Vertex>(u - 1), static_cast<Vertex>(v - 1)};
  }
  LabeledTree tree(n, std::move(edges));
  if (!tree.is_spanning_tree()) {
    throw std::invalid_argument("read_tree: edges do not form a tree");
  }
  return tree;
}

std::vector<std::size_t> SpinalDecomposition::bush_sizes() const {
  std::vector<std::size_t> sizes;
  sizes.reserve(bushes.size());
  for (const Bush& b : bushes) sizes.push_back(b.vertices.size());
  return sizes;
}

SpinalDecomposition spinal_decompose(const LabeledTree& tree, Vertex u,
                                     Vertex u2) {
  const std::size_t n = tree.size();
  if (u >= n || u2 >= n) {
    throw std::domain_error("spinal_decompose: vertex out of range");
  }
  std::vector<Vertex> parent(n, kUnset);
  parent[u] = u;
  std::vector<Vertex> queue{u};
  for (std::size_t head = 0; head < queue.size() && parent[u2] == kUnset;
       ++head) {
    const Vertex v = queue[head];
    for (const Incidence& inc : tree.incident(v)) {
      if (parent[inc.neighbor] == kUnset) {
        parent[inc.neighbor] = v;
        queue.push_back(inc.neighbor);
      }
    }
  }

  SpinalDecomposition result;
  for (Vertex v = u2; v != u; v = parent[v]) result.spine.push_back(v);
  result.spine.push_back(u);
  std::reverse(result.spine.begin(), result.spine.end());

  std::vector<std::uint32_t> bush_of(n, kUnset);
  for (std::uint32_t i = 0; i < result.spine.size(); ++i) {
    bush_of[result.spine[i]] = i;
  }
  result.bushes.resize(result.spine.size());
  for (std::uint32_t i = 0; i < result.spine.size(); ++i) {
    Bush& bush = result.bushes[i];
    bush.root = result.spine[i];
    bush.vertices.push_back(bush.root);
    for (std::size_t head = 0; head < bush.vertices.size(); ++head) {
      for (const Incidence& inc : tree.incident(bush.vertices[head])) {
        if (bush_of[inc.neighbor] == kUnset) {
          bush_of[inc.neighbor] = i;
          bush.vertices.push_back(inc.neighbor);
        }
      }
    }
    std::sort(bush.vertices.begin(), bush.vertices.end());
  }
  return result;
}

Components components_of(const LabeledTree& tree,
                         std::span<const std::uint8_t> keep) {
  const std::size_t n = tree.size();
  Components result;
  result.component_of.assign(n, kUnset);
  std::vector<Vertex> stack;
  for (Vertex start = 0; start < n; ++start) {
    if (result.component_of[start] != kUnset) continue;
    const auto id = static_cast<std::uint32_t>(result.sizes.size());
    result.component_of[start] = id;
    std::size_t size = 1;
    stack.push_back(start);
    while (!stack.empty()) {
      const Vertex v = stack.back();
      stack.pop_back();
      for (const Incidence& inc : tree.incident(v)) {
        if (keep[inc.edge] && result.component_of[inc.neighbor] == kUnset) {
          result.component_of[inc.neighbor] = id;
          ++size;
          stack.push_back(inc.neighbor);
        }
      }
    }
    result.sizes.push_back(size);
  }
  return result;
}

Fragmentation remove_uniform_edges(const LabeledTree& tree, std::size_t count,
                                   Rng& rng) {
  const std::size_t m = tree.num_edges();
  if (count > m) {
    throw std::domain_error("remove_uniform_edges: more removals than edges");
  }
  std::vector<EdgeId> ids(m);
  std::iota(ids.begin(), ids.end(), EdgeId{0});
  for (std::size_t i = 0; i < count; ++i) {
    std::swap(ids[i], ids[i + rng.below(m - i)]);
  }
  std::vector<std::uint8_t> keep(m, 1);
  for (std::size_t i = 0; i < count; ++i) keep[ids[i]] = 0;

  Components comps = components_of(tree, keep);
  const std::size_t k = comps.sizes.size();
  // Uniform relabeling of parts.
  std::vector<std::uint32_t> label(k);
  std::iota(label.begin(), label.end(), 0u);
  rng.shuffle(std::span(label));

  Fragmentation result;
  result.removed_edges.assign(ids.begin(), ids.begin() + count);
  std::sort(result.removed_edges.begin(), result.removed_edges.end());
  result.parts.resize(k);
  result.sizes.resize(k);
  for (std::size_t c = 0; c < k; ++c) {
    result.parts[label[c]].reserve(comps.sizes[c]);
    result.sizes[label[c]] = comps.sizes[c];
  }
  for (Vertex v = 0; v < tree.size(); ++v) {
    result.parts[label[comps.component_of[v]]].push_back(v);
  }
  return result;
}

std::vector<std::size_t> conditioned_borel_sample(std::size_t k, std::size_t n,
                                                  Rng& rng) {
  if (k == 0 || k > n) {
    throw std::domain_error("conditioned_borel_sample: need 1 <= k <= n");
  }
  const LabeledTree tree = sample_uniform_tree(n, rng);
  return remove_uniform_edges(tree, k - 1, rng).sizes;
}

}  // namespace treefire
