#include "treefire/cutting.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace treefire {

CutProcess::CutProcess(const LabeledTree& tree,
                       std::span<const Vertex> targets)
    : tree_(&tree),
      is_target_(tree.size(), 0),
      removed_(tree.num_edges(), 0),
      component_(tree.size(), 0),
      component_size_{tree.size()},
      stamp_(tree.size(), 0),
      retained_edges_(tree.num_edges()) {
  if (targets.empty()) throw std::domain_error("isolate: empty target set");
  std::uint32_t distinct = 0;
  for (Vertex t : targets) {
    if (t >= tree.size()) throw std::domain_error("isolate: target out of range");
    if (!is_target_[t]) ++distinct;
    is_target_[t] = 1;
  }
  component_targets_.push_back(distinct);
}

bool CutProcess::expand(std::vector<Vertex>& queue, std::size_t& head,
                        std::uint32_t stamp) {
  if (head == queue.size()) return false;
  const Vertex v = queue[head++];
  for (const Incidence& inc : tree_->incident(v)) {
    if (!removed_[inc.edge] && stamp_[inc.neighbor] != stamp) {
      stamp_[inc.neighbor] = stamp;
      queue.push_back(inc.neighbor);
    }
  }
  return head < queue.size();
}

void CutProcess::relabel(std::span<const Vertex> vertices,
                         std::uint32_t component) {
  for (Vertex v : vertices) component_[v] = component;
}

bool CutProcess::offer(EdgeId e) {
  const Edge& edge = tree_->edge(e);
  if (removed_[e] || component_[edge.u] == kDiscarded) return false;
  removed_[e] = 1;
  --retained_edges_;
  ++cuts_;

  // Explore both sides in lockstep; stop when the smaller one is exhausted.
  const std::uint32_t stamp_a = next_stamp_++;
  const std::uint32_t stamp_b = next_stamp_++;
  side_a_.assign(1, edge.u);
  side_b_.assign(1, edge.v);
  stamp_[edge.u] = stamp_a;
  stamp_[edge.v] = stamp_b;
  std::size_t head_a = 0;
  std::size_t head_b = 0;
  bool small_is_a = false;
  while (true) {
    if (!expand(side_a_, head_a, stamp_a)) {
      small_is_a = true;
      break;
    }
    if (!expand(side_b_, head_b, stamp_b)) break;
  }

  std::vector<Vertex>& small = small_is_a ? side_a_ : side_b_;
  std::vector<Vertex>& large = small_is_a ? side_b_ : side_a_;
  std::size_t& large_head = small_is_a ? head_b : head_a;
  const std::uint32_t large_stamp = small_is_a ? stamp_b : stamp_a;

  const std::uint32_t c = component_[edge.u];
  std::uint32_t small_targets = 0;
  for (Vertex v : small) small_targets += is_target_[v];
  const std::uint32_t large_targets = component_targets_[c] - small_targets;
  const std::size_t small_size = small.size();
  const std::size_t large_size = component_size_[c] - small_size;

  if (!first_split_) first_split_ = SplitSizes{large_size, small_size};

  if (small_targets == 0) {
    relabel(small, kDiscarded);
    retained_edges_ -= small_size - 1;
    component_size_[c] = large_size;
  } else if (large_targets == 0) {
    while (expand(large, large_head, large_stamp)) {
    }
    relabel(large, kDiscarded);
    retained_edges_ -= large_size - 1;
    component_size_[c] = small_size;
  } else {
    const auto fresh = static_cast<std::uint32_t>(component_targets_.size());
    component_targets_.push_back(small_targets);
    component_size_.push_back(small_size);
    component_targets_[c] = large_targets;
    component_size_[c] = large_size;
    relabel(small, fresh);
  }
  return true;
}

CutResult isolate(const LabeledTree& tree, std::span<const Vertex> targets,
                  Rng& rng) {
  CutProcess process(tree, targets);
  // Lazy Fisher-Yates: the scanned prefix is a prefix of a uniform
  // permutation, so stopping early does not bias the order.
  std::vector<EdgeId> order(tree.num_edges());
  std::iota(order.begin(), order.end(), EdgeId{0});
  for (std::size_t i = 0; i < order.size() && !process.finished(); ++i) {
    std::swap(order[i], order[i + rng.below(order.size() - i)]);
    process.offer(order[i]);
  }
  return {process.cuts(), process.first_split()};
}

CutResult isolate_in_order(const LabeledTree& tree,
                           std::span<const Vertex> targets,
                           std::span<const EdgeId> order) {
  if (order.size() != tree.num_edges()) {
    throw std::domain_error("isolate_in_order: order must list every edge");
  }
  CutProcess process(tree, targets);
  for (EdgeId e : order) {
    if (process.finished()) break;
    process.offer(e);
  }
  return {process.cuts(), process.first_split()};
}

SplitSizes first_cut_split(const LabeledTree& tree, Rng& rng) {
  if (tree.size() < 2) throw std::domain_error("first_cut_split: n must be >= 2");
  const auto cut = static_cast<EdgeId>(rng.below(tree.num_edges()));
  const Vertex start = tree.edge(cut).u;
  std::vector<std::uint8_t> seen(tree.size(), 0);
  std::vector<Vertex> stack{start};
  seen[start] = 1;
  std::size_t side = 1;
  while (!stack.empty()) {
    const Vertex v = stack.back();
    stack.pop_back();
    for (const Incidence& inc : tree.incident(v)) {
      if (inc.edge != cut && !seen[inc.neighbor]) {
        seen[inc.neighbor] = 1;
        ++side;
        stack.push_back(inc.neighbor);
      }
    }
  }
  const std::size_t other = tree.size() - side;
  return {std::max(side, other), std::min(side, other)};
}

namespace {

// Cut count for the target set `mask`, recomputing components from scratch
// after every removal.
std::uint64_t naive_isolation_cuts(const LabeledTree& tree,
                                   std::span<const EdgeId> order,
                                   unsigned mask) {
  const std::size_t n = tree.size();
  std::vector<std::uint8_t> alive(n, 1);
  std::vector<std::uint8_t> removed(tree.num_edges(), 0);
  auto component = [&](Vertex start) {
    std::vector<Vertex> seen{start};
    for (std::size_t i = 0; i < seen.size(); ++i) {
      for (const Incidence& inc : tree.incident(seen[i])) {
        if (!removed[inc.edge] &&
            std::find(seen.begin(), seen.end(), inc.neighbor) == seen.end()) {
          seen.push_back(inc.neighbor);
        }
      }
    }
    return seen;
  };
  std::uint64_t cuts = 0;
  for (EdgeId e : order) {
    const Edge& edge = tree.edge(e);
    if (!alive[edge.u] || !alive[edge.v]) continue;
    removed[e] = 1;
    ++cuts;
    for (Vertex end : {edge.u, edge.v}) {
      const auto side = component(end);
      const bool has_target = std::any_of(
          side.begin(), side.end(), [mask](Vertex v) { return (mask >> v) & 1u; });
      if (!has_target) {
        for (Vertex v : side) alive[v] = 0;
      }
    }
  }
  return cuts;
}

}  // namespace

ExactMean exhaustive_isolation_mean(unsigned n, unsigned k) {
  if (n < 2 || n > 5) {
    throw std::domain_error("exhaustive_isolation_mean: n must lie in [2,5]");
  }
  if (k < 1 || k > n) {
    throw std::domain_error("exhaustive_isolation_mean: k must lie in [1,n]");
  }
  std::uint64_t tree_count = 1;
  for (unsigned i = 2; i < n; ++i) tree_count *= n;
  std::uint64_t tuple_count = 1;
  for (unsigned i = 0; i < k; ++i) tuple_count *= n;

  ExactMean result{0, 0};
  std::vector<Vertex> code(n - 2);
  std::vector<Vertex> tuple(k);
  for (std::uint64_t index = 0; index < tree_count; ++index) {
    std::uint64_t rest = index;
    for (Vertex& x : code) {
      x = static_cast<Vertex>(rest % n);
      rest /= n;
    }
    const LabeledTree tree = prufer_decode(code);
    std::vector<EdgeId> order(n - 1);
    std::iota(order.begin(), order.end(), EdgeId{0});
    do {
      std::vector<std::int64_t> cache(1u << n, -1);
      for (std::uint64_t t = 0; t < tuple_count; ++t) {
        std::uint64_t r = t;
        unsigned mask = 0;
        for (unsigned i = 0; i < k; ++i) {
          mask |= 1u << (r % n);
          r /= n;
        }
        if (cache[mask] < 0) {
          cache[mask] =
              static_cast<std::int64_t>(naive_isolation_cuts(tree, order, mask));
        }
        result.numerator += static_cast<std::uint64_t>(cache[mask]);
        ++result.denominator;
      }
    } while (std::next_permutation(order.begin(), order.end()));
  }
  const std::uint64_t g = std::gcd(result.numerator, result.denominator);
  result.numerator /= g;
  result.denominator /= g;
  return result;
}

}  // namespace treefire
