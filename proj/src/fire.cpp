#include "treefire/fire.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace treefire {

namespace {

class DisjointSet {
 public:
  explicit DisjointSet(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::uint32_t{0});
  }

  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
  }

  std::size_t size_of(std::uint32_t x) { return size_[find(x)]; }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::size_t> size_;
};

void check_probability(double q) {
  if (!(q >= 0.0 && q < 1.0)) {
    throw std::domain_error("fire probability q must lie in [0,1)");
  }
}

}  // namespace

FireConfig FireConfig::from_alpha(std::size_t n, double alpha) {
  if (n == 0) throw std::domain_error("FireConfig: n must be >= 1");
  if (!(alpha > 0.0)) throw std::domain_error("FireConfig: alpha must be > 0");
  const double r = std::pow(static_cast<double>(n), -alpha);
  return {n, r / (1.0 + r), Rate::Exponent, alpha};
}

FireConfig FireConfig::from_scale(std::size_t n, double a) {
  if (n == 0) throw std::domain_error("FireConfig: n must be >= 1");
  if (!(a > 0.0)) throw std::domain_error("FireConfig: a must be > 0");
  const double r = a / std::sqrt(static_cast<double>(n));
  return {n, r / (1.0 + r), Rate::Scale, a};
}

FireConfig FireConfig::from_probability(std::size_t n, double q) {
  if (n == 0) throw std::domain_error("FireConfig: n must be >= 1");
  check_probability(q);
  return {n, q, Rate::Direct, q};
}

FireRandomness FireRandomness::draw(const LabeledTree& tree, Rng& rng) {
  FireRandomness r;
  r.order.resize(tree.num_edges());
  std::iota(r.order.begin(), r.order.end(), EdgeId{0});
  rng.shuffle(std::span(r.order));
  r.uniforms.resize(tree.num_edges());
  for (double& u : r.uniforms) u = rng.uniform();
  return r;
}

double FireOutcome::density() const {
  return static_cast<double>(fireproof_count) /
         static_cast<double>(fireproof_vertex.size());
}

double FireOutcome::largest_fraction() const {
  if (component_size.empty()) return 0.0;
  return static_cast<double>(
             *std::max_element(component_size.begin(), component_size.end())) /
         static_cast<double>(fireproof_vertex.size());
}

FireOutcome run_fire_with(const LabeledTree& tree,
                          std::span<const EdgeId> order,
                          std::span<const std::uint8_t> ignite) {
  const std::size_t m = tree.num_edges();
  if (order.size() != m || ignite.size() != m) {
    throw std::domain_error("run_fire: order and coins must cover every edge");
  }
  FireOutcome out;
  out.edge_states.assign(m, EdgeState::Inflammable);
  out.settled_at.assign(m, 0);
  std::vector<EdgeId> stack;
  for (std::uint32_t step = 0; step < m; ++step) {
    const EdgeId e = order[step];
    if (out.edge_states[e] != EdgeState::Inflammable) continue;
    out.settled_at[e] = step;
    if (!ignite[e]) {
      out.edge_states[e] = EdgeState::Fireproof;
      continue;
    }
    out.ignitions.push_back(e);
    out.edge_states[e] = EdgeState::Burnt;
    stack.assign(1, e);
    while (!stack.empty()) {
      const Edge& burning = tree.edge(stack.back());
      stack.pop_back();
      for (Vertex end : {burning.u, burning.v}) {
        for (const Incidence& inc : tree.incident(end)) {
          if (out.edge_states[inc.edge] == EdgeState::Inflammable) {
            out.edge_states[inc.edge] = EdgeState::Burnt;
            out.settled_at[inc.edge] = step;
            stack.push_back(inc.edge);
          }
        }
      }
    }
  }

  const std::size_t n = tree.size();
  out.fireproof_vertex.assign(n, 1);
  for (EdgeId e = 0; e < m; ++e) {
    if (out.edge_states[e] != EdgeState::Fireproof) {
      out.fireproof_vertex[tree.edge(e).u] = 0;
      out.fireproof_vertex[tree.edge(e).v] = 0;
    }
  }
  DisjointSet forest(n);
  for (EdgeId e = 0; e < m; ++e) {
    const Edge& edge = tree.edge(e);
    if (out.fireproof_vertex[edge.u] && out.fireproof_vertex[edge.v]) {
      forest.unite(edge.u, edge.v);
    }
  }
  out.component_of.assign(n, FireOutcome::kNoComponent);
  std::vector<std::uint32_t> index_of_root(n, FireOutcome::kNoComponent);
  for (Vertex v = 0; v < n; ++v) {
    if (!out.fireproof_vertex[v]) continue;
    ++out.fireproof_count;
    const std::uint32_t root = forest.find(v);
    if (index_of_root[root] == FireOutcome::kNoComponent) {
      index_of_root[root] = static_cast<std::uint32_t>(out.component_size.size());
      out.component_size.push_back(forest.size_of(root));
    }
    out.component_of[v] = index_of_root[root];
  }
  return out;
}

FireOutcome run_fire_with(const LabeledTree& tree, double q,
                          const FireRandomness& randomness) {
  check_probability(q);
  std::vector<std::uint8_t> ignite(randomness.uniforms.size());
  std::transform(randomness.uniforms.begin(), randomness.uniforms.end(),
                 ignite.begin(), [q](double u) { return u < q ? 1 : 0; });
  return run_fire_with(tree, randomness.order, ignite);
}

FireOutcome run_fire(const LabeledTree& tree, const FireConfig& config,
                     Rng& rng) {
  if (config.n != tree.size()) {
    throw std::domain_error("run_fire: config size does not match tree");
  }
  return run_fire_with(tree, config.q, FireRandomness::draw(tree, rng));
}

std::pair<FireOutcome, FireOutcome> run_fire_coupled(const LabeledTree& tree,
                                                     double q_low,
                                                     double q_high, Rng& rng) {
  check_probability(q_low);
  check_probability(q_high);
  if (q_low > q_high) {
    throw std::domain_error("run_fire_coupled: q_low must not exceed q_high");
  }
  const FireRandomness randomness = FireRandomness::draw(tree, rng);
  return {run_fire_with(tree, q_low, randomness),
          run_fire_with(tree, q_high, randomness)};
}

bool are_connected(const FireOutcome& outcome, Vertex u, Vertex u2) {
  const std::size_t n = outcome.fireproof_vertex.size();
  if (u >= n || u2 >= n) throw std::domain_error("are_connected: vertex out of range");
  return outcome.fireproof_vertex[u] && outcome.fireproof_vertex[u2] &&
         outcome.component_of[u] == outcome.component_of[u2];
}

std::vector<std::size_t> component_sizes(const FireOutcome& outcome) {
  std::vector<std::size_t> sizes = outcome.component_size;
  std::sort(sizes.begin(), sizes.end(), std::greater<>());
  return sizes;
}

}  // namespace treefire
