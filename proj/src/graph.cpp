#include "cohesia/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cohesia/error.hpp"

namespace cohesia::graph {

namespace {

constexpr std::string_view kModule = "graph_core";

void check_edge(std::size_t n, NodeId u, NodeId v, double w) {
  if (u >= n || v >= n)
    throw Error(kModule, ErrorKind::InvalidGraph,
                "edge (" + std::to_string(u) + "," + std::to_string(v) + ") out of range");
  if (u == v) throw Error(kModule, ErrorKind::InvalidGraph, "self-loop on node " + std::to_string(u));
  if (!(w > 0.0) || !std::isfinite(w))
    throw Error(kModule, ErrorKind::InvalidGraph, "edge weight must be finite and positive");
}

}  // namespace

WeightedGraph::WeightedGraph(std::size_t node_count) : offsets_(node_count + 1, 0) {}

WeightedGraph WeightedGraph::from_edges(std::size_t node_count, std::span<const Edge> edges) {
  WeightedGraph g(node_count);
  std::vector<std::size_t> degree(node_count, 0);
  for (const auto& e : edges) {
    check_edge(node_count, e.u, e.v, e.weight);
    ++degree[e.u];
    ++degree[e.v];
  }
  for (std::size_t i = 0; i < node_count; ++i) g.offsets_[i + 1] = g.offsets_[i] + degree[i];
  g.adjacency_.resize(g.offsets_.back());
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const auto& e : edges) {
    g.adjacency_[cursor[e.u]++] = {e.v, e.weight};
    g.adjacency_[cursor[e.v]++] = {e.u, e.weight};
  }
  for (std::size_t i = 0; i < node_count; ++i) {
    auto first = g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i]);
    auto last = g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i + 1]);
    std::sort(first, last, [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
    auto dup = std::adjacent_find(first, last, [](const Neighbor& a, const Neighbor& b) { return a.node == b.node; });
    if (dup != last)
      throw Error(kModule, ErrorKind::InvalidGraph,
                  "parallel edge (" + std::to_string(i) + "," + std::to_string(dup->node) + ")");
  }
  return g;
}

std::span<const Neighbor> WeightedGraph::neighbors(NodeId u) const {
  return {adjacency_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
}

double WeightedGraph::strength(NodeId u) const {
  double s = 0.0;
  for (const auto& nb : neighbors(u)) s += nb.weight;
  return s;
}

double WeightedGraph::weight(NodeId u, NodeId v) const {
  auto nbs = neighbors(u);
  auto it = std::lower_bound(nbs.begin(), nbs.end(), v, [](const Neighbor& a, NodeId id) { return a.node < id; });
  return (it != nbs.end() && it->node == v) ? it->weight : 0.0;
}

std::vector<Edge> WeightedGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (NodeId u = 0; u < node_count(); ++u)
    for (const auto& nb : neighbors(u))
      if (u < nb.node) out.push_back({u, nb.node, nb.weight});
  return out;
}

double WeightedGraph::total_weight() const {
  double total = 0.0;
  for (const auto& e : edges()) total += e.weight;
  return total;
}

void GraphBuilder::add_weight(NodeId u, NodeId v, double w) {
  check_edge(node_count_, u, v, w);
  if (u > v) std::swap(u, v);
  weights_[{u, v}] += w;
}

WeightedGraph GraphBuilder::build() const {
  std::vector<Edge> edges;
  edges.reserve(weights_.size());
  for (const auto& [key, w] : weights_) edges.push_back({key.first, key.second, w});
  return WeightedGraph::from_edges(node_count_, edges);
}

std::vector<std::vector<NodeId>> connected_components(const WeightedGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<NodeId>> components;
  std::vector<bool> seen(n, false);
  std::vector<NodeId> stack;
  for (NodeId start = 0; start < n; ++start) {
    if (seen[start]) continue;
    std::vector<NodeId> component;
    seen[start] = true;
    stack.push_back(start);
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      component.push_back(u);
      for (const auto& nb : g.neighbors(u)) {
        if (!seen[nb.node]) {
          seen[nb.node] = true;
          stack.push_back(nb.node);
        }
      }
    }
    std::sort(component.begin(), component.end());
    components.push_back(std::move(component));
  }
  // Starts are visited in increasing id, so components are already ordered by smallest member.
  return components;
}

std::vector<NodeId> degeneracy_order(const WeightedGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::size_t> degree(n);
  std::size_t max_degree = 0;
  for (NodeId u = 0; u < n; ++u) {
    degree[u] = g.degree(u);
    max_degree = std::max(max_degree, degree[u]);
  }
  // Bucket queue keyed by current degree; ties resolved by smallest id for determinism.
  std::vector<std::vector<NodeId>> buckets(max_degree + 1);
  for (NodeId u = n; u-- > 0;) buckets[degree[u]].push_back(u);
  std::vector<bool> removed(n, false);
  std::vector<NodeId> order;
  order.reserve(n);
  std::size_t current = 0;
  while (order.size() < n) {
    current = std::min(current, max_degree);
    while (current <= max_degree && buckets[current].empty()) ++current;
    NodeId u = buckets[current].back();
    buckets[current].pop_back();
    if (removed[u] || degree[u] != current) continue;
    removed[u] = true;
    order.push_back(u);
    for (const auto& nb : g.neighbors(u)) {
      if (removed[nb.node]) continue;
      --degree[nb.node];
      buckets[degree[nb.node]].push_back(nb.node);
      if (degree[nb.node] < current) current = degree[nb.node];
    }
  }
  return order;
}

std::vector<std::vector<NodeId>> CommunityPartition::members() const {
  std::vector<std::vector<NodeId>> out(community_count);
  for (NodeId u = 0; u < assignment.size(); ++u) out[assignment[u]].push_back(u);
  return out;
}

double modularity(const WeightedGraph& g, std::span<const std::uint32_t> assignment) {
  if (assignment.size() != g.node_count())
    throw Error(kModule, ErrorKind::InvalidArgument, "assignment size differs from node count");
  const double m2 = 2.0 * g.total_weight();
  if (m2 == 0.0) return 0.0;
  const std::size_t communities =
      assignment.empty() ? 0 : *std::max_element(assignment.begin(), assignment.end()) + 1;
  std::vector<double> internal(communities, 0.0);
  std::vector<double> total(communities, 0.0);
  for (NodeId u = 0; u < g.node_count(); ++u) {
    for (const auto& nb : g.neighbors(u)) {
      total[assignment[u]] += nb.weight;
      if (assignment[u] == assignment[nb.node]) internal[assignment[u]] += nb.weight;
    }
  }
  double q = 0.0;
  for (std::size_t c = 0; c < communities; ++c) q += internal[c] / m2 - (total[c] / m2) * (total[c] / m2);
  return q;
}

}  // namespace cohesia::graph
