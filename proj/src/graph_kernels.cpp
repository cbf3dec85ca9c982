// Per-node graph kernels. The default entry points parallelize the outer
// node loop with OpenMP; per-node partial results are folded in node order
// so floating-point sums do not depend on the thread count.

#include <algorithm>
#include <limits>
#include <numeric>

#include "cohesia/error.hpp"
#include "cohesia/graph.hpp"

namespace cohesia::graph {

namespace {

constexpr std::string_view kModule = "graph_core";

void require_two_nodes(const WeightedGraph& g) {
  if (g.node_count() < 2)
    throw Error(kModule, ErrorKind::TooFewNodes, "average path length needs n >= 2, got " +
                                                     std::to_string(g.node_count()));
}

// Hop distances from `source`; unreachable nodes keep `unreachable`.
std::uint64_t bfs_distance_sum(const WeightedGraph& g, NodeId source, std::vector<std::uint32_t>& dist,
                               std::vector<NodeId>& queue) {
  const auto n = static_cast<std::uint32_t>(g.node_count());
  constexpr auto unseen = std::numeric_limits<std::uint32_t>::max();
  std::fill(dist.begin(), dist.end(), unseen);
  queue.clear();
  dist[source] = 0;
  queue.push_back(source);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    NodeId u = queue[head];
    for (const auto& nb : g.neighbors(u)) {
      if (dist[nb.node] == unseen) {
        dist[nb.node] = dist[u] + 1;
        queue.push_back(nb.node);
      }
    }
  }
  std::uint64_t sum = 0;
  for (NodeId v = 0; v < n; ++v) {
    if (v == source) continue;
    sum += dist[v] == unseen ? n : dist[v];
  }
  return sum;
}

// Out-neighbourhoods under a rank order: each edge points to the higher-ranked end.
std::vector<std::vector<NodeId>> oriented_adjacency(const WeightedGraph& g, const std::vector<NodeId>& order) {
  const std::size_t n = g.node_count();
  std::vector<std::size_t> rank(n);
  for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = i;
  std::vector<std::vector<NodeId>> out(n);
  for (NodeId u = 0; u < n; ++u) {
    for (const auto& nb : g.neighbors(u))
      if (rank[nb.node] > rank[u]) out[u].push_back(nb.node);
  }
  return out;
}

std::size_t intersect_into(const std::vector<NodeId>& a, const std::vector<NodeId>& b, std::vector<NodeId>& out) {
  out.clear();
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out.size();
}

std::size_t intersect_count(const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
  std::size_t count = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

}  // namespace

std::vector<double> node_weighted_clustering(const WeightedGraph& g) {
  const auto n = static_cast<std::int64_t>(g.node_count());
  std::vector<double> wc(static_cast<std::size_t>(n), 0.0);
#pragma omp parallel
  {
    // Weight of the edge from the current centre to each node; 0 = not adjacent.
    std::vector<double> to_centre(static_cast<std::size_t>(n), 0.0);
#pragma omp for schedule(dynamic, 16)
    for (std::int64_t j = 0; j < n; ++j) {
      auto centre = static_cast<NodeId>(j);
      auto nbs = g.neighbors(centre);
      if (nbs.size() < 2) continue;
      double strength = 0.0;
      for (const auto& nb : nbs) {
        to_centre[nb.node] = nb.weight;
        strength += nb.weight;
      }
      // Each closed unordered pair {h, k} stands for the two ordered terms (w_jh + w_jk)/2.
      double sum = 0.0;
      for (const auto& h : nbs) {
        for (const auto& k : g.neighbors(h.node)) {
          if (k.node > h.node && to_centre[k.node] > 0.0) sum += h.weight + to_centre[k.node];
        }
      }
      for (const auto& nb : nbs) to_centre[nb.node] = 0.0;
      wc[static_cast<std::size_t>(j)] = sum / (strength * static_cast<double>(nbs.size() - 1));
    }
  }
  return wc;
}

double weighted_clustering(const WeightedGraph& g) {
  if (g.node_count() == 0) return 0.0;
  auto wc = node_weighted_clustering(g);
  return std::accumulate(wc.begin(), wc.end(), 0.0) / static_cast<double>(wc.size());
}

double average_path_length(const WeightedGraph& g) {
  require_two_nodes(g);
  const auto n = static_cast<std::int64_t>(g.node_count());
  std::uint64_t total = 0;
#pragma omp parallel reduction(+ : total)
  {
    std::vector<std::uint32_t> dist(static_cast<std::size_t>(n));
    std::vector<NodeId> queue;
    queue.reserve(static_cast<std::size_t>(n));
#pragma omp for schedule(dynamic, 8)
    for (std::int64_t s = 0; s < n; ++s) total += bfs_distance_sum(g, static_cast<NodeId>(s), dist, queue);
  }
  const double nd = static_cast<double>(n);
  // Every unordered pair was counted from both ends.
  return static_cast<double>(total) / (nd * (nd - 1.0));
}

std::uint64_t count_k4(const WeightedGraph& g) {
  const auto out = oriented_adjacency(g, degeneracy_order(g));
  const auto n = static_cast<std::int64_t>(g.node_count());
  std::uint64_t count = 0;
#pragma omp parallel reduction(+ : count)
  {
    std::vector<NodeId> common;
#pragma omp for schedule(dynamic, 8)
    for (std::int64_t u = 0; u < n; ++u) {
      const auto& out_u = out[static_cast<std::size_t>(u)];
      for (NodeId v : out_u) {
        if (intersect_into(out_u, out[v], common) < 2) continue;
        for (NodeId w : common) count += intersect_count(common, out[w]);
      }
    }
  }
  return count;
}

namespace serial {

double weighted_clustering(const WeightedGraph& g) {
  const std::size_t n = g.node_count();
  if (n == 0) return 0.0;
  double total = 0.0;
  for (NodeId j = 0; j < n; ++j) {
    auto nbs = g.neighbors(j);
    const std::size_t k = nbs.size();
    if (k < 2) continue;
    double sum = 0.0;
    for (const auto& h : nbs)
      for (const auto& l : nbs)
        if (h.node != l.node && g.has_edge(h.node, l.node)) sum += 0.5 * (h.weight + l.weight);
    total += sum / (g.strength(j) * static_cast<double>(k - 1));
  }
  return total / static_cast<double>(n);
}

double average_path_length(const WeightedGraph& g) {
  require_two_nodes(g);
  const std::size_t n = g.node_count();
  std::uint64_t total = 0;
  std::vector<std::uint32_t> dist(n);
  std::vector<NodeId> queue;
  for (NodeId s = 0; s < n; ++s) total += bfs_distance_sum(g, s, dist, queue);
  const double nd = static_cast<double>(n);
  return static_cast<double>(total) / (nd * (nd - 1.0));
}

std::uint64_t count_k4(const WeightedGraph& g) {
  // Id-ordered enumeration: a < b < c < d with all six edges present.
  const std::size_t n = g.node_count();
  std::uint64_t count = 0;
  std::vector<NodeId> higher;
  for (NodeId a = 0; a < n; ++a) {
    higher.clear();
    for (const auto& nb : g.neighbors(a))
      if (nb.node > a) higher.push_back(nb.node);
    for (std::size_t i = 0; i < higher.size(); ++i)
      for (std::size_t j = i + 1; j < higher.size(); ++j) {
        if (!g.has_edge(higher[i], higher[j])) continue;
        for (std::size_t k = j + 1; k < higher.size(); ++k)
          if (g.has_edge(higher[i], higher[k]) && g.has_edge(higher[j], higher[k])) ++count;
      }
  }
  return count;
}

}  // namespace serial

}  // namespace cohesia::graph
