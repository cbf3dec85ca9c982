#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

namespace cohesia::graph {

using NodeId = std::uint32_t;

struct Neighbor {
  NodeId node = 0;
  double weight = 0.0;
};

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  double weight = 0.0;

  bool operator==(const Edge&) const = default;
};

/// Immutable weighted undirected simple graph over nodes 0..n-1 (CSR layout).
/// No self-loops, no parallel edges, all weights > 0.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  explicit WeightedGraph(std::size_t node_count);

  /// Throws InvalidGraph on self-loops, duplicates, out-of-range ids or
  /// non-positive weights.
  static WeightedGraph from_edges(std::size_t node_count, std::span<const Edge> edges);

  std::size_t node_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const { return adjacency_.size() / 2; }

  /// Neighbors sorted by node id.
  std::span<const Neighbor> neighbors(NodeId u) const;
  std::size_t degree(NodeId u) const { return neighbors(u).size(); }
  double strength(NodeId u) const;

  /// 0 when the edge is absent.
  double weight(NodeId u, NodeId v) const;
  bool has_edge(NodeId u, NodeId v) const { return weight(u, v) > 0.0; }

  /// Each edge once with u < v, sorted lexicographically.
  std::vector<Edge> edges() const;
  double total_weight() const;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> adjacency_;
};

/// Accumulates weights per unordered pair, then freezes into a WeightedGraph.
class GraphBuilder {
 public:
  explicit GraphBuilder(std::size_t node_count) : node_count_(node_count) {}

  void add_weight(NodeId u, NodeId v, double w);
  std::size_t node_count() const { return node_count_; }
  WeightedGraph build() const;

 private:
  std::size_t node_count_;
  std::map<std::pair<NodeId, NodeId>, double> weights_;
};

/// Maximal connected node sets, each sorted, ordered by smallest member.
std::vector<std::vector<NodeId>> connected_components(const WeightedGraph& g);

/// Barrat weighted clustering per node; degree < 2 gives 0.
std::vector<double> node_weighted_clustering(const WeightedGraph& g);

/// Mean Barrat coefficient over all nodes (0 for the empty graph).
double weighted_clustering(const WeightedGraph& g);

/// Mean hop-count distance over unordered pairs; unreachable pairs count as n.
/// Throws TooFewNodes when n < 2.
double average_path_length(const WeightedGraph& g);

/// Number of 4-cliques, weights ignored.
std::uint64_t count_k4(const WeightedGraph& g);

/// Nodes ordered by repeatedly removing a minimum-degree node.
std::vector<NodeId> degeneracy_order(const WeightedGraph& g);

struct CommunityPartition {
  std::vector<std::uint32_t> assignment;  // node -> community, dense from 0
  std::size_t community_count = 0;
  double modularity = 0.0;
  std::vector<double> level_modularity;  // after each aggregation level

  std::vector<std::vector<NodeId>> members() const;
};

/// Weighted Newman modularity of an assignment (0 when the graph has no edges).
double modularity(const WeightedGraph& g, std::span<const std::uint32_t> assignment);

/// Two-phase Louvain on edge weights. Node visiting order is a seed-keyed
/// shuffle; equal gains go to the smallest community id. Several orders are
/// drawn from the seed and the highest-modularity run is returned. Throws EmptyGraph.
CommunityPartition louvain(const WeightedGraph& g, std::uint64_t seed);

/// Single-threaded reference kernels, kept for cross-checking and benchmarks.
namespace serial {

double weighted_clustering(const WeightedGraph& g);
double average_path_length(const WeightedGraph& g);
std::uint64_t count_k4(const WeightedGraph& g);

}  // namespace serial

}  // namespace cohesia::graph
