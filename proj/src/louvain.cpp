#include <algorithm>
#include <numeric>
#include <limits>
#include <map>
#include <random>

#include "cohesia/error.hpp"
#include "cohesia/graph.hpp"

namespace cohesia::graph {

namespace {

constexpr double kMinImprovement = 1e-12;
constexpr int kMaxSweeps = 1000;
constexpr int kRestarts = 8;

// Symmetric weighted graph that may carry self-loops after aggregation.
// adjacency[i] excludes i itself; loops[i] is A_ii (internal weight counted from both ends).
struct LevelGraph {
  std::vector<std::vector<std::pair<std::uint32_t, double>>> adjacency;
  std::vector<double> loops;
  std::vector<double> degree;  // k_i = sum_j A_ij including the loop term
  double m2 = 0.0;             // sum of all A_ij

  std::size_t size() const { return adjacency.size(); }
};

LevelGraph from_weighted(const WeightedGraph& g) {
  LevelGraph lg;
  const std::size_t n = g.node_count();
  lg.adjacency.resize(n);
  lg.loops.assign(n, 0.0);
  lg.degree.assign(n, 0.0);
  for (NodeId u = 0; u < n; ++u) {
    for (const auto& nb : g.neighbors(u)) {
      lg.adjacency[u].emplace_back(nb.node, nb.weight);
      lg.degree[u] += nb.weight;
    }
    lg.m2 += lg.degree[u];
  }
  return lg;
}

double level_modularity(const LevelGraph& lg, const std::vector<std::uint32_t>& community) {
  if (lg.m2 == 0.0) return 0.0;
  std::vector<double> internal(lg.size(), 0.0);
  std::vector<double> total(lg.size(), 0.0);
  for (std::size_t i = 0; i < lg.size(); ++i) {
    total[community[i]] += lg.degree[i];
    internal[community[i]] += lg.loops[i];
    for (const auto& [j, w] : lg.adjacency[i])
      if (community[j] == community[i]) internal[community[i]] += w;
  }
  double q = 0.0;
  for (std::size_t c = 0; c < lg.size(); ++c) q += internal[c] / lg.m2 - (total[c] / lg.m2) * (total[c] / lg.m2);
  return q;
}

std::vector<std::uint32_t> shuffled_order(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  // Fisher-Yates with a plain modulo draw keeps the sequence identical across standard libraries.
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
  return order;
}

// Phase one: greedy local moves until a sweep no longer improves modularity.
bool local_moving(const LevelGraph& lg, std::vector<std::uint32_t>& community, std::mt19937_64& rng) {
  const std::size_t n = lg.size();
  std::vector<double> total(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) total[community[i]] += lg.degree[i];

  const auto order = shuffled_order(n, rng);
  std::vector<double> link_to(n, 0.0);
  std::vector<std::uint32_t> touched;
  bool improved_any = false;
  double q = level_modularity(lg, community);

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool moved = false;
    for (std::uint32_t i : order) {
      const std::uint32_t own = community[i];
      const double ki = lg.degree[i];
      touched.clear();
      for (const auto& [j, w] : lg.adjacency[i]) {
        const std::uint32_t c = community[j];
        if (link_to[c] == 0.0) touched.push_back(c);
        link_to[c] += w;
      }
      total[own] -= ki;

      // Gain of inserting i into c, scaled by m2/2: k_i,in(c) - tot(c) * k_i / m2.
      auto gain = [&](std::uint32_t c) { return link_to[c] - total[c] * ki / lg.m2; };
      std::uint32_t best = own;
      double best_gain = gain(own);
      for (std::uint32_t c : touched) {
        const double g = gain(c);
        if (g > best_gain || (g == best_gain && c < best)) {
          best = c;
          best_gain = g;
        }
      }
      total[best] += ki;
      community[i] = best;
      if (best != own) moved = true;
      for (std::uint32_t c : touched) link_to[c] = 0.0;
    }
    if (!moved) break;
    const double next_q = level_modularity(lg, community);
    const bool gained = next_q - q > kMinImprovement;
    if (gained) improved_any = true;
    q = next_q;
    if (!gained) break;
  }
  return improved_any;
}

// Relabels communities densely, ordered by their smallest member.
std::size_t renumber(std::vector<std::uint32_t>& community) {
  constexpr auto unset = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> remap(community.size(), unset);
  std::uint32_t next = 0;
  for (auto& c : community) {
    if (remap[c] == unset) remap[c] = next++;
    c = remap[c];
  }
  return next;
}

// Phase two: one node per community, loops carry the internal weight.
LevelGraph aggregate(const LevelGraph& lg, const std::vector<std::uint32_t>& community, std::size_t count) {
  LevelGraph next;
  next.adjacency.resize(count);
  next.loops.assign(count, 0.0);
  next.degree.assign(count, 0.0);
  next.m2 = lg.m2;
  std::vector<std::map<std::uint32_t, double>> links(count);
  for (std::size_t i = 0; i < lg.size(); ++i) {
    const auto ci = community[i];
    next.loops[ci] += lg.loops[i];
    next.degree[ci] += lg.degree[i];
    for (const auto& [j, w] : lg.adjacency[i]) {
      const auto cj = community[j];
      if (ci == cj) {
        next.loops[ci] += w;
      } else {
        links[ci][cj] += w;
      }
    }
  }
  for (std::size_t c = 0; c < count; ++c)
    for (const auto& [d, w] : links[c]) next.adjacency[c].emplace_back(d, w);
  return next;
}

CommunityPartition louvain_once(const WeightedGraph& g, std::uint64_t seed) {
  const std::size_t n = g.node_count();
  CommunityPartition result;
  result.assignment.resize(n);
  std::iota(result.assignment.begin(), result.assignment.end(), 0u);

  LevelGraph lg = from_weighted(g);
  if (lg.m2 > 0.0) {
    std::mt19937_64 rng(seed);
    while (true) {
      std::vector<std::uint32_t> community(lg.size());
      std::iota(community.begin(), community.end(), 0u);
      if (!local_moving(lg, community, rng)) break;
      const std::size_t count = renumber(community);
      for (auto& c : result.assignment) c = community[c];
      result.level_modularity.push_back(level_modularity(lg, community));
      if (count == lg.size()) break;
      lg = aggregate(lg, community, count);
    }
  }
  result.community_count = renumber(result.assignment);
  result.modularity = modularity(g, result.assignment);
  return result;
}

}  // namespace

CommunityPartition louvain(const WeightedGraph& g, std::uint64_t seed) {
  if (g.node_count() == 0) throw Error("graph_core", ErrorKind::EmptyGraph, "louvain needs at least one node");
  // A single visiting order can stall in a poor local optimum on small dense
  // layers, so a few orders drawn from the seed are tried and the best kept.
  std::mt19937_64 seeds(seed);
  CommunityPartition best = louvain_once(g, seeds());
  for (int r = 1; r < kRestarts; ++r) {
    auto candidate = louvain_once(g, seeds());
    if (candidate.modularity > best.modularity + kMinImprovement) best = std::move(candidate);
  }
  return best;
}

}  // namespace cohesia::graph
