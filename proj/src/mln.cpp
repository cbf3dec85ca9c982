#include "cohesia/mln.hpp"

#include <cmath>

#include "cohesia/error.hpp"
#include "cohesia/stats.hpp"

namespace cohesia {

namespace {

constexpr std::string_view kModule = "mln";

const std::vector<double>& embedding_for(const LayerEmbeddings& table, const std::string& entity, std::size_t layer) {
  auto it = table.find(entity);
  if (it == table.end())
    throw Error(kModule, ErrorKind::MissingEmbedding,
                "no embedding for '" + entity + "' in layer " + std::to_string(layer + 1));
  return it->second;
}

}  // namespace

std::size_t Metagraph::metanode_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.concepts.size();
  return n;
}

MultilayerNetwork build_interlayer(std::vector<LayerNetwork> layers, std::span<const LayerEmbeddings> embeddings) {
  if (embeddings.size() != layers.size())
    throw Error(kModule, ErrorKind::MissingEmbedding,
                std::to_string(layers.size()) + " layers but " + std::to_string(embeddings.size()) + " embedding tables");
  MultilayerNetwork mln;
  mln.layers = std::move(layers);
  const std::size_t n = mln.layers.size();
  mln.interlayer.resize(n > 0 ? n - 1 : 0);
  for (std::size_t a = 0; a + 1 < n; ++a) {
    const auto& lower = mln.layers[a];
    const auto& upper = mln.layers[a + 1];
    for (graph::NodeId x = 0; x < lower.entities.size(); ++x) {
      const auto& vx = embedding_for(embeddings[a], lower.entities[x], a);
      for (graph::NodeId y = 0; y < upper.entities.size(); ++y) {
        const auto& vy = embedding_for(embeddings[a + 1], upper.entities[y], a + 1);
        const double c = cosine_similarity(vx, vy);
        if (c >= kInterlayerCutoff) mln.interlayer[a].push_back({x, y, c});
      }
    }
  }
  return mln;
}

double intralayer_metaedge_weight(double weight_sum, std::size_t edge_count) {
  if (edge_count == 0 || weight_sum <= 1.0) return 0.0;
  return std::log(weight_sum) * static_cast<double>(edge_count);
}

Metagraph condense(const MultilayerNetwork& mln, std::uint64_t seed) {
  const auto n = static_cast<std::int64_t>(mln.layers.size());
  for (const auto& layer : mln.layers)
    if (layer.graph.node_count() == 0)
      throw Error(kModule, ErrorKind::EmptyLayer, "layer for section " + std::to_string(layer.section_index) + " is empty");

  std::vector<graph::CommunityPartition> partitions(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < n; ++i)
    partitions[static_cast<std::size_t>(i)] = graph::louvain(mln.layers[static_cast<std::size_t>(i)].graph, seed);

  Metagraph meta;
  for (std::size_t i = 0; i < mln.layers.size(); ++i) {
    const auto& layer = mln.layers[i];
    const auto& part = partitions[i];
    MetaLayer ml;
    ml.section_index = layer.section_index;
    auto members = part.members();
    for (std::uint32_t c = 0; c < members.size(); ++c) {
      Concept concept_node{c, {}};
      for (auto node : members[c]) concept_node.members.push_back(layer.entities[node]);
      ml.concepts.push_back(std::move(concept_node));
    }
    meta.layers.push_back(std::move(ml));

    std::map<std::pair<std::uint32_t, std::uint32_t>, std::pair<double, std::size_t>> between;
    for (const auto& e : layer.graph.edges()) {
      auto r = part.assignment[e.u];
      auto s = part.assignment[e.v];
      if (r == s) continue;
      auto& acc = between[std::minmax(r, s)];
      acc.first += e.weight;
      acc.second += 1;
    }
    for (const auto& [key, acc] : between) {
      const double w = intralayer_metaedge_weight(acc.first, acc.second);
      if (w > 0.0) meta.intralayer.push_back({i, key.first, key.second, w, acc.second, acc.first});
    }
  }

  for (std::size_t a = 0; a < mln.interlayer.size(); ++a) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, double> sums;
    for (const auto& e : mln.interlayer[a])
      sums[{partitions[a].assignment[e.from], partitions[a + 1].assignment[e.to]}] += e.weight;
    for (const auto& [key, w] : sums)
      if (w > 0.0) meta.interlayer.push_back({a, key.first, key.second, w});
  }
  return meta;
}

std::pair<Metagraph, PruningThresholds> prune(const Metagraph& meta) {
  Metagraph out = meta;
  PruningThresholds thresholds;

  if (!meta.intralayer.empty()) {
    std::vector<double> w;
    for (const auto& e : meta.intralayer) w.push_back(e.weight);
    const double fence = stats::lower_fence(w).lambda;
    thresholds.intralayer_lambda = fence;
    out.intralayer.clear();
    for (const auto& e : meta.intralayer) {
      if (e.weight < fence) {
        out.pruned.push_back({MetaedgeKind::intralayer, e.layer, e.r, e.layer, e.s, e.weight, fence});
      } else {
        out.intralayer.push_back(e);
      }
    }
  }
  if (!meta.interlayer.empty()) {
    std::vector<double> w;
    for (const auto& e : meta.interlayer) w.push_back(e.weight);
    const double fence = stats::lower_fence(w).lambda;
    thresholds.interlayer_lambda = fence;
    out.interlayer.clear();
    for (const auto& e : meta.interlayer) {
      if (e.weight < fence) {
        out.pruned.push_back({MetaedgeKind::interlayer, e.layer, e.r, e.layer + 1, e.s, e.weight, fence});
      } else {
        out.interlayer.push_back(e);
      }
    }
  }
  return {std::move(out), thresholds};
}

graph::WeightedGraph flatten(const Metagraph& meta) {
  std::vector<std::size_t> offset(meta.layers.size() + 1, 0);
  for (std::size_t i = 0; i < meta.layers.size(); ++i) offset[i + 1] = offset[i] + meta.layers[i].concepts.size();
  auto node = [&](std::size_t layer, std::uint32_t c) { return static_cast<graph::NodeId>(offset[layer] + c); };
  graph::GraphBuilder builder(offset.back());
  for (const auto& e : meta.intralayer) builder.add_weight(node(e.layer, e.r), node(e.layer, e.s), 1.0);
  for (const auto& e : meta.interlayer) builder.add_weight(node(e.layer, e.r), node(e.layer + 1, e.s), 1.0);
  // Presence only: duplicate pairs cannot occur, but accumulated weights are irrelevant anyway.
  return builder.build();
}

nlohmann::json to_json(const Metagraph& meta) {
  using nlohmann::json;
  json layers = json::array();
  for (std::size_t i = 0; i < meta.layers.size(); ++i) {
    json concepts = json::array();
    for (const auto& c : meta.layers[i].concepts) concepts.push_back({{"id", c.id}, {"members", c.members}});
    layers.push_back({{"layer", i + 1}, {"section", meta.layers[i].section_index}, {"concepts", concepts}});
  }
  json intra = json::array();
  for (const auto& e : meta.intralayer)
    intra.push_back({{"layer", e.layer + 1}, {"r", e.r}, {"s", e.s}, {"weight", e.weight},
                     {"edge_count", e.edge_count}, {"weight_sum", e.weight_sum}});
  json inter = json::array();
  for (const auto& e : meta.interlayer)
    inter.push_back({{"layer", e.layer + 1}, {"r", e.r}, {"target_layer", e.layer + 2}, {"s", e.s}, {"weight", e.weight}});
  json pruned = json::array();
  for (const auto& p : meta.pruned)
    pruned.push_back({{"kind", p.kind == MetaedgeKind::intralayer ? "intralayer" : "interlayer"},
                      {"layer", p.layer + 1},
                      {"r", p.r},
                      {"other_layer", p.other_layer + 1},
                      {"s", p.s},
                      {"weight", p.weight},
                      {"fence", p.fence}});
  return {{"layers", layers}, {"intralayer", intra}, {"interlayer", inter}, {"pruned", pruned}};
}

Metagraph metagraph_from_json(const nlohmann::json& j) {
  Metagraph meta;
  try {
    for (const auto& l : j.at("layers")) {
      MetaLayer ml;
      ml.section_index = l.value("section", static_cast<std::size_t>(meta.layers.size() + 1));
      for (const auto& c : l.at("concepts"))
        ml.concepts.push_back({c.at("id").get<std::uint32_t>(), c.value("members", std::vector<std::string>{})});
      for (std::uint32_t k = 0; k < ml.concepts.size(); ++k)
        if (ml.concepts[k].id != k) throw Error(kModule, ErrorKind::ParseError, "concept ids must be dense from 0");
      meta.layers.push_back(std::move(ml));
    }
    auto layer_index = [&](const nlohmann::json& e, const char* key) {
      auto v = e.at(key).get<std::size_t>();
      if (v == 0 || v > meta.layers.size())
        throw Error(kModule, ErrorKind::ParseError, std::string(key) + " " + std::to_string(v) + " out of range");
      return v - 1;
    };
    auto check_concept = [&](std::size_t layer, std::uint32_t c) {
      if (c >= meta.layers[layer].concepts.size())
        throw Error(kModule, ErrorKind::ParseError, "concept " + std::to_string(c) + " out of range in layer " +
                                                        std::to_string(layer + 1));
    };
    for (const auto& e : j.value("intralayer", nlohmann::json::array())) {
      IntralayerMetaedge m;
      m.layer = layer_index(e, "layer");
      m.r = e.at("r").get<std::uint32_t>();
      m.s = e.at("s").get<std::uint32_t>();
      check_concept(m.layer, m.r);
      check_concept(m.layer, m.s);
      if (m.r == m.s) throw Error(kModule, ErrorKind::ParseError, "intralayer metaedge joins a concept to itself");
      if (m.r > m.s) std::swap(m.r, m.s);
      m.weight = e.at("weight").get<double>();
      m.edge_count = e.value("edge_count", std::size_t{0});
      m.weight_sum = e.value("weight_sum", 0.0);
      meta.intralayer.push_back(m);
    }
    for (const auto& e : j.value("interlayer", nlohmann::json::array())) {
      InterlayerMetaedge m;
      m.layer = layer_index(e, "layer");
      if (m.layer + 1 >= meta.layers.size())
        throw Error(kModule, ErrorKind::ParseError, "interlayer metaedge leaves the last layer");
      m.r = e.at("r").get<std::uint32_t>();
      m.s = e.at("s").get<std::uint32_t>();
      check_concept(m.layer, m.r);
      check_concept(m.layer + 1, m.s);
      m.weight = e.at("weight").get<double>();
      meta.interlayer.push_back(m);
    }
    for (const auto& e : j.value("pruned", nlohmann::json::array())) {
      PrunedMetaedge p;
      p.kind = e.at("kind").get<std::string>() == "interlayer" ? MetaedgeKind::interlayer : MetaedgeKind::intralayer;
      p.layer = layer_index(e, "layer");
      p.other_layer = layer_index(e, "other_layer");
      p.r = e.at("r").get<std::uint32_t>();
      p.s = e.at("s").get<std::uint32_t>();
      p.weight = e.at("weight").get<double>();
      p.fence = e.at("fence").get<double>();
      meta.pruned.push_back(p);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(kModule, ErrorKind::ParseError, e.what());
  }
  return meta;
}

}  // namespace cohesia
