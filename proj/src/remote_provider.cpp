#include <httplib.h>

#include <json.hpp>

#include "cohesia/error.hpp"
#include "cohesia/semantics.hpp"

namespace cohesia {

namespace {

constexpr std::string_view kModule = "semantics";

using nlohmann::json;

[[noreturn]] void unavailable(const std::string& detail) {
  throw Error(kModule, ErrorKind::ProviderUnavailable, detail);
}

// "http://host:port/prefix" -> ("http://host:port", "/prefix").
std::pair<std::string, std::string> split_endpoint(const std::string& endpoint) {
  auto scheme = endpoint.find("://");
  if (scheme == std::string::npos || endpoint.compare(0, scheme, "http") != 0)
    unavailable("endpoint '" + endpoint + "' must be an http:// URL");
  auto path = endpoint.find('/', scheme + 3);
  std::string base = endpoint.substr(0, path);
  std::string prefix = path == std::string::npos ? "" : endpoint.substr(path);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {base, prefix};
}

json request(const std::string& endpoint, int timeout_seconds, const std::string& method, const std::string& route,
             const json* body, int* status_out = nullptr) {
  auto [base, prefix] = split_endpoint(endpoint);
  httplib::Client client(base);
  client.set_connection_timeout(timeout_seconds, 0);
  client.set_read_timeout(timeout_seconds, 0);
  client.set_write_timeout(timeout_seconds, 0);
  const std::string path = prefix + route;
  httplib::Result res = method == "GET" ? client.Get(path)
                                        : client.Post(path, body->dump(), "application/json");
  if (!res) unavailable(method + " " + path + " failed: " + httplib::to_string(res.error()));
  if (status_out) *status_out = res->status;
  if (res->status != 200) {
    if (status_out) return json();
    unavailable(method + " " + path + " returned HTTP " + std::to_string(res->status));
  }
  try {
    return json::parse(res->body);
  } catch (const json::parse_error& e) {
    unavailable(method + " " + path + " returned malformed JSON: " + e.what());
  }
}

}  // namespace

ProviderMetadata remote_health_check(const std::string& endpoint, int timeout_seconds) {
  auto body = request(endpoint, timeout_seconds, "GET", "/v1/health", nullptr);
  ProviderMetadata meta;
  try {
    meta.name = body.at("name").get<std::string>();
    meta.model = body.at("model").get<std::string>();
    auto dim = body.at("dim").get<long long>();
    if (dim <= 0) unavailable("sidecar reports invalid dim " + std::to_string(dim));
    meta.dim = static_cast<std::size_t>(dim);
  } catch (const json::exception& e) {
    unavailable(std::string("health metadata malformed: ") + e.what());
  }
  return meta;
}

RemoteProvider::RemoteProvider(std::string endpoint, int timeout_seconds)
    : endpoint_(std::move(endpoint)),
      timeout_seconds_(timeout_seconds),
      metadata_(remote_health_check(endpoint_, timeout_seconds)) {}

std::vector<CoherenceScore> RemoteProvider::score_pairs(const Section& section) const {
  if (section.sentences.size() < 2)
    throw Error(kModule, ErrorKind::TooFewSentences,
                "section " + std::to_string(section.index) + " has " + std::to_string(section.sentences.size()) +
                    " sentence(s)");
  json pairs = json::array();
  for (std::size_t k = 0; k + 1 < section.sentences.size(); ++k)
    pairs.push_back({{"a", section.sentences[k].raw}, {"b", section.sentences[k + 1].raw}});
  json body = {{"pairs", pairs}};
  auto reply = request(endpoint_, timeout_seconds_, "POST", "/v1/nsp", &body);

  std::vector<CoherenceScore> scores;
  try {
    const auto& values = reply.at("scores");
    if (!values.is_array() || values.size() != pairs.size())
      unavailable("/v1/nsp returned " + std::to_string(values.size()) + " scores for " +
                  std::to_string(pairs.size()) + " pairs");
    for (std::size_t k = 0; k < values.size(); ++k) scores.push_back({k + 1, values[k].get<double>()});
  } catch (const json::exception& e) {
    unavailable(std::string("/v1/nsp reply malformed: ") + e.what());
  }
  return scores;
}

std::vector<EntityEmbedding> RemoteProvider::embed_entities(const Section& section,
                                                            std::span<const std::string> entities) const {
  std::vector<EntityEmbedding> out;
  out.reserve(entities.size());
  for (const auto& entity : entities) {
    auto spans = find_occurrences(section, entity);
    if (spans.empty())
      throw Error(kModule, ErrorKind::EntityAbsent,
                  "'" + entity + "' does not occur in section " + std::to_string(section.index));
    out.push_back({entity, {}, spans.size()});
  }
  if (entities.empty()) return out;

  json body = {{"context", section.text()}, {"entities", json(std::vector<std::string>(entities.begin(), entities.end()))}};
  int status = 0;
  auto reply = request(endpoint_, timeout_seconds_, "POST", "/v1/embed", &body, &status);
  if (status == 422) throw Error(kModule, ErrorKind::EntityAbsent, "sidecar could not locate an entity in section " +
                                                                       std::to_string(section.index));
  if (status != 200) unavailable("/v1/embed returned HTTP " + std::to_string(status));
  try {
    const auto& vectors = reply.at("vectors");
    const auto dim = reply.at("dim").get<std::size_t>();
    if (dim != metadata_.dim)
      unavailable("/v1/embed dim " + std::to_string(dim) + " differs from health dim " + std::to_string(metadata_.dim));
    if (!vectors.is_array() || vectors.size() != entities.size())
      unavailable("/v1/embed returned " + std::to_string(vectors.size()) + " vectors for " +
                  std::to_string(entities.size()) + " entities");
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      out[i].vector = vectors[i].get<std::vector<double>>();
      if (out[i].vector.size() != dim) unavailable("/v1/embed vector length does not match dim");
    }
  } catch (const json::exception& e) {
    unavailable(std::string("/v1/embed reply malformed: ") + e.what());
  }
  return out;
}

}  // namespace cohesia
