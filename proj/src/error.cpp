#include "cohesia/error.hpp"

namespace cohesia {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::EmptyDocument: return "EmptyDocument";
    case ErrorKind::TooFewSentences: return "TooFewSentences";
    case ErrorKind::ProviderUnavailable: return "ProviderUnavailable";
    case ErrorKind::EntityAbsent: return "EntityAbsent";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::DegenerateTable: return "DegenerateTable";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::ZeroVariance: return "ZeroVariance";
    case ErrorKind::TooFewNodes: return "TooFewNodes";
    case ErrorKind::EmptyGraph: return "EmptyGraph";
    case ErrorKind::InvalidGraph: return "InvalidGraph";
    case ErrorKind::NoEntities: return "NoEntities";
    case ErrorKind::MissingEmbedding: return "MissingEmbedding";
    case ErrorKind::EmptyLayer: return "EmptyLayer";
    case ErrorKind::NoLayers: return "NoLayers";
    case ErrorKind::NoMetanodes: return "NoMetanodes";
    case ErrorKind::JoinEmpty: return "JoinEmpty";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(std::string_view module, ErrorKind kind, const std::string& detail)
    : std::runtime_error("[" + std::string(module) + "] " + std::string(to_string(kind)) + ": " + detail),
      module_(module),
      kind_(kind) {}

}  // namespace cohesia
