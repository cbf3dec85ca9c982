#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cohesia {

enum class ErrorKind {
  ParseError,
  EmptyDocument,
  TooFewSentences,
  ProviderUnavailable,
  EntityAbsent,
  EmptyInput,
  DegenerateTable,
  LengthMismatch,
  ZeroVariance,
  TooFewNodes,
  EmptyGraph,
  InvalidGraph,
  NoEntities,
  MissingEmbedding,
  EmptyLayer,
  NoLayers,
  NoMetanodes,
  JoinEmpty,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library. what() is "[module] Kind: detail".
class Error : public std::runtime_error {
 public:
  Error(std::string_view module, ErrorKind kind, const std::string& detail);

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
  ErrorKind kind_;
};

}  // namespace cohesia
