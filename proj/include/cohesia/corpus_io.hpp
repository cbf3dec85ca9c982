#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cohesia {

struct Sentence {
  std::size_t index = 0;  // 1-based within its section
  std::string raw;
  std::vector<std::string> tokens;  // lowercased, punctuation stripped

  bool operator==(const Sentence&) const = default;
};

struct Section {
  std::size_t index = 0;  // 1-based within its document
  std::optional<std::string> heading;
  std::vector<Sentence> sentences;
  bool empty = false;  // no sentence survived cleaning

  /// Sentence texts joined by single spaces.
  std::string text() const;

  bool operator==(const Section&) const = default;
};

struct Document {
  std::string id;
  std::vector<Section> sections;

  bool operator==(const Document&) const = default;
};

enum class InputFormat { json, plain };

struct LoadOptions {
  std::string delimiter = "===";  // plain format: section separator line
  bool clean = false;             // strip heading/caption/equation lines
};

/// Abbreviations that never end a sentence. Defaults to the shipped list.
class AbbreviationList {
 public:
  AbbreviationList();
  explicit AbbreviationList(std::vector<std::string> entries);

  /// Reads one entry per line ('#' comments allowed) and appends them.
  void extend_from_file(const std::filesystem::path& path);
  void add(std::string entry);

  /// True when text[0, end) finishes with a listed abbreviation at a word boundary.
  bool ends_with_abbreviation(std::string_view text, std::size_t end) const;

  std::span<const std::string> entries() const { return entries_; }

 private:
  std::vector<std::string> entries_;
};

/// Splits on . ? ! followed by whitespace and an uppercase letter, or by a
/// line break. A trailing run without terminator still forms a sentence.
std::vector<Sentence> segment_sentences(std::string_view text,
                                        const AbbreviationList& abbreviations = AbbreviationList());

/// Lowercased alphanumeric tokens; hyphen-joined words stay whole.
/// Bytes >= 0x80 count as word characters so UTF-8 words are not split.
std::vector<std::string> tokenize(std::string_view text);

/// Best-effort removal of heading, caption and display-equation lines.
std::string clean_text(std::string_view text);

Document parse_document_json(std::string_view json_text, const LoadOptions& options = {},
                             const AbbreviationList& abbreviations = AbbreviationList());
Document parse_document_plain(std::string_view text, std::string id,
                              const LoadOptions& options = {},
                              const AbbreviationList& abbreviations = AbbreviationList());

/// Reads and segments a document. Throws ParseError or EmptyDocument.
Document load_document(const std::filesystem::path& path, InputFormat format,
                       const LoadOptions& options = {},
                       const AbbreviationList& abbreviations = AbbreviationList());

/// Position of one occurrence of a (possibly multi-token) phrase.
struct TokenSpan {
  std::size_t sentence = 0;  // 1-based sentence index
  std::size_t position = 0;  // 0-based token offset of the first token
  std::size_t length = 0;

  bool operator==(const TokenSpan&) const = default;
};

/// All occurrences of `phrase` (tokenized the same way as sentences).
std::vector<TokenSpan> find_occurrences(const Section& section, std::string_view phrase);

std::string read_file(const std::filesystem::path& path);

}  // namespace cohesia
