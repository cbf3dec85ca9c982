#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace cohesia {

/// Parses a word-list file body: one entry per line, '#' starts a comment line,
/// surrounding whitespace trimmed, entries lowercased.
std::vector<std::string> parse_word_list(std::string_view body);

class WordSet {
 public:
  WordSet() = default;
  explicit WordSet(const std::vector<std::string>& words);

  bool contains(std::string_view word) const;
  void insert(std::string word);
  void extend_from_file(const std::filesystem::path& path);
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

const WordSet& default_stopwords();
const WordSet& default_function_words();
std::vector<std::string> default_abbreviations();

}  // namespace cohesia
