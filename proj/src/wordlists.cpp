#include "cohesia/wordlists.hpp"

#include <algorithm>
#include <cctype>

#include "cohesia/corpus_io.hpp"

namespace cohesia {

namespace embedded {
extern const std::string_view stopwords;
extern const std::string_view abbreviations;
extern const std::string_view function_words;
}  // namespace embedded

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

std::vector<std::string> parse_word_list(std::string_view body) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= body.size()) {
    std::size_t end = body.find('\n', start);
    if (end == std::string_view::npos) end = body.size();
    auto line = trim(body.substr(start, end - start));
    if (!line.empty() && line.front() != '#') {
      std::string word(line);
      std::transform(word.begin(), word.end(), word.begin(),
                     [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
      out.push_back(std::move(word));
    }
    start = end + 1;
  }
  return out;
}

WordSet::WordSet(const std::vector<std::string>& words) : words_(words.begin(), words.end()) {}

bool WordSet::contains(std::string_view word) const {
  return words_.find(std::string(word)) != words_.end();
}

void WordSet::insert(std::string word) { words_.insert(std::move(word)); }

void WordSet::extend_from_file(const std::filesystem::path& path) {
  for (auto& w : parse_word_list(read_file(path))) words_.insert(std::move(w));
}

const WordSet& default_stopwords() {
  static const WordSet set(parse_word_list(embedded::stopwords));
  return set;
}

const WordSet& default_function_words() {
  static const WordSet set(parse_word_list(embedded::function_words));
  return set;
}

std::vector<std::string> default_abbreviations() {
  return parse_word_list(embedded::abbreviations);
}

}  // namespace cohesia
