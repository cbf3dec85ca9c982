#include "cohesia/corpus_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "cohesia/error.hpp"
#include "cohesia/wordlists.hpp"

namespace cohesia {

namespace {

constexpr std::string_view kModule = "corpus_io";

bool is_word_byte(char c) {
  auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || u >= 0x80;
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_upper(char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; }

char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

bool is_terminator(char c) { return c == '.' || c == '?' || c == '!'; }
bool is_closer(char c) { return c == '"' || c == '\'' || c == ')' || c == ']'; }
bool is_opener(char c) { return c == '"' || c == '\'' || c == '(' || c == '['; }

}  // namespace

std::string Section::text() const {
  std::string out;
  for (const auto& s : sentences) {
    if (!out.empty()) out += ' ';
    out += s.raw;
  }
  return out;
}

AbbreviationList::AbbreviationList() : entries_(default_abbreviations()) {}

AbbreviationList::AbbreviationList(std::vector<std::string> entries) : entries_(std::move(entries)) {}

void AbbreviationList::extend_from_file(const std::filesystem::path& path) {
  for (auto& e : parse_word_list(read_file(path))) entries_.push_back(std::move(e));
}

void AbbreviationList::add(std::string entry) {
  std::transform(entry.begin(), entry.end(), entry.begin(), lower);
  entries_.push_back(std::move(entry));
}

bool AbbreviationList::ends_with_abbreviation(std::string_view text, std::size_t end) const {
  for (const auto& entry : entries_) {
    if (entry.empty() || entry.size() > end) continue;
    std::size_t begin = end - entry.size();
    if (begin > 0 && is_word_byte(text[begin - 1])) continue;
    bool match = true;
    for (std::size_t k = 0; k < entry.size() && match; ++k) match = lower(text[begin + k]) == entry[k];
    if (match) return true;
  }
  return false;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    if (!is_word_byte(text[i])) {
      ++i;
      continue;
    }
    std::string token;
    while (i < n) {
      if (is_word_byte(text[i])) {
        token += lower(text[i]);
        ++i;
      } else if (text[i] == '-' && i + 1 < n && is_word_byte(text[i + 1])) {
        token += '-';
        ++i;
      } else {
        break;
      }
    }
    tokens.push_back(std::move(token));
  }
  return tokens;
}

std::vector<Sentence> segment_sentences(std::string_view text, const AbbreviationList& abbreviations) {
  std::vector<Sentence> out;
  auto emit = [&](std::string_view piece) {
    piece = trim(piece);
    if (piece.empty()) return;
    Sentence s;
    s.index = out.size() + 1;
    s.raw = std::string(piece);
    s.tokens = tokenize(piece);
    out.push_back(std::move(s));
  };

  const std::size_t n = text.size();
  std::size_t start = 0;
  std::size_t i = 0;
  while (i < n) {
    if (!is_terminator(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && (is_terminator(text[j]) || is_closer(text[j]))) ++j;
    if (j >= n || !is_space(text[j])) {
      i = j;
      continue;
    }
    std::size_t k = j;
    bool newline = false;
    while (k < n && is_space(text[k])) newline |= text[k++] == '\n';
    if (k >= n) break;

    bool capital = is_upper(text[k]) || (is_opener(text[k]) && k + 1 < n && is_upper(text[k + 1]));
    bool split = newline || capital;
    if (split) {
      // Only the last period of the run can belong to an abbreviation.
      std::size_t period_end = j;
      while (period_end > i && text[period_end - 1] != '.') --period_end;
      if (text[period_end - 1] == '.' && abbreviations.ends_with_abbreviation(text, period_end)) split = false;
    }
    if (split) {
      emit(text.substr(start, j - start));
      start = k;
    }
    i = k;
  }
  emit(text.substr(start));
  return out;
}

std::string clean_text(std::string_view text) {
  static const std::regex markdown_heading(R"(^#{1,6}\s.*)");
  static const std::regex numbered_heading(R"(^\d+(\.\d+)*\.?\s+[A-Z][^.?!]*$)");
  static const std::regex named_heading(
      R"(^(abstract|introduction|background|related work|conclusions?|discussion|results|methods?|references|acknowledge?ments?)\s*:?\s*$)",
      std::regex::icase);
  static const std::regex caption(R"(^(figure|fig\.|table|tab\.)\s*\d+\s*[.:].*)", std::regex::icase);

  std::ostringstream out;
  std::istringstream in{std::string(text)};
  std::string line;
  bool in_display = false;
  std::string display_end;
  while (std::getline(in, line)) {
    auto t = std::string(trim(line));
    if (in_display) {
      if (t.find(display_end) != std::string::npos) in_display = false;
      continue;
    }
    if (t.rfind("$$", 0) == 0) {
      if (t.size() < 4 || t.substr(t.size() - 2) != "$$") {
        in_display = true;
        display_end = "$$";
      }
      continue;
    }
    if (t.rfind("\\begin{", 0) == 0) {
      auto close = t.find('}');
      if (close != std::string::npos) {
        std::string env = t.substr(7, close - 7);
        display_end = "\\end{" + env + "}";
        if (t.find(display_end) == std::string::npos) in_display = true;
      }
      continue;
    }
    if (t.rfind("\\[", 0) == 0) {
      if (t.find("\\]") == std::string::npos) {
        in_display = true;
        display_end = "\\]";
      }
      continue;
    }
    if (std::regex_match(t, markdown_heading) || std::regex_match(t, numbered_heading) ||
        std::regex_match(t, named_heading) || std::regex_match(t, caption)) {
      continue;
    }
    out << line << '\n';
  }
  return out.str();
}

namespace {

Section make_section(std::size_t index, std::optional<std::string> heading, std::string_view text,
                     const LoadOptions& options, const AbbreviationList& abbreviations) {
  Section section;
  section.index = index;
  section.heading = std::move(heading);
  if (options.clean) {
    section.sentences = segment_sentences(clean_text(text), abbreviations);
  } else {
    section.sentences = segment_sentences(text, abbreviations);
  }
  section.empty = section.sentences.empty();
  return section;
}

void require_content(const Document& doc) {
  bool any = std::any_of(doc.sections.begin(), doc.sections.end(), [](const Section& s) { return !s.empty; });
  if (!any) throw Error(kModule, ErrorKind::EmptyDocument, "document '" + doc.id + "' has no non-empty section");
}

}  // namespace

Document parse_document_json(std::string_view json_text, const LoadOptions& options,
                             const AbbreviationList& abbreviations) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(kModule, ErrorKind::ParseError, e.what());
  }
  if (!root.is_object()) throw Error(kModule, ErrorKind::ParseError, "top-level value must be an object");
  if (!root.contains("id") || !root["id"].is_string())
    throw Error(kModule, ErrorKind::ParseError, "missing string field 'id'");
  if (!root.contains("sections") || !root["sections"].is_array())
    throw Error(kModule, ErrorKind::ParseError, "missing array field 'sections'");

  Document doc;
  doc.id = root["id"].get<std::string>();
  std::size_t index = 0;
  for (const auto& item : root["sections"]) {
    ++index;
    if (!item.is_object() || !item.contains("text") || !item["text"].is_string())
      throw Error(kModule, ErrorKind::ParseError, "section " + std::to_string(index) + " lacks string 'text'");
    std::optional<std::string> heading;
    if (item.contains("heading") && !item["heading"].is_null()) {
      if (!item["heading"].is_string())
        throw Error(kModule, ErrorKind::ParseError, "section " + std::to_string(index) + " heading must be string or null");
      heading = item["heading"].get<std::string>();
    }
    doc.sections.push_back(make_section(index, std::move(heading), item["text"].get<std::string>(), options, abbreviations));
  }
  require_content(doc);
  return doc;
}

Document parse_document_plain(std::string_view text, std::string id, const LoadOptions& options,
                              const AbbreviationList& abbreviations) {
  Document doc;
  doc.id = std::move(id);
  std::vector<std::string> chunks(1);
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    if (trim(line) == options.delimiter) {
      chunks.emplace_back();
    } else {
      chunks.back().append(line);
      chunks.back() += '\n';
    }
    pos = end + 1;
  }
  for (const auto& chunk : chunks) {
    if (trim(chunk).empty()) continue;
    doc.sections.push_back(make_section(doc.sections.size() + 1, std::nullopt, chunk, options, abbreviations));
  }
  require_content(doc);
  return doc;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(kModule, ErrorKind::ParseError, "cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Document load_document(const std::filesystem::path& path, InputFormat format, const LoadOptions& options,
                       const AbbreviationList& abbreviations) {
  auto body = read_file(path);
  if (format == InputFormat::json) return parse_document_json(body, options, abbreviations);
  return parse_document_plain(body, path.stem().string(), options, abbreviations);
}

std::vector<TokenSpan> find_occurrences(const Section& section, std::string_view phrase) {
  std::vector<TokenSpan> spans;
  auto needle = tokenize(phrase);
  if (needle.empty()) return spans;
  for (const auto& sentence : section.sentences) {
    const auto& tokens = sentence.tokens;
    if (tokens.size() < needle.size()) continue;
    for (std::size_t p = 0; p + needle.size() <= tokens.size(); ++p) {
      if (std::equal(needle.begin(), needle.end(), tokens.begin() + static_cast<std::ptrdiff_t>(p)))
        spans.push_back({sentence.index, p, needle.size()});
    }
  }
  return spans;
}

}  // namespace cohesia
