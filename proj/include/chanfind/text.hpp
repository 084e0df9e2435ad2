#pragma once

// Token-level text utilities shared by every finder: the lexical tokenizer,
// the overlap score used by the offline oracle, stopword handling and the
// synonym glossary.

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace chanfind {

namespace text_detail {

enum class CharClass { kSep, kLower, kUpper, kDigit, kOther };

inline CharClass classify(char c) {
  const auto u = static_cast<unsigned char>(c);
  if (u >= 0x80) return CharClass::kOther;  // UTF-8 bytes: caseless letters
  if (std::islower(u)) return CharClass::kLower;
  if (std::isupper(u)) return CharClass::kUpper;
  if (std::isdigit(u)) return CharClass::kDigit;
  return CharClass::kSep;
}

inline bool is_alpha(CharClass c) {
  return c == CharClass::kLower || c == CharClass::kUpper || c == CharClass::kOther;
}

inline std::string normalize_token(std::string token) {
  for (auto& ch : token) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (!token.empty() && std::isdigit(static_cast<unsigned char>(token.front()))) {
    const auto nz = token.find_first_not_of('0');
    token = nz == std::string::npos ? "0" : token.substr(nz);
  }
  return token;
}

}  // namespace text_detail

// Splits on whitespace/punctuation, letter<->digit boundaries and intra-word
// case transitions ("SetPoint" -> set|point, "BPMReading" -> bpm|reading).
// Tokens are lowercased; numeric tokens lose leading zeros so "GAUGE01" and
// "gauge 1" agree. Order and duplicates are preserved.
inline std::vector<std::string> tokenize(std::string_view s) {
  using text_detail::CharClass;
  using text_detail::classify;
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(text_detail::normalize_token(std::move(cur)));
    cur.clear();
  };
  for (std::size_t i = 0; i < s.size(); ++i) {
    const CharClass c = classify(s[i]);
    if (c == CharClass::kSep) {
      flush();
      continue;
    }
    if (!cur.empty() && i > 0) {
      const CharClass prev = classify(s[i - 1]);
      const bool digit_edge = (prev == CharClass::kDigit) != (c == CharClass::kDigit);
      const bool lower_to_upper = prev == CharClass::kLower && c == CharClass::kUpper;
      // "ABCDef": split before the 'D' so the acronym stays whole.
      const bool acronym_end = prev == CharClass::kUpper && c == CharClass::kUpper &&
                               i + 1 < s.size() && classify(s[i + 1]) == CharClass::kLower;
      if (digit_edge || lower_to_upper || acronym_end) flush();
    }
    cur.push_back(s[i]);
  }
  flush();
  return out;
}

inline std::set<std::string> token_set(std::string_view s) {
  const auto toks = tokenize(s);
  return {toks.begin(), toks.end()};
}

// |T(query) ∩ T(candidate)| / |T(query)|; 0 for an empty query.
inline double overlap_score(const std::set<std::string>& query,
                            const std::set<std::string>& candidate) {
  if (query.empty()) return 0.0;
  std::size_t hits = 0;
  for (const auto& t : query) hits += candidate.count(t);
  return static_cast<double>(hits) / static_cast<double>(query.size());
}

inline double lexical_score(std::string_view query, std::string_view candidate_text) {
  return overlap_score(token_set(query), token_set(candidate_text));
}

// Function words and request filler that carry no channel semantics.
inline const std::set<std::string>& stopwords() {
  static const std::set<std::string> kWords = {
      "a",    "an",   "the",  "of",   "for",  "in",    "on",    "at",   "to",
      "from", "me",   "my",   "show", "give", "get",   "what",  "which", "is",
      "are",  "was",  "be",   "please", "i",  "want",  "need",  "can", "you",
      "tell", "find", "list", "display", "with", "by",  "this",  "that", "its",
      "it",   "do",   "does", "there", "any", "some", "value", "values", "channel",
      "channels", "pv", "pvs", "signal", "signals"};
  return kWords;
}

inline bool is_stopword(const std::string& token) { return stopwords().count(token) > 0; }

inline std::vector<std::string> content_tokens(std::string_view s) {
  std::vector<std::string> out;
  for (auto& t : tokenize(s))
    if (!is_stopword(t)) out.push_back(std::move(t));
  return out;
}

// Maps facility vocabulary onto canonical tokens. A key may expand to several
// tokens ("setpoint" -> set point). Applied to both sides of a comparison.
class Glossary {
 public:
  Glossary() = default;

  void add(const std::string& term, const std::string& canonical) {
    const auto from = tokenize(term);
    if (from.size() != 1) return;  // only single-token keys are rewritable
    map_[from.front()] = tokenize(canonical);
  }

  // synonyms: canonical -> alternates (the bundled synonym table layout).
  static Glossary from_synonyms(const std::map<std::string, std::vector<std::string>>& table) {
    Glossary g;
    for (const auto& [canonical, alternates] : table)
      for (const auto& alt : alternates) g.add(alt, canonical);
    return g;
  }

  bool empty() const { return map_.empty(); }
  std::size_t size() const { return map_.size(); }

  std::vector<std::string> canonicalize(const std::vector<std::string>& tokens) const {
    if (map_.empty()) return tokens;
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) {
      auto it = map_.find(t);
      if (it == map_.end()) {
        out.push_back(t);
      } else {
        out.insert(out.end(), it->second.begin(), it->second.end());
      }
    }
    return out;
  }

  void merge(const Glossary& other) {
    for (const auto& [k, v] : other.map_) map_[k] = v;
  }

 private:
  std::map<std::string, std::vector<std::string>> map_;
};

inline std::string to_lower(std::string_view s) {
  std::string out(s);
  for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

// "terminal voltage set point" -> "TerminalVoltageSetPoint".
inline std::string pascal_case(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (t.empty()) continue;
    std::string w = t;
    w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
    out += w;
  }
  return out;
}

inline std::vector<std::string> split_on(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::string replace_all(std::string s, std::string_view from, std::string_view to) {
  if (from.empty()) return s;
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
  return s;
}

}  // namespace chanfind
