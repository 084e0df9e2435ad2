#pragma once

// The decision boundary between finder pipelines and whatever supplies the
// intelligence. Pipelines only ever talk to `Selector`, which enforces the
// per-evaluation call budget and never lets an out-of-set id escape.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "chanfind/errors.hpp"
#include "chanfind/text.hpp"

namespace chanfind {

struct ChoiceOption {
  std::string id;
  std::string label;
  std::string description;
  // Picked only when no regular option carries evidence ("(stop here)").
  bool fallback = false;
};

struct ChoiceRequest {
  std::string context;                // task framing + facility glossary
  std::string query;                  // the (sub)query being resolved
  std::vector<std::string> resolved;  // text already explained by earlier selections
  std::vector<ChoiceOption> options;
  bool multi_select = false;
  bool allow_abstain = true;
  std::size_t max_selected = 0;  // 0 = unbounded (multi_select only)
};

struct ChoiceResponse {
  std::vector<std::string> selected;
  bool abstained = false;
  std::optional<std::string> rationale;
};

enum class BackendKind { kRemoteLLM, kLexicalOracle };

inline std::string to_string(BackendKind k) { return k == BackendKind::kRemoteLLM ? "llm" : "oracle"; }

inline void check_request(const ChoiceRequest& req) {
  if (req.options.empty()) throw InvalidRequest("choice request has no options");
  std::unordered_set<std::string> ids;
  for (const auto& o : req.options)
    if (!ids.insert(o.id).second) throw InvalidRequest("duplicate option id '" + o.id + "'");
}

// Raw backend. Responses are untrusted; `Selector` sanitizes them.
class SelectorBackend {
 public:
  virtual ~SelectorBackend() = default;
  virtual BackendKind kind() const = 0;
  virtual ChoiceResponse choose(const ChoiceRequest& req) = 0;
  virtual std::vector<std::string> decompose(const std::string& query) = 0;
  // One PascalCase name per description, same order.
  virtual std::vector<std::string> name_channels(const std::vector<std::string>& descriptions) = 0;
};

// Words that join independent targets in one request.
inline bool is_conjunction(const std::string& lowered_word) {
  static const std::set<std::string> kWords = {"and", "or", "plus", "&", ",", ";"};
  return kWords.count(lowered_word) > 0;
}

inline bool is_intent_word(const std::string& lowered_word) {
  static const std::set<std::string> kWords = {"set",   "read",  "check", "current", "get",    "monitor",
                                               "measure", "adjust", "change", "write", "show"};
  return kWords.count(lowered_word) > 0;
}

namespace selector_detail {

// Whitespace split with ',' and ';' as standalone words.
inline std::vector<std::string> words(const std::string& q) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : q) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      if (!cur.empty()) out.push_back(cur), cur.clear();
    } else if (c == ',' || c == ';') {
      if (!cur.empty()) out.push_back(cur), cur.clear();
      out.emplace_back(1, c);
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace selector_detail

// True if the query contains a coordinating conjunction between words.
inline bool looks_compound(const std::string& query) {
  auto w = selector_detail::words(query);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const auto l = to_lower(w[i]);
    if (l == "as" && i + 2 < w.size() && to_lower(w[i + 1]) == "well" && to_lower(w[i + 2]) == "as") return true;
    if (is_conjunction(l)) return true;
  }
  return false;
}

// Deterministic split used by the lexical oracle: cut at conjunctions, drop
// parts without content words, and carry a leading intent phrase ("set",
// "check current") over to parts that lack one.
inline std::vector<std::string> split_on_conjunctions(const std::string& query) {
  const auto w = selector_detail::words(query);
  std::vector<std::vector<std::string>> parts(1);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const auto l = to_lower(w[i]);
    if (l == "as" && i + 2 < w.size() && to_lower(w[i + 1]) == "well" && to_lower(w[i + 2]) == "as") {
      parts.emplace_back();
      i += 2;
    } else if (is_conjunction(l)) {
      parts.emplace_back();
    } else {
      parts.back().push_back(w[i]);
    }
  }
  std::vector<std::vector<std::string>> kept;
  for (auto& p : parts)
    if (!content_tokens(join(p, " ")).empty()) kept.push_back(std::move(p));
  if (kept.size() <= 1) return {trim(query)};

  std::vector<std::string> lead;
  for (const auto& word : kept.front()) {
    if (!is_intent_word(to_lower(word))) break;
    lead.push_back(word);
  }
  std::vector<std::string> out;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    auto& p = kept[i];
    if (i > 0 && !lead.empty() && !is_intent_word(to_lower(p.front()))) p.insert(p.begin(), lead.begin(), lead.end());
    out.push_back(join(p, " "));
  }
  return out;
}

struct OracleConfig {
  double abstain_threshold = 0.15;
  Glossary glossary;
};

// Fully deterministic stand-in for a language model: scores every option by
// token overlap with the unresolved part of the query.
class LexicalOracle : public SelectorBackend {
 public:
  explicit LexicalOracle(OracleConfig config = {}) : config_(std::move(config)) {}

  BackendKind kind() const override { return BackendKind::kLexicalOracle; }
  const OracleConfig& config() const { return config_; }

  // Canonical content tokens of the query minus (multiset) those of `resolved`.
  std::vector<std::string> unresolved_tokens(const ChoiceRequest& req) const {
    auto toks = canonical_content(req.query);
    if (toks.empty()) toks = config_.glossary.canonicalize(tokenize(req.query));
    for (const auto& r : req.resolved) {
      for (const auto& t : canonical_content(r)) {
        auto it = std::find(toks.begin(), toks.end(), t);
        if (it != toks.end()) toks.erase(it);
      }
    }
    return toks;
  }

  // Number of distinct unresolved query tokens that occur in the option text.
  std::size_t hits(const std::set<std::string>& query, const ChoiceOption& option) const {
    const auto cand = canonical_set(option.label + " " + option.description);
    std::size_t n = 0;
    for (const auto& t : query) n += cand.count(t);
    return n;
  }

  ChoiceResponse choose(const ChoiceRequest& req) override {
    check_request(req);
    const auto toks = unresolved_tokens(req);
    const std::set<std::string> query(toks.begin(), toks.end());
    const bool no_evidence_left = query.empty() && !req.resolved.empty();

    std::vector<std::size_t> regular, fallback;
    for (std::size_t i = 0; i < req.options.size(); ++i) (req.options[i].fallback ? fallback : regular).push_back(i);

    std::vector<std::size_t> counts(req.options.size(), 0);
    std::size_t best = 0;
    for (auto i : regular) best = std::max(best, counts[i] = hits(query, req.options[i]));
    // Confidence: share of the query explained, or share of the winning option
    // supported, whichever is larger. Long queries against one-word options
    // would otherwise never clear the threshold.
    double best_score = 0.0;
    if (!query.empty() && best > 0)
      for (auto i : regular) {
        if (counts[i] != best) continue;
        const auto opt = canonical_content_set(req.options[i].label + " " + req.options[i].description);
        const double q_cov = static_cast<double>(best) / static_cast<double>(query.size());
        const double o_cov = opt.empty() ? 0.0 : static_cast<double>(best) / static_cast<double>(opt.size());
        best_score = std::max(best_score, std::max(q_cov, o_cov));
      }

    ChoiceResponse resp;
    std::vector<std::size_t> picked;
    if (!no_evidence_left && best_score >= config_.abstain_threshold && best > 0) {
      for (auto i : regular)
        if (counts[i] == best) picked.push_back(i);
    } else if (!fallback.empty()) {
      picked.push_back(fallback.front());
    } else if (req.allow_abstain && !no_evidence_left) {
      resp.abstained = true;
      resp.rationale = "best overlap " + std::to_string(best_score) + " below threshold";
      return resp;
    } else {
      for (auto i : regular)
        if (counts[i] == best) picked.push_back(i);
    }
    if (!req.multi_select) {
      // Single choice: lexicographically smallest id among the tied.
      auto it = std::min_element(picked.begin(), picked.end(),
                                 [&](std::size_t a, std::size_t b) { return req.options[a].id < req.options[b].id; });
      picked = {*it};
    } else if (req.max_selected && picked.size() > req.max_selected) {
      picked.resize(req.max_selected);
    }
    for (auto i : picked) resp.selected.push_back(req.options[i].id);
    resp.rationale = "overlap " + std::to_string(best) + "/" + std::to_string(query.size());
    return resp;
  }

  std::vector<std::string> decompose(const std::string& query) override { return split_on_conjunctions(query); }

  // Top-4 highest-IDF content tokens of each description, in original order.
  std::vector<std::string> name_channels(const std::vector<std::string>& descriptions) override {
    std::vector<std::vector<std::string>> docs;
    std::map<std::string, std::size_t> df;
    for (const auto& d : descriptions) {
      auto toks = content_tokens(d);
      if (toks.empty()) toks = tokenize(d);
      std::set<std::string> uniq(toks.begin(), toks.end());
      for (const auto& t : uniq) ++df[t];
      docs.push_back(std::move(toks));
    }
    const double n = static_cast<double>(descriptions.size());
    std::vector<std::string> names;
    for (const auto& toks : docs) {
      std::vector<std::size_t> order;
      std::set<std::string> seen;
      for (std::size_t i = 0; i < toks.size(); ++i)
        if (seen.insert(toks[i]).second) order.push_back(i);
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::log(n / df[toks[a]]) > std::log(n / df[toks[b]]);
      });
      if (order.size() > 4) order.resize(4);
      std::sort(order.begin(), order.end());
      std::vector<std::string> chosen;
      for (auto i : order) chosen.push_back(toks[i]);
      names.push_back(pascal_case(chosen));
    }
    return names;
  }

 private:
  std::vector<std::string> canonical_content(const std::string& text) const {
    return config_.glossary.canonicalize(content_tokens(text));
  }
  std::set<std::string> canonical_content_set(const std::string& text) const {
    auto toks = canonical_content(text);
    return {toks.begin(), toks.end()};
  }
  std::set<std::string> canonical_set(const std::string& text) const {
    auto toks = config_.glossary.canonicalize(tokenize(text));
    return {toks.begin(), toks.end()};
  }

  OracleConfig config_;
};

// Per-evaluation facade over a backend: budget accounting, retry and output
// sanitization. Safe to share across concurrently evaluated sub-queries.
class Selector {
 public:
  static constexpr int kDefaultBudget = 32;

  explicit Selector(SelectorBackend& backend, int call_budget = kDefaultBudget)
      : backend_(&backend), budget_(call_budget) {}

  Selector(const Selector&) = delete;
  Selector& operator=(const Selector&) = delete;

  SelectorBackend& backend() const { return *backend_; }
  BackendKind kind() const { return backend_->kind(); }
  int budget() const { return budget_; }
  int calls_used() const { return used_.load(); }

  ChoiceResponse choose(const ChoiceRequest& req) {
    check_request(req);
    ChoiceResponse resp = sanitize(req, call([&] { return backend_->choose(req); }));
    if (!resp.selected.empty() || req.allow_abstain) return finalize(req, std::move(resp));
    // A mandatory choice came back empty (or entirely out of set): one retry.
    resp = sanitize(req, call([&] { return backend_->choose(req); }));
    if (resp.selected.empty()) throw InvalidAfterRetry("selector returned no valid option after retry");
    return resp;
  }

  // Atomic queries are returned without consulting the backend.
  std::vector<std::string> decompose(const std::string& query) {
    if (trim(query).empty()) throw InvalidRequest("empty query");
    if (!looks_compound(query)) return {trim(query)};
    auto parts = call([&] { return backend_->decompose(query); });
    std::vector<std::string> out;
    for (auto& p : parts)
      if (!trim(p).empty()) out.push_back(trim(p));
    if (out.empty()) out.push_back(trim(query));
    return out;
  }

  std::vector<std::string> name_channels(const std::vector<std::string>& descriptions) {
    return call([&] { return backend_->name_channels(descriptions); });
  }

 private:
  template <typename F>
  auto call(F&& f) -> decltype(f()) {
    int cur = used_.load();
    do {
      if (cur >= budget_) throw BudgetExhausted("selector call budget of " + std::to_string(budget_) + " exhausted");
    } while (!used_.compare_exchange_weak(cur, cur + 1));
    try {
      return f();
    } catch (const TransportError& e) {
      throw BackendUnavailable(e.what());
    }
  }

  static ChoiceResponse sanitize(const ChoiceRequest& req, ChoiceResponse raw) {
    std::unordered_set<std::string> presented;
    for (const auto& o : req.options) presented.insert(o.id);
    ChoiceResponse out;
    out.rationale = std::move(raw.rationale);
    if (raw.abstained) {
      out.abstained = req.allow_abstain;
      return out;
    }
    std::unordered_set<std::string> seen;
    for (auto& id : raw.selected)
      if (presented.count(id) && seen.insert(id).second) out.selected.push_back(std::move(id));
    if (!req.multi_select && out.selected.size() > 1) out.selected.resize(1);
    if (req.multi_select && req.max_selected && out.selected.size() > req.max_selected)
      out.selected.resize(req.max_selected);
    return out;
  }

  static ChoiceResponse finalize(const ChoiceRequest& req, ChoiceResponse resp) {
    if (resp.selected.empty() && req.allow_abstain) resp.abstained = true;
    return resp;
  }

  SelectorBackend* backend_;
  int budget_;
  std::atomic<int> used_{0};
};

}  // namespace chanfind
