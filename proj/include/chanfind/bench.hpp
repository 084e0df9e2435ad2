#pragma once

// Benchmark cases, scoring, runs and synthetic suite generation.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "chanfind/channel_db.hpp"
#include "chanfind/document.hpp"
#include "chanfind/finder.hpp"
#include "chanfind/middle_layer.hpp"
#include "chanfind/selector.hpp"

namespace chanfind {

enum class MatchMode { kExactSet, kSuperset, kAnyOf };

inline std::string to_string(MatchMode m) {
  switch (m) {
    case MatchMode::kExactSet: return "exact_set";
    case MatchMode::kSuperset: return "superset";
    case MatchMode::kAnyOf: return "any_of";
  }
  return "exact_set";
}

inline MatchMode parse_match_mode(const std::string& s) {
  const auto l = to_lower(s);
  if (l == "exact_set" || l == "exact" || l == "exactset") return MatchMode::kExactSet;
  if (l == "superset") return MatchMode::kSuperset;
  if (l == "any_of" || l == "anyof" || l == "any") return MatchMode::kAnyOf;
  throw ParseError("unknown match mode '" + s + "'");
}

struct BenchmarkCase {
  std::string id;
  std::string query;
  std::vector<std::string> expected;  // empty + ExactSet = abstention expected
  MatchMode mode = MatchMode::kExactSet;
};

inline bool score_case(const std::vector<std::string>& returned, const std::vector<std::string>& expected,
                       MatchMode mode) {
  const std::set<std::string> r(returned.begin(), returned.end());
  const std::set<std::string> e(expected.begin(), expected.end());
  switch (mode) {
    case MatchMode::kExactSet: return r == e;
    case MatchMode::kSuperset: return std::includes(r.begin(), r.end(), e.begin(), e.end());
    case MatchMode::kAnyOf:
      return std::any_of(e.begin(), e.end(), [&](const std::string& x) { return r.count(x) > 0; });
  }
  return false;
}

struct CaseSuite {
  std::vector<BenchmarkCase> cases;
  bool synthetic = false;
  json generator;  // how the suite was made, when synthetic
};

inline CaseSuite load_cases(const json& doc) {
  CaseSuite s;
  const json& arr = doc.is_object() ? doc.at("cases") : doc;
  if (doc.is_object()) {
    s.synthetic = get_or<bool>(doc, "synthetic", false);
    if (doc.contains("generator")) s.generator = doc.at("generator");
  }
  std::set<std::string> ids;
  for (const auto& j : arr) {
    BenchmarkCase c;
    c.id = require<std::string>(j, "id");
    c.query = require<std::string>(j, "query");
    c.expected = j.value("expected", std::vector<std::string>{});
    c.mode = parse_match_mode(get_or<std::string>(j, "mode", "exact_set"));
    if (c.expected.empty() && c.mode != MatchMode::kExactSet)
      throw ConfigError("case '" + c.id + "' has no expected channels");
    if (!ids.insert(c.id).second) throw ConfigError("duplicate case id '" + c.id + "'");
    s.cases.push_back(std::move(c));
  }
  return s;
}

inline json to_json(const CaseSuite& s) {
  json cases = json::array();
  for (const auto& c : s.cases)
    cases.push_back({{"id", c.id}, {"query", c.query}, {"expected", c.expected}, {"mode", to_string(c.mode)}});
  json out = {{"synthetic", s.synthetic}, {"cases", cases}};
  if (!s.generator.is_null()) out["generator"] = s.generator;
  return out;
}

struct CaseOutcome {
  std::string id;
  std::string query;
  std::vector<std::string> expected;
  std::vector<std::string> returned;
  bool correct = false;
  bool abstained = false;
  int selector_calls = 0;
  double wall_time = 0.0;  // seconds
  std::string error;       // kind: message, when the finder threw
};

struct RunReport {
  std::string paradigm;
  std::string backend;
  bool synthetic = false;
  std::vector<CaseOutcome> per_case;  // ordered by case id
  std::optional<double> accuracy;
  std::map<int, int> call_histogram;

  std::size_t correct_count() const {
    return static_cast<std::size_t>(std::count_if(per_case.begin(), per_case.end(), [](const CaseOutcome& c) { return c.correct; }));
  }
};

// Deterministic serialization. Wall times vary run to run and are left out
// unless asked for.
inline json to_json(const RunReport& r, bool include_timing = false) {
  json cases = json::array();
  for (const auto& c : r.per_case) {
    json j = {{"id", c.id},
              {"query", c.query},
              {"expected", c.expected},
              {"returned", c.returned},
              {"correct", c.correct},
              {"abstained", c.abstained},
              {"selector_calls", c.selector_calls}};
    if (!c.error.empty()) j["error"] = c.error;
    if (include_timing) j["wall_time"] = c.wall_time;
    cases.push_back(std::move(j));
  }
  json hist = json::object();
  for (const auto& [calls, n] : r.call_histogram) hist[std::to_string(calls)] = n;
  return {{"paradigm", r.paradigm},
          {"backend", r.backend},
          {"synthetic", r.synthetic},
          {"cases", r.per_case.size()},
          {"correct", r.correct_count()},
          {"accuracy", r.accuracy ? json(*r.accuracy) : json(nullptr)},
          {"call_histogram", hist},
          {"per_case", cases}};
}

struct BenchConfig {
  std::string paradigm;
  FinderFn finder;
  std::function<std::unique_ptr<SelectorBackend>()> make_backend;
  int call_budget = Selector::kDefaultBudget;
  std::size_t parallelism = 1;
  bool synthetic = false;
};

inline RunReport run_benchmark(const std::vector<BenchmarkCase>& cases, const BenchConfig& cfg) {
  if (!cfg.finder) throw ConfigError("benchmark needs a finder");
  if (!cfg.make_backend) throw ConfigError("benchmark needs a backend");
  if (cfg.call_budget < 1) throw ConfigError("call budget must be positive");
  RunReport report;
  report.paradigm = cfg.paradigm;
  report.synthetic = cfg.synthetic;
  report.backend = to_string(cfg.make_backend()->kind());

  auto run_one = [&](const BenchmarkCase& c) {
    CaseOutcome o{c.id, c.query, c.expected, {}, false, false, 0, 0.0, {}};
    auto backend = cfg.make_backend();
    Selector selector(*backend, cfg.call_budget);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      auto res = cfg.finder(c.query, selector);
      o.returned = res.channels;
      o.abstained = res.abstained;
      o.selector_calls = res.selector_calls;
    } catch (const Error& e) {
      o.error = e.kind() + ": " + e.what();
      o.selector_calls = selector.calls_used();
    } catch (const std::exception& e) {
      o.error = std::string("Error: ") + e.what();
      o.selector_calls = selector.calls_used();
    }
    o.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.correct = o.error.empty() && score_case(o.returned, c.expected, c.mode);
    return o;
  };

  const std::size_t par = std::max<std::size_t>(1, cfg.parallelism);
  for (std::size_t start = 0; start < cases.size(); start += par) {
    const std::size_t n = std::min(par, cases.size() - start);
    auto batch = run_indexed(n, [&](std::size_t i) { return run_one(cases[start + i]); });
    for (auto& o : batch) report.per_case.push_back(std::move(o));
  }
  std::stable_sort(report.per_case.begin(), report.per_case.end(),
                   [](const CaseOutcome& a, const CaseOutcome& b) { return a.id < b.id; });
  for (const auto& o : report.per_case) ++report.call_histogram[o.selector_calls];
  if (!report.per_case.empty())
    report.accuracy = static_cast<double>(report.correct_count()) / static_cast<double>(report.per_case.size());
  return report;
}

// ---- synthetic suites --------------------------------------------------------

enum class Difficulty { kVerbatim, kParaphrase, kAdversarial };

inline std::string to_string(Difficulty d) {
  switch (d) {
    case Difficulty::kVerbatim: return "verbatim";
    case Difficulty::kParaphrase: return "paraphrase";
    case Difficulty::kAdversarial: return "adversarial";
  }
  return "verbatim";
}

inline Difficulty parse_difficulty(const std::string& s) {
  if (s == "verbatim") return Difficulty::kVerbatim;
  if (s == "paraphrase") return Difficulty::kParaphrase;
  if (s == "adversarial") return Difficulty::kAdversarial;
  throw ConfigError("unknown difficulty '" + s + "'");
}

using SynonymTable = std::map<std::string, std::vector<std::string>>;  // canonical -> alternates

// Portable across standard libraries, unlike the <random> distributions.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}
  std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(engine_() % n); }
  bool coin(unsigned percent) { return below(100) < percent; }
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

namespace bench_detail {

inline const std::vector<std::string>& fillers() {
  static const std::vector<std::string> kFillers = {"", "show me the", "what is the", "I need the", "give me the",
                                                    "please find the"};
  return kFillers;
}

inline std::string case_id(std::size_t i) {
  std::string n = std::to_string(i + 1);
  while (n.size() < 4) n.insert(n.begin(), '0');
  return "case-" + n;
}

}  // namespace bench_detail

class QueryWriter {
 public:
  QueryWriter(SynonymTable synonyms, std::uint64_t seed, std::vector<std::string> distractors = {})
      : synonyms_(std::move(synonyms)), rng_(seed), distractors_(std::move(distractors)) {}

  std::string write(const std::string& source, Difficulty d) {
    if (d == Difficulty::kVerbatim) return source;
    auto toks = content_tokens(source);
    if (d == Difficulty::kAdversarial) {
      std::string q = source;
      for (int i = 0; i < 2 && !distractors_.empty(); ++i) q += " " + distractors_[rng_.below(distractors_.size())];
      return q;
    }
    for (auto& t : toks) {
      auto it = synonyms_.find(t);
      if (it != synonyms_.end() && !it->second.empty() && rng_.coin(60)) t = it->second[rng_.below(it->second.size())];
    }
    rng_.shuffle(toks);
    const auto& f = bench_detail::fillers()[rng_.below(bench_detail::fillers().size())];
    return trim(f + " " + join(toks, " "));
  }

  SeededRng& rng() { return rng_; }

 private:
  SynonymTable synonyms_;
  SeededRng rng_;
  std::vector<std::string> distractors_;
};

// Records whose description does not fit inside another record's text: only
// those have one unambiguous answer.
inline std::vector<const ChannelRecord*> unambiguous_records(const ChannelDatabase& db) {
  std::vector<std::set<std::string>> texts;
  texts.reserve(db.size());
  for (const auto& r : db.records()) texts.push_back(token_set(r.match_text()));
  std::map<std::string, std::vector<std::size_t>> postings;
  for (std::size_t i = 0; i < texts.size(); ++i)
    for (const auto& t : texts[i]) postings[t].push_back(i);
  std::vector<const ChannelRecord*> out;
  for (std::size_t i = 0; i < db.size(); ++i) {
    const auto& r = db.records()[i];
    const auto q = content_tokens(r.description);
    const std::set<std::string> qs(q.begin(), q.end());
    if (qs.empty()) continue;
    // Candidates sharing the rarest query token, then a full containment check.
    const std::string* rare = nullptr;
    for (const auto& t : qs)
      if (!rare || postings[t].size() < postings[*rare].size()) rare = &t;
    bool covered = false;
    for (auto j : postings[*rare]) {
      if (j == i) continue;
      if (std::includes(texts[j].begin(), texts[j].end(), qs.begin(), qs.end())) {
        covered = true;
        break;
      }
    }
    if (!covered) out.push_back(&r);
  }
  return out;
}

inline std::vector<std::string> vocabulary(const ChannelDatabase& db) {
  std::set<std::string> v;
  for (const auto& r : db.records())
    for (auto& t : content_tokens(r.description)) v.insert(std::move(t));
  return {v.begin(), v.end()};
}

inline CaseSuite generate_synthetic_benchmark(const ChannelDatabase& db, std::size_t n, std::uint64_t seed,
                                              Difficulty difficulty, const SynonymTable& synonyms = {}) {
  if (n == 0) throw ConfigError("benchmark size must be at least 1");
  CaseSuite suite;
  suite.synthetic = true;
  suite.generator = {{"source", db.name()}, {"n", n}, {"seed", seed}, {"difficulty", to_string(difficulty)}};
  auto pool = unambiguous_records(db);
  if (pool.empty()) return suite;
  QueryWriter writer(synonyms, seed ^ 0x9e3779b97f4a7c15ULL, vocabulary(db));
  SeededRng pick(seed);
  pick.shuffle(pool);
  for (std::size_t i = 0; i < n; ++i) {
    const auto* r = pool[i % pool.size()];
    suite.cases.push_back({bench_detail::case_id(i), writer.write(r->description, difficulty), {r->address},
                           MatchMode::kExactSet});
  }
  return suite;
}

// Middle-layer suites: whole-field requests and single-element requests.
inline CaseSuite generate_mml_benchmark(const MmlTree& tree, std::size_t n, std::uint64_t seed, Difficulty difficulty,
                                        const SynonymTable& synonyms = {}) {
  if (n == 0) throw ConfigError("benchmark size must be at least 1");
  struct Target {
    std::string text;
    std::vector<std::string> expected;
  };
  std::vector<Target> fields, elements;
  for (const auto& s : tree.systems())
    for (const auto& f : s.families)
      for (const auto& fld : f.fields) {
        const std::string base = s.description + " " + f.description + " " + fld.description;
        fields.push_back({base, fld.addresses});
        for (std::size_t i = 0; i < f.devices.size(); ++i)
          elements.push_back({base + " element " + std::to_string(f.devices[i].element), {fld.addresses[i]}});
      }
  CaseSuite suite;
  suite.synthetic = true;
  suite.generator = {{"source", tree.name()}, {"n", n}, {"seed", seed}, {"difficulty", to_string(difficulty)}};
  if (fields.empty()) return suite;
  SeededRng pick(seed);
  pick.shuffle(fields);
  pick.shuffle(elements);
  std::vector<std::string> vocab;
  {
    std::set<std::string> v;
    for (const auto& t : fields)
      for (auto& tok : content_tokens(t.text)) v.insert(tok);
    vocab.assign(v.begin(), v.end());
  }
  QueryWriter writer(synonyms, seed ^ 0x9e3779b97f4a7c15ULL, vocab);
  std::size_t fi = 0, ei = 0;
  for (std::size_t i = 0; i < n; ++i) {
    // Alternate whole-field and single-element requests.
    const bool element = (i % 2 == 1) && !elements.empty();
    const auto& t = element ? elements[ei++ % elements.size()] : fields[fi++ % fields.size()];
    suite.cases.push_back({bench_detail::case_id(i), writer.write(t.text, difficulty), t.expected, MatchMode::kExactSet});
  }
  return suite;
}

}  // namespace chanfind
