#pragma once

#include <random>
#include <string>
#include <vector>

#include "chanfind/chanfind.hpp"
#include "chanfind/llm.hpp"

namespace chanfind::testing {

inline std::string data_path(const std::string& name) { return std::string(CHANFIND_DATA_DIR) + "/" + name; }

inline std::unique_ptr<SelectorBackend> oracle(const SynonymTable& syn = default_synonyms(), const ChannelDatabase* db = nullptr) {
  OracleConfig cfg;
  cfg.glossary = Glossary::from_synonyms(syn);
  if (db) cfg.glossary.merge(db->glossary());
  return std::make_unique<LexicalOracle>(cfg);
}

// Scripted backend for tests: returns whatever the script says.
class ScriptedBackend : public SelectorBackend {
 public:
  std::function<ChoiceResponse(const ChoiceRequest&)> on_choose;
  std::function<std::vector<std::string>(const std::string&)> on_decompose = [](const std::string& q) {
    return std::vector<std::string>{q};
  };
  int choose_calls = 0;

  BackendKind kind() const override { return BackendKind::kLexicalOracle; }
  ChoiceResponse choose(const ChoiceRequest& req) override {
    ++choose_calls;
    return on_choose(req);
  }
  std::vector<std::string> decompose(const std::string& q) override { return on_decompose(q); }
  std::vector<std::string> name_channels(const std::vector<std::string>& d) override {
    return std::vector<std::string>(d.size(), "Same");
  }
};

// Random queries built from the database vocabulary, mangled addresses,
// conjunctions and noise. Never empty.
inline std::vector<std::string> fuzz_queries(const std::vector<std::string>& vocab,
                                             const std::vector<std::string>& addresses, std::size_t n,
                                             std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto pick = [&](const std::vector<std::string>& v) { return v[rng() % v.size()]; };
  static const std::vector<std::string> noise = {"zebra", "quantum", "please", "set", "read", "the", "all", "and",
                                                 "banana", "42", "7", "of", "then", "$", "--", "?"};
  std::vector<std::string> out;
  out.reserve(n);
  while (out.size() < n) {
    std::string q;
    const auto kind = rng() % 5;
    const std::size_t len = 1 + rng() % 7;
    for (std::size_t i = 0; i < len; ++i) {
      if (!q.empty()) q += ' ';
      switch (kind) {
        case 0: q += pick(vocab); break;
        case 1: q += (rng() % 3 == 0) ? pick(noise) : pick(vocab); break;
        case 2: {
          // a real address with one character flipped
          std::string a = pick(addresses);
          if (!a.empty()) a[rng() % a.size()] = static_cast<char>('A' + rng() % 26);
          q += a;
          break;
        }
        case 3: q += pick(vocab) + (rng() % 2 ? " and " : " then ") + pick(vocab); break;
        default: q += pick(noise); break;
      }
    }
    if (!trim(q).empty()) out.push_back(q);
  }
  return out;
}

// One recorded wire exchange from data/llm/: the request, the canned HTTP
// replies and what the backend should make of them.
struct WireFixture {
  std::string kind;
  ChoiceRequest request;
  std::string decompose_query;
  std::vector<HttpResponse> responses;
  json expected;
};

inline WireFixture load_wire_fixture(const std::string& path) {
  const auto doc = load_document_file(path);
  WireFixture f;
  f.kind = doc.at("kind");
  const auto& rq = doc.at("request");
  if (f.kind == "choice") {
    f.request.query = rq.at("query");
    f.request.multi_select = rq.value("multi_select", false);
    f.request.allow_abstain = rq.value("allow_abstain", true);
    for (const auto& o : rq.at("options"))
      f.request.options.push_back({o.at("id"), o.at("label"), o.value("description", "")});
  } else {
    f.decompose_query = rq.at("query");
  }
  for (const auto& r : doc.at("responses")) f.responses.push_back({r.at("status"), r.at("body")});
  f.expected = doc.at("expected");
  return f;
}

// Replays the fixture through a RemoteLlmBackend. Returns "" when the outcome
// matches `expected`, otherwise a description of the mismatch.
inline std::string check_wire_fixture(const WireFixture& f) {
  LlmConfig cfg;
  cfg.url = "http://fixture.invalid/v1/chat/completions";
  auto transport = std::make_shared<FixtureTransport>(f.responses);
  RemoteLlmBackend backend(cfg, transport);
  try {
    if (f.kind == "decompose") {
      const auto got = backend.decompose(f.decompose_query);
      if (f.expected.contains("error")) return "expected " + f.expected.at("error").get<std::string>();
      if (got != f.expected.at("subqueries").get<std::vector<std::string>>()) return "subqueries differ";
      return "";
    }
    const auto r = backend.choose(f.request);
    if (f.expected.contains("error")) return "expected " + f.expected.at("error").get<std::string>();
    json doc = json::object();
    doc["selected"] = r.selected;
    doc["abstain"] = r.abstained;
    doc["rationale"] = r.rationale.value_or("");
    if (!validates(doc, choice_schema(f.request)))
      return "response fails the choice schema";
    if (r.selected != f.expected.at("selected").get<std::vector<std::string>>()) return "selection differs";
    if (r.abstained != f.expected.at("abstained").get<bool>()) return "abstention differs";
    return "";
  } catch (const Error& e) {
    if (f.expected.contains("error") && e.kind() == f.expected.at("error").get<std::string>()) return "";
    return std::string("unexpected ") + e.kind() + ": " + e.what();
  }
}

}  // namespace chanfind::testing
