// Acceptance run: one PASS/FAIL line per criterion, oracle backend only.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "support.hpp"

using namespace chanfind;
namespace t = chanfind::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void report(int n, bool ok, const std::string& detail) {
  if (!ok) ++failures;
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << n << ": " << detail << std::endl;
}

BackendFactory oracle_factory(const ChannelDatabase* db = nullptr) {
  const auto syn = default_synonyms();
  OracleConfig cfg;
  cfg.glossary = Glossary::from_synonyms(syn);
  if (db) cfg.glossary.merge(db->glossary());
  return [cfg] { return std::unique_ptr<SelectorBackend>(new LexicalOracle(cfg)); };
}

// ---- 1 ---------------------------------------------------------------------------

void expansion_counts() {
  const auto start = Clock::now();
  const auto tutorial = load_database_file(t::data_path("tutorial.yaml"));
  std::set<std::string> systems;
  for (const auto& r : tutorial->records()) systems.insert(r.path.front().value);
  const auto vac_doc = load_document_file(t::data_path("vacuum_device.yaml"));
  const auto vac = load_database(vac_doc);
  const double secs = seconds_since(start);
  const auto brute = t::enumerate_doc(vac_doc);
  const bool ok = tutorial->size() == 1050 && systems.size() == 4 && vac->size() == brute && vac->size() >= 145 &&
                  vac->size() <= 152 && secs < 1.0;
  std::ostringstream d;
  d << "tutorial " << tutorial->size() << " records / " << systems.size() << " systems; vacuum device " << vac->size()
    << " (enumerator " << brute << "); " << secs << " s";
  report(1, ok, d.str());
}

// ---- 2 ---------------------------------------------------------------------------

std::vector<std::string> db_vocabulary(const ChannelDatabase& db) {
  std::set<std::string> words;
  for (const auto& r : db.records()) {
    for (const auto& tok : tokenize(r.description)) words.insert(tok);
    for (const auto& p : r.path) words.insert(p.value);
  }
  return {words.begin(), words.end()};
}

std::vector<std::string> all_addresses(const ChannelDatabase& db) {
  std::vector<std::string> out;
  for (const auto& r : db.records()) out.push_back(r.address);
  return out;
}

// Returns {violations, errors}. Errors are typed refusals, not hallucinations.
std::pair<std::size_t, std::size_t> fuzz(const ChannelDatabase& truth, const FinderFn& finder, const BackendFactory& mk,
                                         std::uint64_t seed) {
  const auto queries = t::fuzz_queries(db_vocabulary(truth), all_addresses(truth), 1000, seed);
  std::size_t bad = 0, errors = 0;
  for (const auto& q : queries) {
    auto backend = mk();
    Selector s(*backend);
    try {
      for (const auto& c : finder(q, s).channels)
        if (!truth.contains(c)) ++bad;
    } catch (const Error&) {
      ++errors;
    }
  }
  return {bad, errors};
}

void zero_hallucination() {
  const auto ucsb = load_database_file(t::data_path("ucsb_fel.yaml"));
  const auto six = load_database(six_level_config(1));
  const auto space = std::make_shared<AddressSpace>(load_database(explorer_config()));
  const auto ml = std::make_shared<MiddleLayer>(make_middle_layer(1));
  const auto toy = toy_graph_a();
  const auto store = build_graph(*toy.db, toy.mapping);
  const auto lib = default_templates(store);

  struct Run {
    const char* name;
    const ChannelDatabase* truth;
    FinderFn finder;
  };
  const std::vector<Run> runs = {
      {"direct", ucsb.get(), [&](const std::string& q, Selector& s) { return find_direct(q, *ucsb, s); }},
      {"tree", six.get(), [&](const std::string& q, Selector& s) { return find_hierarchical(q, *six, s); }},
      {"explore", &space->db(), [&](const std::string& q, Selector& s) { return find_explorer(q, *space, s); }},
      {"mml", ml->companion.get(), [&](const std::string& q, Selector& s) { return find_middle_layer(q, *ml, s); }},
      {"onto", toy.db.get(), [&](const std::string& q, Selector& s) { return find_graph(q, store, lib, toy.db.get(), s); }},
  };
  std::size_t total = 0;
  std::ostringstream d;
  std::uint64_t seed = 100;
  for (const auto& r : runs) {
    const auto [bad, errors] = fuzz(*r.truth, r.finder, oracle_factory(r.truth), seed++);
    total += bad;
    d << r.name << " " << bad << " (" << errors << " refused) ";
  }
  report(2, total == 0, "violations per 1000 fuzzed queries: " + d.str());
}

// ---- 3 ---------------------------------------------------------------------------

void call_count_bound() {
  const auto db1 = load_database(six_level_config(1));
  const auto db10 = load_database(six_level_config(10));
  const auto mk = oracle_factory();
  std::size_t checked = 0, branched = 0, over = 0, differ = 0;
  int worst = 0;
  for (const auto& r : db1->records()) {
    auto b1 = mk(), b10 = mk();
    Selector s1(*b1), s10(*b10);
    const auto t1 = navigate(r.description, *db1, s1);
    if (t1.branched()) {
      ++branched;
      continue;
    }
    ++checked;
    worst = std::max(worst, t1.selector_calls);
    if (t1.selector_calls > 6) ++over;
    if (navigate(r.description, *db10, s10).selector_calls != t1.selector_calls) ++differ;
  }
  std::ostringstream d;
  d << checked << " non-branching queries on " << db1->size() << " vs " << db10->size() << " channels; max "
    << worst << " calls, " << over << " over 6, " << differ << " differ at 10x (" << branched << " branched)";
  report(3, checked > 0 && over == 0 && differ == 0, d.str());
}

// ---- 4 ---------------------------------------------------------------------------

void benchmark_floors() {
  const auto start = Clock::now();
  const auto syn = default_synonyms();
  const auto ucsb = load_database_file(t::data_path("ucsb_fel.yaml"));
  const auto space = std::make_shared<AddressSpace>(load_database(explorer_config()));
  const auto ml = std::make_shared<MiddleLayer>(make_middle_layer(1));

  bool ok = true;
  std::ostringstream d;
  for (const auto diff : {Difficulty::kVerbatim, Difficulty::kParaphrase}) {
    const double floor = diff == Difficulty::kVerbatim ? 1.0 : 0.9;
    struct Suite {
      const char* name;
      std::vector<BenchmarkCase> cases;
      FinderFn finder;
    };
    const std::vector<Suite> suites = {
        {"direct", generate_synthetic_benchmark(*ucsb, 30, 7, diff, syn).cases,
         [&](const std::string& q, Selector& s) { return find_direct(q, *ucsb, s); }},
        {"explore", generate_synthetic_benchmark(space->db(), 60, 7, diff, syn).cases,
         [&](const std::string& q, Selector& s) { return find_explorer(q, *space, s); }},
        {"mml", generate_mml_benchmark(ml->tree, 104, 7, diff, syn).cases,
         [&](const std::string& q, Selector& s) { return find_middle_layer(q, *ml, s); }},
    };
    for (const auto& s : suites) {
      BenchConfig cfg;
      cfg.paradigm = s.name;
      cfg.finder = s.finder;
      cfg.make_backend = oracle_factory();
      const auto r = run_benchmark(s.cases, cfg);
      const double acc = r.accuracy.value_or(0.0);
      ok = ok && s.cases.size() == (std::string(s.name) == "direct" ? 30u : std::string(s.name) == "explore" ? 60u : 104u) &&
           acc >= floor;
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.3f", acc);
      d << s.name << "/" << to_string(diff) << " " << buf << " ";
    }
  }
  const double secs = seconds_since(start);
  d << "in " << secs << " s";
  report(4, ok && secs < 60.0, d.str());
}

// ---- 5 ---------------------------------------------------------------------------

struct Candidate {
  std::string address;
  std::string text[4];
};

// Straight off the tree, independent of the address-space index.
std::vector<Candidate> scan_candidates(const ChannelDatabase& db) {
  std::vector<Candidate> out;
  std::function<void(const TreeNode&, std::vector<const TreeNode*>)> walk = [&](const TreeNode& n,
                                                                              std::vector<const TreeNode*> up) {
    up.push_back(&n);
    if (n.children.empty() && up.size() == 4) {
      Candidate c;
      c.address = n.address;
      for (int i = 0; i < 4; ++i) c.text[i] = up[i]->value + " " + up[i]->description;
      out.push_back(std::move(c));
    }
    for (const auto& k : n.children) walk(k, up);
  };
  for (const auto& r : db.roots()) walk(r, {});
  return out;
}

std::vector<ScoredAddress> full_scan(const std::vector<Candidate>& all, const std::string hints[4], std::size_t k) {
  std::vector<ScoredAddress> out;
  for (const auto& c : all) {
    double s = 1.0 * lexical_score(hints[3], c.text[3]);
    s += 0.25 * lexical_score(hints[0], c.text[0]);
    s += 0.25 * lexical_score(hints[1], c.text[1]);
    s += 0.25 * lexical_score(hints[2], c.text[2]);
    out.push_back({c.address, s});
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.score != b.score ? a.score > b.score : a.address < b.address;
  });
  if (out.size() > k) out.resize(k);
  return out;
}

bool all_hints_match(const Candidate& c, const std::string hints[4]) {
  for (int i = 0; i < 4; ++i) {
    const auto have = token_set(c.text[i]);
    for (const auto& tok : token_set(hints[i]))
      if (!have.count(tok)) return false;
  }
  return true;
}

void fuzzy_ranking() {
  const AddressSpace space(load_database(explorer_config()));
  const auto all = scan_candidates(space.db());
  std::mt19937_64 rng(5);
  std::size_t top1 = 0, same = 0, cases = 0, draws = 0;
  while (cases < 200 && draws < 200000) {
    ++draws;
    const auto& target = all[rng() % all.size()];
    // Each hint: one or two tokens drawn from that component's text.
    std::string hints[4];
    for (int i = 0; i < 4; ++i) {
      const auto toks = tokenize(target.text[i]);
      const std::size_t n = 1 + rng() % 2;
      for (std::size_t j = 0; j < n; ++j) hints[i] += (j ? " " : "") + toks[rng() % toks.size()];
    }
    std::size_t matching = 0;
    for (const auto& c : all) matching += all_hints_match(c, hints);
    if (matching != 1) continue;
    ++cases;
    GuessHints h;
    h.facility = hints[0];
    h.device = hints[1];
    h.location = hints[2];
    h.property = hints[3];
    const auto got = space.guess_addresses(h, 5);
    const auto ref = full_scan(all, hints, 5);
    if (!got.empty() && got[0].address == target.address) ++top1;
    bool eq = got.size() == ref.size();
    for (std::size_t i = 0; eq && i < got.size(); ++i)
      eq = got[i].address == ref[i].address && got[i].score == ref[i].score;
    same += eq;
  }
  std::ostringstream d;
  d << cases << " seeded unique-match cases: top-1 " << top1 << ", equal to full scan " << same;
  report(5, cases == 200 && top1 == cases && same == cases, d.str());
}

// ---- 6 ---------------------------------------------------------------------------

void suffix_semantics() {
  const auto db = load_database(six_level_config(1));
  std::vector<std::pair<const ChannelRecord*, const ChannelRecord*>> pairs;  // setpoint, readback
  for (const auto& r : db->records()) {
    if (r.suffix_role != SuffixRole::kSetpoint) continue;
    Path base(r.path.begin(), r.path.end() - 1);
    for (const auto& o : db->records())
      if (o.suffix_role == SuffixRole::kReadback && Path(o.path.begin(), o.path.end() - 1) == base)
        pairs.emplace_back(&r, &o);
  }
  std::mt19937_64 rng(6);
  std::shuffle(pairs.begin(), pairs.end(), rng);
  if (pairs.size() > 20) pairs.resize(20);

  const auto mk = oracle_factory();
  std::size_t agree = 0, total = 0;
  for (const auto& [sp, rb] : pairs) {
    // Template X: the description path without its suffix segment.
    auto x = sp->description.substr(0, sp->description.rfind(" / "));
    std::string words;
    for (const auto& part : split_on(x, '/')) words += (words.empty() ? "" : " ") + trim(part);
    for (const auto& [verb, want] : {std::pair{"set ", sp}, std::pair{"read ", rb}}) {
      ++total;
      auto b = mk();
      Selector s(*b);
      const auto r = find_hierarchical(verb + words, *db, s);
      if (r.channels == std::vector<std::string>{want->address}) ++agree;
    }
  }
  std::ostringstream d;
  d << agree << "/" << total << " set/read queries resolved to the matching suffix";
  report(6, total == 40 && agree == total, d.str());
}

// ---- 7 ---------------------------------------------------------------------------

void ontology_portability() {
  bool keys = true;
  std::ostringstream d;
  const auto mk = oracle_factory();
  for (const auto& g : {toy_graph_a(), toy_graph_b()}) {
    const auto store = build_graph(*g.db, g.mapping);
    auto b = mk();
    Selector s(*b);
    auto got = find_ontology("setting PVs for all magnets", store, default_templates(store), s).channels;
    std::sort(got.begin(), got.end());
    keys = keys && !g.magnet_setpoints.empty() && got == g.magnet_setpoints;
    d << g.db->name() << " " << got.size() << "/" << g.magnet_setpoints.size() << " ";
  }
  std::mt19937_64 rng(2024);
  std::size_t agree = 0, queries = 0;
  for (int i = 0; i < 200; ++i) {
    const auto store = t::random_graph(rng, 30);
    for (int k = 0; k < 5; ++k) {
      const auto q = parse_query(t::random_query(rng));
      const auto got = evaluate(q, store);
      ++queries;
      agree += t::Rows(got.rows.begin(), got.rows.end()) == t::brute_force(q, store);
    }
  }
  d << "; closure evaluator agrees with brute force on " << agree << "/" << queries << " queries over 200 graphs";
  report(7, keys && agree == queries, d.str());
}

// ---- 8 ---------------------------------------------------------------------------

void determinism() {
  const auto syn = default_synonyms();
  const auto ucsb = load_database_file(t::data_path("ucsb_fel.yaml"));
  const auto space = std::make_shared<AddressSpace>(load_database(explorer_config()));
  const auto ml = std::make_shared<MiddleLayer>(make_middle_layer(1));
  auto run = [&](const std::string& paradigm, std::size_t parallel) {
    BenchConfig cfg;
    cfg.paradigm = paradigm;
    cfg.make_backend = oracle_factory();
    cfg.parallelism = parallel;
    CaseSuite suite;
    if (paradigm == "direct") {
      suite = generate_synthetic_benchmark(*ucsb, 30, 8, Difficulty::kAdversarial, syn);
      cfg.finder = [&](const std::string& q, Selector& s) { return find_direct(q, *ucsb, s); };
    } else if (paradigm == "explore") {
      suite = generate_synthetic_benchmark(space->db(), 60, 8, Difficulty::kAdversarial, syn);
      cfg.finder = [&](const std::string& q, Selector& s) { return find_explorer(q, *space, s); };
    } else {
      suite = generate_mml_benchmark(ml->tree, 104, 8, Difficulty::kAdversarial, syn);
      cfg.finder = [&](const std::string& q, Selector& s) { return find_middle_layer(q, *ml, s); };
    }
    cfg.synthetic = suite.synthetic;
    return to_json(suite).dump(2) + to_json(run_benchmark(suite.cases, cfg)).dump(2);
  };
  bool ok = true;
  std::ostringstream d;
  for (const char* p : {"direct", "explore", "mml"}) {
    const auto a = run(p, 1), b = run(p, 1), c = run(p, 4);
    const bool same = a == b && a == c;
    ok = ok && same;
    d << p << (same ? " identical" : " DIFFERS") << " (" << a.size() << " bytes) ";
  }
  report(8, ok, "reruns and 4-way parallel runs: " + d.str());
}

// ---- 9 ---------------------------------------------------------------------------

void wire_protocol() {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(t::data_path("llm")))
    if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  bool ok = !files.empty();
  bool saw_malformed = false;
  std::ostringstream d;
  for (const auto& f : files) {
    const auto fx = t::load_wire_fixture(f.string());
    const auto problem = t::check_wire_fixture(fx);
    if (f.filename() == "malformed.json")
      saw_malformed = fx.expected.value("error", std::string()) == "SchemaViolationAfterRetry";
    ok = ok && problem.empty();
    d << f.stem().string() << (problem.empty() ? " ok " : " [" + problem + "] ");
  }
  report(9, ok && saw_malformed, d.str());
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> criteria = {expansion_counts,  zero_hallucination, call_count_bound,
                                                       benchmark_floors,  fuzzy_ranking,      suffix_semantics,
                                                       ontology_portability, determinism,     wire_protocol};
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    try {
      criteria[i]();
    } catch (const std::exception& e) {
      report(static_cast<int>(i + 1), false, std::string("threw ") + e.what());
    }
  }
  return failures == 0 ? 0 : 1;
}
