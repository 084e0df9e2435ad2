// chanfind: command-line front end over the four channel-finding paradigms.
// Exit status: 0 ok, 2 abstained, 1 error.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "chanfind/chanfind.hpp"
#include "chanfind/http_transport.hpp"

using namespace chanfind;

namespace {

struct Globals {
  std::string config;
  std::string backend = "oracle";
  bool json_out = false;
  bool trace = false;
  int budget = Selector::kDefaultBudget;
};

struct Sources {
  std::string db, tree, keywords, examples, graph, mapping, synonyms;
};

void add_sources(CLI::App* app, Sources& s, bool db, bool mml, bool graph) {
  if (db) app->add_option("--db", s.db, "channel database (YAML or JSON)");
  if (mml) {
    app->add_option("--tree", s.tree, "middle-layer tree");
    app->add_option("--keywords", s.keywords, "domain keyword map");
    app->add_option("--examples", s.examples, "worked example library");
  }
  if (graph) {
    app->add_option("--graph", s.graph, "triple file");
    app->add_option("--mapping", s.mapping, "channel-to-graph mapping (with --db)");
  }
  app->add_option("--synonyms", s.synonyms, "synonym table for the oracle glossary");
}

Workspace build_workspace(const Globals& g, const Sources& s) {
  json cfg = json::object();
  std::filesystem::path base;
  if (!g.config.empty()) {
    cfg = load_document_file(g.config);
    base = std::filesystem::path(g.config).parent_path();
  }
  // Command-line paths are relative to the working directory, not the config.
  auto set = [&](const char* key, const std::string& v) {
    if (!v.empty()) cfg[key] = std::filesystem::absolute(v).string();
  };
  set("database", s.db);
  set("mml", s.tree);
  set("keywords", s.keywords);
  set("examples", s.examples);
  set("graph", s.graph);
  set("mapping", s.mapping);
  set("synonyms", s.synonyms);
  cfg["budget"] = g.budget;
  return load_workspace(cfg, base);
}

BackendFactory backend_factory(const Globals& g, const Workspace& ws) {
  if (g.backend == "oracle") return ws.oracle_factory();
  if (g.backend == "llm") {
    auto transport = std::make_shared<HttpTransport>();
    const auto cfg = LlmConfig::from_env();
    return [transport, cfg] { return std::unique_ptr<SelectorBackend>(new RemoteLlmBackend(cfg, transport)); };
  }
  throw ConfigError("unknown backend '" + g.backend + "' (oracle|llm)");
}

int emit(const FinderResult& r, const Workspace& ws, const Globals& g) {
  if (g.json_out) {
    json j = {{"channels", r.channels},
              {"abstained", r.abstained},
              {"selector_calls", r.selector_calls},
              {"rejected", r.rejected},
              {"warnings", r.warnings}};
    if (g.trace) j["trace"] = r.trace;
    std::cout << j.dump(2) << "\n";
  } else {
    print_result(std::cout, r, ws, g.trace);
  }
  return r.abstained ? kExitAbstain : kExitOk;
}

int find_once(Paradigm p, const std::string& query, const Globals& g, const Workspace& ws) {
  auto finder = make_finder(p, ws);
  auto backend = backend_factory(g, ws)();
  Selector selector(*backend, g.budget);
  return emit(finder(query, selector), ws, g);
}

void write_out(const std::string& path, const json& doc) {
  const std::string text = doc.dump(2) + "\n";
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_file(path, text);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chanfind: natural-language channel finding over control-system databases"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "workspace config (database, mml, graph, ...)");
  app.add_option("--backend", g.backend, "oracle|llm")->check(CLI::IsMember({"oracle", "llm"}));
  app.add_flag("--json", g.json_out, "machine-readable output");
  app.add_flag("--trace", g.trace, "print the paradigm trace");
  app.add_option("--budget", g.budget, "selector call budget per query")->check(CLI::PositiveNumber);

  std::string query;
  Sources src;
  std::size_t k = 5;
  std::string sparql;

  auto* direct = app.add_subcommand("direct", "match against the whole inventory at once");
  direct->add_option("--query", query)->required();
  add_sources(direct, src, true, false, false);

  auto* tree = app.add_subcommand("tree", "navigate the naming hierarchy level by level");
  tree->add_option("--query", query)->required();
  add_sources(tree, src, true, false, false);

  auto* explore = app.add_subcommand("explore", "explore four-part addresses with tools");
  explore->add_option("--query", query)->required();
  explore->add_option("--k", k, "fuzzy guess size")->check(CLI::PositiveNumber);
  add_sources(explore, src, true, false, false);

  auto* mml = app.add_subcommand("mml", "walk a middle-layer system/family/field tree");
  mml->add_option("--query", query)->required();
  add_sources(mml, src, false, true, false);

  auto* onto = app.add_subcommand("onto", "query a channel graph");
  auto* onto_q = onto->add_option("--query", query);
  onto->add_option("--sparql", sparql, "run a query in the supported subset directly")->excludes(onto_q);
  add_sources(onto, src, true, false, true);

  std::string cases_file, paradigm_name = "direct", report_file;
  std::size_t parallel = 1;
  bool timing = false;
  auto* bench = app.add_subcommand("bench", "run a benchmark suite");
  bench->add_option("--cases", cases_file)->required();
  bench->add_option("--paradigm", paradigm_name)->check(CLI::IsMember({"direct", "tree", "explore", "mml", "onto"}));
  bench->add_option("--report", report_file, "report output (default stdout)");
  bench->add_option("--parallel", parallel)->check(CLI::PositiveNumber);
  bench->add_flag("--timing", timing, "include wall times (breaks byte-identical reruns)");
  add_sources(bench, src, true, true, true);

  std::string prefix;
  auto* inspect_cmd = app.add_subcommand("inspect", "print a subtree with channel counts");
  inspect_cmd->add_option("--prefix", prefix, "VALUE/VALUE/... (default: root)");
  add_sources(inspect_cmd, src, true, false, false);

  auto* repl = app.add_subcommand("repl", "interactive session");
  repl->add_option("--paradigm", paradigm_name)->check(CLI::IsMember({"direct", "tree", "explore", "mml", "onto"}));
  add_sources(repl, src, true, true, true);

  std::string kind, out_file, difficulty = "verbatim";
  int scale = 1;
  std::size_t n = 30;
  std::uint64_t seed = 1;
  auto* gen = app.add_subcommand("gen", "generate synthetic databases and suites");
  gen->add_option("kind", kind,
                  "six-level|explorer|mml|keywords|examples|synonyms|toy-a|toy-a-mapping|toy-b|toy-b-mapping|graph-a|graph-b|suite|mml-suite")
      ->required();
  gen->add_option("--out", out_file, "output file (default stdout)");
  gen->add_option("--scale", scale)->check(CLI::PositiveNumber);
  gen->add_option("--n", n)->check(CLI::PositiveNumber);
  gen->add_option("--seed", seed);
  gen->add_option("--difficulty", difficulty)->check(CLI::IsMember({"verbatim", "paraphrase", "adversarial"}));
  add_sources(gen, src, true, true, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      const SynonymTable syn = src.synonyms.empty() ? default_synonyms() : load_synonyms(load_document_file(src.synonyms));
      json doc;
      if (kind == "six-level") {
        doc = six_level_config(scale);
      } else if (kind == "explorer") {
        doc = explorer_config();
      } else if (kind == "mml") {
        doc = mml_config(scale);
      } else if (kind == "keywords") {
        doc = mml_keyword_config();
      } else if (kind == "examples") {
        doc = mml_examples_config(src.tree.empty() ? load_mml(mml_config(scale)) : load_mml_file(src.tree));
      } else if (kind == "synonyms") {
        doc = synonyms_to_json(default_synonyms());
      } else if (kind == "toy-a") {
        doc = toy_graph_a_config();
      } else if (kind == "toy-a-mapping") {
        doc = toy_graph_a_mapping();
      } else if (kind == "toy-b") {
        doc = toy_graph_b_tree();
      } else if (kind == "toy-b-mapping") {
        doc = toy_graph_b_mapping();
      } else if (kind == "graph-a" || kind == "graph-b") {
        const auto tg = kind == "graph-a" ? toy_graph_a() : toy_graph_b();
        const std::string text = serialize_triples(build_graph(*tg.db, tg.mapping));
        if (out_file.empty()) {
          std::cout << text;
        } else {
          write_file(out_file, text);
        }
        return kExitOk;
      } else if (kind == "suite" || kind == "mml-suite") {
        const auto d = parse_difficulty(difficulty);
        CaseSuite suite;
        if (kind == "mml-suite") {
          if (src.tree.empty()) throw ConfigError("mml-suite needs --tree");
          suite = generate_mml_benchmark(load_mml_file(src.tree), n, seed, d, syn);
        } else {
          if (src.db.empty()) throw ConfigError("suite needs --db");
          suite = generate_synthetic_benchmark(*load_database_file(src.db), n, seed, d, syn);
        }
        doc = to_json(suite);
      } else {
        throw ConfigError("unknown gen kind '" + kind + "'");
      }
      write_out(out_file, doc);
      return kExitOk;
    }

    const Workspace ws = [&] {
      auto w = build_workspace(g, src);
      w.k = k;
      return w;
    }();

    if (*direct) return find_once(Paradigm::kDirect, query, g, ws);
    if (*tree) return find_once(Paradigm::kTree, query, g, ws);
    if (*explore) return find_once(Paradigm::kExplore, query, g, ws);
    if (*mml) return find_once(Paradigm::kMml, query, g, ws);
    if (*onto) {
      if (!sparql.empty()) {
        if (!ws.graph) throw ConfigError("--sparql needs --graph or --db with --mapping");
        const auto table = run_query(sparql, *ws.graph);
        if (g.json_out) {
          std::cout << json({{"vars", table.vars}, {"rows", table.rows}, {"warnings", table.warnings}}).dump(2) << "\n";
        } else {
          std::cout << join(table.vars, "\t") << "\n";
          for (const auto& row : table.rows) std::cout << join(row, "\t") << "\n";
          for (const auto& w : table.warnings) std::cerr << "warning: " << w << "\n";
        }
        return table.rows.empty() ? kExitAbstain : kExitOk;
      }
      if (query.empty()) throw ConfigError("onto needs --query or --sparql");
      return find_once(Paradigm::kOnto, query, g, ws);
    }
    if (*bench) {
      const auto suite = load_cases(load_document_file(cases_file));
      BenchConfig cfg;
      cfg.paradigm = paradigm_name;
      cfg.finder = make_finder(parse_paradigm(paradigm_name), ws);
      cfg.make_backend = backend_factory(g, ws);
      cfg.call_budget = g.budget;
      cfg.parallelism = parallel;
      cfg.synthetic = suite.synthetic;
      const auto report = run_benchmark(suite.cases, cfg);
      write_out(report_file, to_json(report, timing));
      if (!report_file.empty())
        std::cerr << report.correct_count() << "/" << report.per_case.size() << " correct\n";
      return kExitOk;
    }
    if (*inspect_cmd) {
      if (!ws.db) throw ConfigError("inspect needs --db");
      inspect(*ws.db, prefix, std::cout);
      return kExitOk;
    }
    if (*repl) {
      ReplOptions opt;
      opt.paradigm = parse_paradigm(paradigm_name);
      opt.trace = g.trace;
      opt.backend_name = g.backend;
      return run_repl(std::cin, std::cout, ws, backend_factory(g, ws), opt);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.kind() << ": " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitOk;
}
