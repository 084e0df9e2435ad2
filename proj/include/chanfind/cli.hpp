#pragma once

// Pieces of the command-line front end that tests drive directly: workspace
// loading from a config document, finder construction per paradigm, result
// printing, subtree inspection and the line-oriented REPL.

#include <filesystem>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "chanfind/agent_explorer.hpp"
#include "chanfind/bench.hpp"
#include "chanfind/channel_db.hpp"
#include "chanfind/direct_lookup.hpp"
#include "chanfind/hierarchical_nav.hpp"
#include "chanfind/middle_layer.hpp"
#include "chanfind/ontology.hpp"
#include "chanfind/synthetic.hpp"

namespace chanfind {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitAbstain = 2;

inline Paradigm parse_paradigm(const std::string& s) {
  const auto l = to_lower(s);
  if (l == "direct") return Paradigm::kDirect;
  if (l == "tree") return Paradigm::kTree;
  if (l == "explore") return Paradigm::kExplore;
  if (l == "mml") return Paradigm::kMml;
  if (l == "onto") return Paradigm::kOnto;
  throw ConfigError("unknown paradigm '" + s + "' (direct|tree|explore|mml|onto)");
}

using BackendFactory = std::function<std::unique_ptr<SelectorBackend>()>;

struct Workspace {
  DatabasePtr db;
  std::shared_ptr<const AddressSpace> space;
  std::shared_ptr<const MiddleLayer> mml;
  std::shared_ptr<const TripleStore> graph;
  TemplateLibrary templates = default_templates();
  SynonymTable synonyms;
  int call_budget = Selector::kDefaultBudget;
  std::size_t k = 5;

  void set_db(DatabasePtr d) {
    db = std::move(d);
    space.reset();
    if (db && db->schema().depth() == 4 && db->has_tree()) space = std::make_shared<const AddressSpace>(db);
  }

  // Oracle backend with the synonym table and the db glossary applied.
  BackendFactory oracle_factory() const {
    OracleConfig cfg;
    cfg.glossary = Glossary::from_synonyms(synonyms);
    if (db) cfg.glossary.merge(db->glossary());
    return [cfg] { return std::unique_ptr<SelectorBackend>(new LexicalOracle(cfg)); };
  }

  const ChannelRecord* describe(const std::string& address) const {
    if (db)
      if (const auto* r = db->find(address)) return r;
    if (mml)
      if (const auto* r = mml->companion->find(address)) return r;
    return nullptr;
  }
};

// Config keys (paths relative to the config file): database, mml, keywords,
// examples, graph, mapping, synonyms; plus budget and k.
inline Workspace load_workspace(const json& cfg, const std::filesystem::path& base = {}) {
  auto path = [&](const char* key) -> std::optional<std::string> {
    if (!cfg.contains(key) || cfg.at(key).is_null()) return std::nullopt;
    std::filesystem::path p = cfg.at(key).get<std::string>();
    if (p.is_relative() && !base.empty()) p = base / p;
    return p.string();
  };
  Workspace ws;
  if (auto p = path("database")) ws.set_db(load_database_file(*p));
  if (auto p = path("synonyms")) ws.synonyms = load_synonyms(load_document_file(*p));
  if (auto p = path("mml")) {
    KeywordMap km;
    std::vector<ExampleEntry> ex;
    if (auto k = path("keywords")) km = load_keyword_map(load_document_file(*k));
    if (auto e = path("examples")) ex = load_examples(load_document_file(*e));
    ws.mml = std::make_shared<const MiddleLayer>(load_mml_file(*p), std::move(km), std::move(ex));
  }
  if (auto p = path("graph")) {
    ws.graph = std::make_shared<const TripleStore>(parse_triples(read_file(*p)));
  } else if (auto m = path("mapping")) {
    if (!ws.db) throw ConfigError("a graph mapping needs a database");
    ws.graph = std::make_shared<const TripleStore>(build_graph(*ws.db, load_mapping(load_document_file(*m))));
  }
  if (ws.graph) ws.templates = default_templates(*ws.graph);
  ws.call_budget = get_or<int>(cfg, "budget", ws.call_budget);
  ws.k = static_cast<std::size_t>(get_or<int>(cfg, "k", static_cast<int>(ws.k)));
  return ws;
}

inline Workspace load_workspace_file(const std::string& file) {
  return load_workspace(load_document_file(file), std::filesystem::path(file).parent_path());
}

inline FinderFn make_finder(Paradigm p, const Workspace& ws) {
  switch (p) {
    case Paradigm::kDirect:
      if (!ws.db) throw ConfigError("direct lookup needs a database");
      return [db = ws.db](const std::string& q, Selector& s) { return find_direct(q, *db, s); };
    case Paradigm::kTree:
      if (!ws.db) throw ConfigError("tree navigation needs a database");
      return [db = ws.db](const std::string& q, Selector& s) { return find_hierarchical(q, *db, s); };
    case Paradigm::kExplore: {
      if (!ws.space) throw ConfigError("exploration needs a four-level database");
      ExplorerConfig cfg;
      cfg.k = ws.k;
      return [space = ws.space, cfg](const std::string& q, Selector& s) { return find_explorer(q, *space, s, cfg); };
    }
    case Paradigm::kMml:
      if (!ws.mml) throw ConfigError("middle-layer search needs an mml tree");
      return [ml = ws.mml](const std::string& q, Selector& s) { return find_middle_layer(q, *ml, s); };
    case Paradigm::kOnto:
      if (!ws.graph) throw ConfigError("graph search needs a graph or a mapping");
      return [g = ws.graph, lib = ws.templates, db = ws.db](const std::string& q, Selector& s) {
        return find_graph(q, *g, lib, db.get(), s);
      };
  }
  throw ConfigError("unknown paradigm");
}

inline void print_result(std::ostream& out, const FinderResult& r, const Workspace& ws, bool trace) {
  if (r.channels.empty()) {
    out << "(abstained)";
    for (const auto& s : r.subqueries)
      if (!s.note.empty()) out << " " << s.note;
    out << "\n";
  }
  for (const auto& c : r.channels) {
    out << "  " << c;
    if (const auto* rec = ws.describe(c)) out << "  " << rec->description;
    out << "\n";
  }
  for (const auto& w : r.warnings) out << "  warning: " << w << "\n";
  if (trace) out << r.trace.dump(2) << "\n";
}

// ---- inspect ------------------------------------------------------------------

namespace cli_detail {

inline std::size_t count_channels(const TreeNode& n) {
  std::size_t c = n.is_channel ? 1 : 0;
  for (const auto& k : n.children) c += count_channels(k);
  return c;
}

inline void print_record(std::ostream& out, const ChannelRecord& r) {
  out << r.address << "\n  description: " << r.description << "\n";
  if (r.name) out << "  name: " << *r.name << "\n";
  out << "  role: " << to_string(r.suffix_role) << "\n";
  for (const auto& [k, v] : r.metadata) out << "  " << k << ": " << v << "\n";
}

}  // namespace cli_detail

// Prefix is "VAC/GCT/..." by node value ("" or "/" for the root).
inline void inspect(const ChannelDatabase& db, const std::string& prefix, std::ostream& out) {
  std::vector<std::string> parts;
  for (auto& p : split_on(prefix, '/'))
    if (!p.empty()) parts.push_back(p);
  if (!db.has_tree()) {
    if (parts.empty()) {
      out << db.name() << ": " << db.size() << " channels (flat)\n";
      return;
    }
    const auto* r = db.find(prefix);
    if (!r) throw UnknownPrefix("no channel '" + prefix + "'");
    cli_detail::print_record(out, *r);
    return;
  }
  const std::vector<TreeNode>* level = &db.roots();
  const TreeNode* node = nullptr;
  for (const auto& p : parts) {
    auto it = std::find_if(level->begin(), level->end(), [&](const TreeNode& n) { return n.value == p; });
    if (it == level->end()) throw UnknownPrefix("no node '" + p + "' under '" + (node ? node->value : std::string("/")) + "'");
    node = &*it;
    level = &node->children;
  }
  if (node && node->children.empty()) {
    cli_detail::print_record(out, *db.find(node->address));
    return;
  }
  std::size_t total = 0;
  if (node) {
    total = cli_detail::count_channels(*node);
    out << node->level << " " << node->value << "  " << node->description << "  [" << total << "]\n";
  } else {
    for (const auto& r : *level) total += cli_detail::count_channels(r);
    out << (db.name().empty() ? std::string("database") : db.name()) << "  [" << total << "]\n";
  }
  for (const auto& c : *level)
    out << "  " << c.level << " " << c.value << "  " << c.description << "  [" << cli_detail::count_channels(c) << "]"
        << (c.is_channel ? " *" : "") << "\n";
  out << "total " << total << "\n";
}

// ---- REPL -------------------------------------------------------------------------

struct ReplOptions {
  Paradigm paradigm = Paradigm::kDirect;
  bool trace = false;
  std::string backend_name = "oracle";
};

// Single-threaded; never touches the workspace beyond reading it.
inline int run_repl(std::istream& in, std::ostream& out, const Workspace& ws, const BackendFactory& make_backend,
                    ReplOptions opt = {}) {
  out << "chanfind repl (" << to_string(opt.paradigm) << ", " << opt.backend_name
      << "). Commands: :paradigm <name>, :trace on|off, :quit\n";
  std::string line;
  while (true) {
    out << "[" << to_string(opt.paradigm) << "]> ";
    if (!std::getline(in, line)) break;
    line = trim(line);
    out << line << "\n";
    if (line.empty()) continue;
    if (line == ":quit" || line == ":q") break;
    if (line.rfind(":paradigm", 0) == 0) {
      try {
        opt.paradigm = parse_paradigm(trim(line.substr(9)));
        out << "paradigm " << to_string(opt.paradigm) << "\n";
      } catch (const Error& e) {
        out << "error: " << e.what() << "\n";
      }
      continue;
    }
    if (line.rfind(":trace", 0) == 0) {
      const auto arg = trim(line.substr(6));
      opt.trace = arg.empty() ? !opt.trace : arg == "on";
      out << "trace " << (opt.trace ? "on" : "off") << "\n";
      continue;
    }
    if (line.front() == ':') {
      out << "error: unknown command " << line << "\n";
      continue;
    }
    try {
      auto finder = make_finder(opt.paradigm, ws);
      auto backend = make_backend();
      Selector selector(*backend, ws.call_budget);
      print_result(out, finder(line, selector), ws, opt.trace);
    } catch (const Error& e) {
      out << "error: " << e.kind() << ": " << e.what() << "\n";
    }
  }
  out << "\n";
  return kExitOk;
}

}  // namespace chanfind
