#pragma once

// Tool-using exploration of a four-part compositional address space
// (facility/device/location/property). A reason-act loop first tries a fuzzy
// guess; when the guess is not convincing it lists components level by level.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "chanfind/channel_db.hpp"
#include "chanfind/finder.hpp"
#include "chanfind/selector.hpp"

namespace chanfind {

enum class Component { kFacility = 0, kDevice = 1, kLocation = 2, kProperty = 3 };

inline std::string to_string(Component c) {
  static const char* kNames[] = {"facility", "device", "location", "property"};
  return kNames[static_cast<int>(c)];
}

inline Component parse_component(const std::string& s) {
  for (int i = 0; i < 4; ++i)
    if (to_string(static_cast<Component>(i)) == s) return static_cast<Component>(i);
  throw InvalidRequest("unknown address component '" + s + "'");
}

struct ComponentEntry {
  std::string value;
  std::string description;
  friend bool operator==(const ComponentEntry&, const ComponentEntry&) = default;
};

struct AddressParts {
  std::string facility, device, location, property;
  const std::string& at(Component c) const {
    switch (c) {
      case Component::kFacility: return facility;
      case Component::kDevice: return device;
      case Component::kLocation: return location;
      case Component::kProperty: return property;
    }
    return property;
  }
};

struct GuessHints {
  std::optional<std::string> facility, device, location;
  std::string property;
};

struct GuessWeights {
  double property = 1.0;
  double facility = 0.25;
  double device = 0.25;
  double location = 0.25;
};

struct ScoredAddress {
  std::string address;
  double score = 0.0;
};

// Component view over a database whose schema has exactly the four levels.
class AddressSpace {
 public:
  explicit AddressSpace(DatabasePtr db) : db_(std::move(db)) {
    const auto& levels = db_->schema().levels();
    if (levels.size() != 4) throw SchemaError("compositional address space needs exactly four levels");
    for (int i = 0; i < 4; ++i) level_names_[i] = levels[static_cast<std::size_t>(i)].name;
    for (const auto& root : db_->roots()) index(root, {});
    rows_.reserve(db_->size());
    for (const auto& r : db_->records()) {
      if (r.path.size() != 4) throw SchemaError("address '" + r.address + "' is not four-part");
      Row row;
      for (int i = 0; i < 4; ++i) {
        row.parts[i] = r.path[static_cast<std::size_t>(i)].value;
        row.text[i] = row.parts[i] + " " + describe(i, r.path, r.description);
      }
      row.address = r.address;
      rows_.push_back(std::move(row));
    }
  }

  const ChannelDatabase& db() const { return *db_; }
  DatabasePtr db_ptr() const { return db_; }

  // Distinct components at `level`; every higher level must be fixed in filters.
  std::vector<ComponentEntry> list_components(Component level,
                                              const std::map<Component, std::string>& filters = {}) const {
    const int li = static_cast<int>(level);
    for (const auto& [c, v] : filters) {
      if (static_cast<int>(c) >= li)
        throw InvalidRequest("filter on " + to_string(c) + " is not above " + to_string(level));
      if (db_->with_level(level_names_[static_cast<int>(c)], v).empty())
        throw UnknownComponent(to_string(c) + " '" + v + "' does not exist");
    }
    for (int i = 0; i < li; ++i)
      if (!filters.count(static_cast<Component>(i)))
        throw InvalidRequest("listing " + to_string(level) + " needs the " + to_string(static_cast<Component>(i)));
    std::map<std::string, std::string> found;
    for (const auto& row : rows_) {
      bool ok = true;
      for (const auto& [c, v] : filters) ok = ok && row.parts[static_cast<int>(c)] == v;
      if (!ok) continue;
      found.emplace(row.parts[li], component_description(li, row));
    }
    std::vector<ComponentEntry> out;
    for (auto& [v, d] : found) out.push_back({v, d});
    return out;
  }

  std::optional<std::string> compose_address(const AddressParts& parts) const {
    Path p;
    for (int i = 0; i < 4; ++i) p.push_back({level_names_[i], parts.at(static_cast<Component>(i))});
    for (const auto& el : p)
      if (el.value.empty()) return std::nullopt;
    const std::string addr = db_->schema().assemble(p);
    if (!db_->contains(addr)) return std::nullopt;
    return addr;
  }

  // Weighted lexical score over every address, top-k by (score desc, address asc).
  std::vector<ScoredAddress> guess_addresses(const GuessHints& hints, std::size_t k,
                                             const GuessWeights& w = {}) const {
    if (trim(hints.property).empty()) throw EmptyHints("guess_addresses needs a property hint");
    std::vector<ScoredAddress> all;
    all.reserve(rows_.size());
    for (const auto& row : rows_) all.push_back({row.address, score(row, hints, w)});
    std::sort(all.begin(), all.end(), [](const ScoredAddress& a, const ScoredAddress& b) {
      return a.score != b.score ? a.score > b.score : a.address < b.address;
    });
    if (all.size() > k) all.resize(k);
    return all;
  }

  std::optional<AddressParts> split(const std::string& address) const {
    const auto* r = db_->find(address);
    if (!r) return std::nullopt;
    return AddressParts{r->path[0].value, r->path[1].value, r->path[2].value, r->path[3].value};
  }

  const std::string& level_name(Component c) const { return level_names_[static_cast<int>(c)]; }

 private:
  struct Row {
    std::string parts[4];
    std::string text[4];  // value + component description, what hints match against
    std::string address;
  };

  static double score(const Row& row, const GuessHints& h, const GuessWeights& w) {
    double s = w.property * lexical_score(h.property, row.text[3]);
    if (h.facility) s += w.facility * lexical_score(*h.facility, row.text[0]);
    if (h.device) s += w.device * lexical_score(*h.device, row.text[1]);
    if (h.location) s += w.location * lexical_score(*h.location, row.text[2]);
    return s;
  }

  void index(const TreeNode& n, std::vector<std::string> prefix) {
    prefix.push_back(n.value);
    node_descriptions_[prefix] = n.description;
    for (const auto& c : n.children) index(c, prefix);
  }

  // Description of component i for the record at `path`. Falls back to the
  // i-th " / " segment of the record description for flat inventories.
  std::string describe(int i, const Path& path, const std::string& record_description) const {
    std::vector<std::string> prefix;
    for (int j = 0; j <= i; ++j) prefix.push_back(path[static_cast<std::size_t>(j)].value);
    auto it = node_descriptions_.find(prefix);
    if (it != node_descriptions_.end()) return it->second;
    std::vector<std::string> segs;
    std::size_t pos = 0;
    while (true) {
      auto next = record_description.find(" / ", pos);
      segs.push_back(record_description.substr(pos, next == std::string::npos ? std::string::npos : next - pos));
      if (next == std::string::npos) break;
      pos = next + 3;
    }
    return segs.size() == 4 ? segs[static_cast<std::size_t>(i)] : std::string();
  }

  std::string component_description(int i, const Row& row) const {
    const auto& t = row.text[i];
    return t.size() > row.parts[i].size() ? t.substr(row.parts[i].size() + 1) : std::string();
  }

  DatabasePtr db_;
  std::string level_names_[4];
  std::map<std::vector<std::string>, std::string> node_descriptions_;
  std::vector<Row> rows_;
};

struct ExplorerConfig {
  std::size_t k = 5;
  GuessWeights weights;
  double accept_score = 0.6;   // top-1 score needed to accept a guess
  double accept_margin = 0.1;  // and its lead over rank 2
  int max_iterations = 20;
  bool decompose = true;
  bool allow_abstain = true;
};

struct AgentStep {
  std::string thought;
  std::string tool;  // tool name, or "finish"
  nlohmann::json arguments;
  nlohmann::json observation;
};

struct ExplorationTrace {
  std::vector<AgentStep> steps;
  std::optional<std::string> address;
  std::string outcome;  // "guess", "descent", "abstain", "iteration-limit"

  int tool_calls() const {
    return static_cast<int>(std::count_if(steps.begin(), steps.end(), [](const AgentStep& s) { return s.tool != "finish"; }));
  }
};

namespace explorer_detail {

class Loop {
 public:
  Loop(const AddressSpace& space, Selector& selector, const ExplorerConfig& cfg, std::string query)
      : space_(space), selector_(selector), cfg_(cfg), query_(std::move(query)) {}

  ExplorationTrace run() {
    try {
      run_inner();
    } catch (const IterationLimitExceeded&) {
      trace_.outcome = "iteration-limit";
      trace_.address.reset();
    }
    return std::move(trace_);
  }

 private:
  void tick() {
    if (static_cast<int>(trace_.steps.size()) >= cfg_.max_iterations)
      throw IterationLimitExceeded("exploration exceeded " + std::to_string(cfg_.max_iterations) + " steps");
  }

  std::vector<ComponentEntry> list(Component level, const std::map<Component, std::string>& filters) {
    tick();
    auto entries = space_.list_components(level, filters);
    nlohmann::json args = {{"level", to_string(level)}};
    for (const auto& [c, v] : filters) args[to_string(c)] = v;
    nlohmann::json obs = nlohmann::json::array();
    for (const auto& e : entries) obs.push_back({{"value", e.value}, {"description", e.description}});
    const std::string why = level == Component::kFacility ? "identify the facility first"
                            : "narrow the " + to_string(level) + " under " + join_values(filters);
    trace_.steps.push_back({why, "list_components", args, obs});
    return entries;
  }

  static std::string join_values(const std::map<Component, std::string>& filters) {
    std::vector<std::string> v;
    for (const auto& [c, x] : filters) v.push_back(x);
    return join(v, "/");
  }

  std::optional<std::string> pick(Component level, const std::vector<ComponentEntry>& entries,
                                  const std::vector<std::string>& exclude = {}) {
    ChoiceRequest req;
    req.context = "Explore the address space of the control system. Pick the " + to_string(level) +
                  " that the query refers to.";
    req.query = query_;
    req.resolved = resolved_;
    req.allow_abstain = cfg_.allow_abstain;
    for (const auto& e : entries)
      if (std::find(exclude.begin(), exclude.end(), e.value) == exclude.end())
        req.options.push_back({e.value, e.value, e.description, false});
    if (req.options.empty()) return std::nullopt;
    auto resp = selector_.choose(req);
    if (resp.abstained || resp.selected.empty()) return std::nullopt;
    for (const auto& e : entries)
      if (e.value == resp.selected.front()) resolved_.push_back(e.value + " " + e.description);
    return resp.selected.front();
  }

  std::optional<std::string> compose(const AddressParts& parts) {
    tick();
    auto addr = space_.compose_address(parts);
    trace_.steps.push_back({"assemble and validate the candidate", "compose_address",
                            {{"facility", parts.facility},
                             {"device", parts.device},
                             {"location", parts.location},
                             {"property", parts.property}},
                            addr ? nlohmann::json(*addr) : nlohmann::json({{"error", "NotFound"}})});
    return addr;
  }

  void finish(std::optional<std::string> address, const std::string& outcome) {
    tick();
    trace_.address = std::move(address);
    trace_.outcome = trace_.address ? outcome : "abstain";
    trace_.steps.push_back({trace_.address ? "validated address found" : "nothing fits; abstain", "finish",
                            nlohmann::json::object(),
                            trace_.address ? nlohmann::json(*trace_.address) : nlohmann::json(nullptr)});
  }

  void run_inner() {
    const auto facilities = list(Component::kFacility, {});
    const auto facility = pick(Component::kFacility, facilities);
    if (!facility) return finish(std::nullopt, "abstain");

    // Fuzzy guess with the remaining query text as every hint: content words
    // not already spent on the facility.
    const auto spent = token_set(resolved_.empty() ? *facility : resolved_.back());
    std::string rest;
    for (const auto& t : content_tokens(query_))
      if (!spent.count(t)) rest += (rest.empty() ? "" : " ") + t;
    if (rest.empty()) rest = query_;
    GuessHints hints;
    hints.facility = *facility;
    hints.device = rest;
    hints.location = rest;
    hints.property = rest;
    tick();
    const auto guesses = space_.guess_addresses(hints, cfg_.k, cfg_.weights);
    nlohmann::json obs = nlohmann::json::array();
    for (const auto& g : guesses) obs.push_back({{"address", g.address}, {"score", g.score}});
    trace_.steps.push_back({"try a fuzzy top-k guess before descending", "guess_addresses",
                            {{"facility", *facility}, {"device", rest}, {"location", rest}, {"property", rest}, {"k", cfg_.k}},
                            obs});
    if (!guesses.empty() && guesses[0].score >= cfg_.accept_score &&
        (guesses.size() == 1 || guesses[0].score - guesses[1].score >= cfg_.accept_margin - 1e-9)) {
      if (auto parts = space_.split(guesses[0].address)) {
        if (auto addr = compose(*parts)) return finish(addr, "guess");
      }
    }

    // Systematic descent.
    AddressParts parts;
    parts.facility = *facility;
    std::map<Component, std::string> filters = {{Component::kFacility, *facility}};
    for (Component level : {Component::kDevice, Component::kLocation, Component::kProperty}) {
      const auto entries = list(level, filters);
      const auto choice = pick(level, entries);
      if (!choice) return finish(std::nullopt, "abstain");
      filters[level] = *choice;
      switch (level) {
        case Component::kDevice: parts.device = *choice; break;
        case Component::kLocation: parts.location = *choice; break;
        default: parts.property = *choice; break;
      }
    }
    auto addr = compose(parts);
    finish(addr, "descent");
  }

  const AddressSpace& space_;
  Selector& selector_;
  const ExplorerConfig& cfg_;
  std::string query_;
  std::vector<std::string> resolved_;
  ExplorationTrace trace_;
};

}  // namespace explorer_detail

inline ExplorationTrace explore_address(const std::string& query, const AddressSpace& space, Selector& selector,
                                        const ExplorerConfig& cfg = {}) {
  return explorer_detail::Loop(space, selector, cfg, query).run();
}

inline nlohmann::json to_json(const ExplorationTrace& t) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : t.steps) steps.push_back({{"thought", s.thought}, {"tool", s.tool}, {"arguments", s.arguments}, {"observation", s.observation}});
  return {{"steps", steps},
          {"tool_calls", t.tool_calls()},
          {"outcome", t.outcome},
          {"address", t.address ? nlohmann::json(*t.address) : nlohmann::json(nullptr)}};
}

inline FinderResult find_explorer(const std::string& query, const AddressSpace& space, Selector& selector,
                                  const ExplorerConfig& cfg = {}) {
  FinderResult result;
  const auto subs = cfg.decompose ? selector.decompose(query) : std::vector<std::string>{trim(query)};
  auto traces = run_indexed(subs.size(), [&](std::size_t i) { return explore_address(subs[i], space, selector, cfg); });
  nlohmann::json tj = nlohmann::json::array();
  for (std::size_t i = 0; i < subs.size(); ++i) {
    SubQueryResult s{subs[i], {}, !traces[i].address, traces[i].outcome};
    if (traces[i].address) {
      auto check = validate_channels({*traces[i].address}, space.db());
      s.channels = check.valid;
      result.rejected.insert(result.rejected.end(), check.invalid.begin(), check.invalid.end());
    }
    if (traces[i].outcome == "iteration-limit") result.warnings.push_back("sub-query '" + subs[i] + "' hit the step limit");
    result.subqueries.push_back(std::move(s));
    auto j = to_json(traces[i]);
    j["subquery"] = subs[i];
    tj.push_back(std::move(j));
  }
  aggregate(result);
  result.selector_calls = selector.calls_used();
  result.trace = {{"paradigm", "explore"}, {"explorations", tj}};
  return result;
}

}  // namespace chanfind
