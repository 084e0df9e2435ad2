#pragma once

// Functional middle-layer hierarchy (system -> family -> field -> channels
// with device indices) exposed through a closed set of read-only tools, plus
// keyword domain detection and a tagged example library for agent prompts.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "chanfind/channel_db.hpp"
#include "chanfind/document.hpp"
#include "chanfind/finder.hpp"
#include "chanfind/selector.hpp"

namespace chanfind {

struct MmlDevice {
  int element = 0;  // position in the family's device ordering
  int sector = 0;
  int number = 0;   // device number within the sector
};

struct MmlField {
  std::string name;
  std::string description;
  std::vector<std::string> addresses;  // aligned with the family's devices
};

struct MmlFamily {
  std::string name;
  std::string description;
  std::vector<MmlDevice> devices;
  std::vector<MmlField> fields;
};

struct MmlSystem {
  std::string name;
  std::string description;
  std::vector<MmlFamily> families;
};

struct MmlChannel {
  std::string address;
  MmlDevice device;
};

class MmlTree {
 public:
  MmlTree() = default;
  MmlTree(std::string name, std::vector<MmlSystem> systems) : name_(std::move(name)), systems_(std::move(systems)) {
    std::set<std::string> seen;
    for (const auto& s : systems_)
      for (const auto& f : s.families)
        for (const auto& fld : f.fields) {
          if (fld.addresses.size() != f.devices.size())
            throw SchemaError(s.name + "/" + f.name + "/" + fld.name + ": address count does not match device count");
          for (const auto& a : fld.addresses)
            if (!seen.insert(a).second) throw DuplicateAddress("duplicate address '" + a + "'");
        }
  }

  const std::string& name() const { return name_; }
  const std::vector<MmlSystem>& systems() const { return systems_; }

  const MmlSystem& system(const std::string& s) const {
    for (const auto& x : systems_)
      if (x.name == s) return x;
    throw UnknownSystem("no system '" + s + "'");
  }
  const MmlFamily& family(const std::string& s, const std::string& f) const {
    for (const auto& x : system(s).families)
      if (x.name == f) return x;
    throw UnknownFamily("no family '" + f + "' in system '" + s + "'");
  }
  const MmlField& field(const std::string& s, const std::string& f, const std::string& fld) const {
    for (const auto& x : family(s, f).fields)
      if (x.name == fld) return x;
    throw UnknownField("no field '" + fld + "' in " + s + "/" + f);
  }

  std::size_t channel_count() const {
    std::size_t n = 0;
    for (const auto& s : systems_)
      for (const auto& f : s.families) n += f.devices.size() * f.fields.size();
    return n;
  }

 private:
  std::string name_;
  std::vector<MmlSystem> systems_;
};

namespace mml_detail {

// "{sector:02}" style placeholders over sector / number / element.
inline std::string format_address(const std::string& pattern, const MmlDevice& d) {
  std::string out;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (pattern[i] != '{') {
      out += pattern[i];
      continue;
    }
    const auto close = pattern.find('}', i);
    if (close == std::string::npos) throw ParseError("unterminated placeholder in '" + pattern + "'");
    std::string key = pattern.substr(i + 1, close - i - 1);
    int width = 0;
    if (auto colon = key.find(':'); colon != std::string::npos) {
      width = std::stoi(key.substr(colon + 1));
      key = key.substr(0, colon);
    }
    long v = 0;
    if (key == "sector") {
      v = d.sector;
    } else if (key == "number") {
      v = d.number;
    } else if (key == "element") {
      v = d.element;
    } else {
      throw ParseError("unknown placeholder '{" + key + "}' in '" + pattern + "'");
    }
    out += pad_number(v, width);
    i = close;
  }
  return out;
}

}  // namespace mml_detail

inline MmlTree load_mml(const json& doc) {
  std::vector<MmlSystem> systems;
  for (const auto& js : doc.at("systems")) {
    MmlSystem s{require<std::string>(js, "name"), get_or<std::string>(js, "description", ""), {}};
    for (const auto& jf : js.at("families")) {
      MmlFamily f{require<std::string>(jf, "name"), get_or<std::string>(jf, "description", ""), {}, {}};
      int element = 0;
      for (const auto& jd : jf.at("devices")) {
        MmlDevice d;
        d.element = get_or<int>(jd, "element", element + 1);
        d.sector = get_or<int>(jd, "sector", 1);
        d.number = get_or<int>(jd, "number", d.element);
        element = d.element;
        f.devices.push_back(d);
      }
      for (const auto& jfl : jf.at("fields")) {
        MmlField fld{require<std::string>(jfl, "name"), get_or<std::string>(jfl, "description", ""), {}};
        if (jfl.contains("addresses")) {
          for (const auto& a : jfl.at("addresses")) fld.addresses.push_back(scalar_string(a));
        } else {
          const auto pattern = require<std::string>(jfl, "pattern");
          for (const auto& d : f.devices) fld.addresses.push_back(mml_detail::format_address(pattern, d));
        }
        f.fields.push_back(std::move(fld));
      }
      s.families.push_back(std::move(f));
    }
    systems.push_back(std::move(s));
  }
  return MmlTree(get_or<std::string>(doc, "name", ""), std::move(systems));
}

inline MmlTree load_mml_file(const std::string& path) { return load_mml(load_document_file(path)); }

inline json to_json(const MmlTree& tree) {
  json systems = json::array();
  for (const auto& s : tree.systems()) {
    json fams = json::array();
    for (const auto& f : s.families) {
      json devs = json::array();
      for (const auto& d : f.devices) devs.push_back({{"element", d.element}, {"sector", d.sector}, {"number", d.number}});
      json fields = json::array();
      for (const auto& fld : f.fields)
        fields.push_back({{"name", fld.name}, {"description", fld.description}, {"addresses", fld.addresses}});
      fams.push_back({{"name", f.name}, {"description", f.description}, {"devices", devs}, {"fields", fields}});
    }
    systems.push_back({{"name", s.name}, {"description", s.description}, {"families", fams}});
  }
  return {{"name", tree.name()}, {"systems", systems}};
}

// Flat companion database used for validation.
inline DatabasePtr companion_database(const MmlTree& tree) {
  std::vector<ChannelRecord> records;
  for (const auto& s : tree.systems())
    for (const auto& f : s.families)
      for (const auto& fld : f.fields)
        for (std::size_t i = 0; i < f.devices.size(); ++i) {
          ChannelRecord r;
          r.address = fld.addresses[i];
          r.description = s.description + " / " + f.description + " / " + fld.description + " / element " +
                          std::to_string(f.devices[i].element);
          r.path = {{"address", r.address}};
          r.metadata = {{"system", s.name},
                        {"family", f.name},
                        {"field", fld.name},
                        {"element", std::to_string(f.devices[i].element)},
                        {"device", s.name + ":" + f.name + ":" + std::to_string(f.devices[i].element)}};
          records.push_back(std::move(r));
        }
  return std::make_shared<const ChannelDatabase>(HierarchySchema::flat(), std::move(records), std::vector<TreeNode>{},
                                                 tree.name());
}

// The seven read-only tools. Anything else is rejected before execution.
class MmlTools {
 public:
  explicit MmlTools(const MmlTree& tree) : tree_(tree) {}

  static const std::vector<std::string>& names() {
    static const std::vector<std::string> kNames = {"list_systems", "list_families", "list_fields", "get_channels",
                                                    "get_indices", "describe", "count_channels"};
    return kNames;
  }

  json call(const std::string& tool, const json& args) const {
    if (std::find(names().begin(), names().end(), tool) == names().end())
      throw UnknownTool("tool '" + tool + "' is not available");
    if (tool == "list_systems") return list_systems();
    if (tool == "list_families") return list_families(arg(args, "system"));
    if (tool == "list_fields") return list_fields(arg(args, "system"), arg(args, "family"));
    if (tool == "get_indices")
      return get_indices(arg(args, "system"), arg(args, "family"), args.value("selector", std::string("all")));
    if (tool == "describe") return describe(args.value("path", std::string()));
    if (tool == "count_channels") return count_channels(args.value("path", std::string()));
    std::optional<std::vector<int>> elements;
    if (args.contains("elements") && !args.at("elements").is_null()) elements = args.at("elements").get<std::vector<int>>();
    return get_channels(arg(args, "system"), arg(args, "family"), arg(args, "field"), elements,
                        args.value("contains", std::string()));
  }

  json list_systems() const {
    json out = json::array();
    for (const auto& s : sorted(tree_.systems()))
      out.push_back({{"name", s->name}, {"description", s->description}});
    return out;
  }

  json list_families(const std::string& system) const {
    json out = json::array();
    for (const auto* f : sorted(tree_.system(system).families))
      out.push_back({{"name", f->name}, {"description", f->description}, {"devices", f->devices.size()}});
    return out;
  }

  json list_fields(const std::string& system, const std::string& family) const {
    json out = json::array();
    for (const auto* f : sorted(tree_.family(system, family).fields))
      out.push_back({{"name", f->name}, {"description", f->description}});
    return out;
  }

  // selector: "all" or "sector:N".
  json get_indices(const std::string& system, const std::string& family, const std::string& selector = "all") const {
    std::optional<int> sector;
    if (selector.rfind("sector:", 0) == 0) {
      try {
        sector = std::stoi(selector.substr(7));
      } catch (const std::exception&) {
        throw InvalidRequest("bad device selector '" + selector + "'");
      }
    } else if (selector != "all") {
      throw InvalidRequest("bad device selector '" + selector + "'");
    }
    json out = json::array();
    for (const auto& d : tree_.family(system, family).devices)
      if (!sector || d.sector == *sector) out.push_back({{"element", d.element}, {"device", {d.sector, d.number}}});
    return out;
  }

  // Channels in device order; optional element list and address substring filter.
  json get_channels(const std::string& system, const std::string& family, const std::string& field,
                    const std::optional<std::vector<int>>& elements = std::nullopt,
                    const std::string& contains = {}) const {
    const auto& fam = tree_.family(system, family);
    const auto& fld = tree_.field(system, family, field);
    json out = json::array();
    for (std::size_t i = 0; i < fam.devices.size(); ++i) {
      const auto& d = fam.devices[i];
      if (elements && std::find(elements->begin(), elements->end(), d.element) == elements->end()) continue;
      if (!contains.empty() && fld.addresses[i].find(contains) == std::string::npos) continue;
      out.push_back({{"address", fld.addresses[i]}, {"element", d.element}, {"device", {d.sector, d.number}}});
    }
    return out;
  }

  // path: "" | "SYS" | "SYS/FAM" | "SYS/FAM/FIELD"
  json describe(const std::string& path) const {
    const auto parts = split_path(path);
    if (parts.empty()) {
      json kids = json::array();
      for (const auto* s : sorted(tree_.systems())) kids.push_back(s->name);
      return {{"kind", "root"}, {"name", tree_.name()}, {"children", kids}};
    }
    if (parts.size() == 1) {
      const auto& s = tree_.system(parts[0]);
      json kids = json::array();
      for (const auto* f : sorted(s.families)) kids.push_back(f->name);
      return {{"kind", "system"}, {"name", s.name}, {"description", s.description}, {"children", kids}};
    }
    if (parts.size() == 2) {
      const auto& f = tree_.family(parts[0], parts[1]);
      json kids = json::array();
      for (const auto* x : sorted(f.fields)) kids.push_back(x->name);
      return {{"kind", "family"}, {"name", f.name}, {"description", f.description}, {"devices", f.devices.size()},
              {"children", kids}};
    }
    const auto& fld = tree_.field(parts[0], parts[1], parts[2]);
    return {{"kind", "field"}, {"name", fld.name}, {"description", fld.description}, {"channels", fld.addresses.size()}};
  }

  json count_channels(const std::string& path) const {
    const auto parts = split_path(path);
    std::size_t n = 0;
    if (parts.empty()) {
      n = tree_.channel_count();
    } else if (parts.size() == 1) {
      for (const auto& f : tree_.system(parts[0]).families) n += f.devices.size() * f.fields.size();
    } else if (parts.size() == 2) {
      const auto& f = tree_.family(parts[0], parts[1]);
      n = f.devices.size() * f.fields.size();
    } else {
      n = tree_.field(parts[0], parts[1], parts[2]).addresses.size();
    }
    return {{"path", path}, {"count", n}};
  }

  const MmlTree& tree() const { return tree_; }

 private:
  static std::string arg(const json& args, const char* key) {
    if (!args.contains(key) || !args.at(key).is_string())
      throw InvalidRequest(std::string("tool argument '") + key + "' is required");
    return args.at(key).get<std::string>();
  }

  template <typename T>
  static std::vector<const T*> sorted(const std::vector<T>& v) {
    std::vector<const T*> out;
    for (const auto& x : v) out.push_back(&x);
    std::sort(out.begin(), out.end(), [](const T* a, const T* b) { return a->name < b->name; });
    return out;
  }

  static std::vector<std::string> split_path(const std::string& path) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : path) {
      if (c == '/') {
        if (!cur.empty()) out.push_back(cur), cur.clear();
      } else {
        cur += c;
      }
    }
    if (!cur.empty()) out.push_back(cur);
    if (out.size() > 3) throw InvalidRequest("path '" + path + "' is deeper than system/family/field");
    return out;
  }

  const MmlTree& tree_;
};

// ---- domain detection and example library --------------------------------

struct KeywordMap {
  std::map<std::string, std::vector<std::string>> systems;      // system -> phrases
  std::map<std::string, std::vector<std::string>> query_types;  // query type -> phrases
};

struct DomainTags {
  std::vector<std::string> systems;
  std::vector<std::string> query_types;
  bool fallback = false;  // nothing matched: every system is in play

  bool empty() const { return systems.empty() && query_types.empty(); }
};

namespace mml_detail {

// Phrase tokens must appear consecutively in the query tokens.
inline bool phrase_in(const std::vector<std::string>& q, const std::string& phrase) {
  const auto p = tokenize(phrase);
  if (p.empty() || p.size() > q.size()) return false;
  for (std::size_t i = 0; i + p.size() <= q.size(); ++i)
    if (std::equal(p.begin(), p.end(), q.begin() + static_cast<std::ptrdiff_t>(i))) return true;
  return false;
}

}  // namespace mml_detail

inline DomainTags detect_domains(const std::string& query, const KeywordMap& map,
                                 const std::vector<std::string>& all_systems = {}) {
  const auto q = tokenize(query);
  DomainTags tags;
  for (const auto& [system, phrases] : map.systems)
    if (std::any_of(phrases.begin(), phrases.end(), [&](const std::string& p) { return mml_detail::phrase_in(q, p); }))
      tags.systems.push_back(system);
  for (const auto& [type, phrases] : map.query_types)
    if (std::any_of(phrases.begin(), phrases.end(), [&](const std::string& p) { return mml_detail::phrase_in(q, p); }))
      tags.query_types.push_back(type);
  if (tags.systems.empty()) {
    tags.fallback = true;
    tags.systems = all_systems;
  }
  return tags;
}

inline KeywordMap load_keyword_map(const json& doc) {
  KeywordMap m;
  if (doc.contains("systems"))
    for (const auto& [k, v] : doc.at("systems").items()) m.systems[k] = v.get<std::vector<std::string>>();
  if (doc.contains("query_types"))
    for (const auto& [k, v] : doc.at("query_types").items()) m.query_types[k] = v.get<std::vector<std::string>>();
  return m;
}

struct ToolCall {
  std::string tool;
  json arguments;
};

struct ExampleEntry {
  std::string query;
  std::string system;      // "generic" for the fallback set
  std::string query_type;
  std::vector<ToolCall> tool_sequence;
  std::vector<std::string> answer;
};

inline std::vector<ExampleEntry> load_examples(const json& doc) {
  std::vector<ExampleEntry> out;
  const json& arr = doc.is_object() ? doc.at("examples") : doc;
  for (const auto& j : arr) {
    ExampleEntry e{require<std::string>(j, "query"), get_or<std::string>(j, "system", "generic"),
                   get_or<std::string>(j, "query_type", ""), {}, {}};
    for (const auto& t : j.at("tools")) e.tool_sequence.push_back({require<std::string>(t, "tool"), t.value("arguments", json::object())});
    e.answer = j.at("answer").get<std::vector<std::string>>();
    out.push_back(std::move(e));
  }
  return out;
}

// Runs the example's tool sequence; the last get_channels observation must
// equal the recorded answer.
inline bool replay_example(const ExampleEntry& e, const MmlTools& tools) {
  std::vector<std::string> last;
  for (const auto& call : e.tool_sequence) {
    const auto obs = tools.call(call.tool, call.arguments);
    if (call.tool == "get_channels") {
      last.clear();
      for (const auto& c : obs) last.push_back(c.at("address").get<std::string>());
    }
  }
  return last == e.answer;
}

inline constexpr std::size_t kMaxPromptExamples = 8;

// Examples whose tags intersect, most specific (both tags match) first, then
// library order. No detected tags -> the generic examples.
inline std::vector<const ExampleEntry*> select_examples(const std::vector<ExampleEntry>& library, const DomainTags& tags) {
  std::vector<std::pair<int, const ExampleEntry*>> ranked;
  const bool use_generic = tags.fallback || tags.empty();
  for (const auto& e : library) {
    int spec = 0;
    if (use_generic) {
      if (e.system != "generic") continue;
      spec = 1;
    } else {
      if (std::find(tags.systems.begin(), tags.systems.end(), e.system) != tags.systems.end()) spec += 2;
      if (std::find(tags.query_types.begin(), tags.query_types.end(), e.query_type) != tags.query_types.end()) spec += 1;
      if (spec == 0) continue;
    }
    ranked.emplace_back(spec, &e);
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<const ExampleEntry*> out;
  for (const auto& [s, e] : ranked) {
    if (out.size() == kMaxPromptExamples) break;
    out.push_back(e);
  }
  return out;
}

inline std::string build_agent_prompt(const std::string& subquery, const std::vector<ExampleEntry>& library,
                                      const DomainTags& tags) {
  std::string p =
      "You answer channel requests by calling read-only tools over the accelerator middle layer: "
      "list_systems, list_families, list_fields, get_indices, get_channels, describe, count_channels.\n";
  if (!tags.fallback && !tags.systems.empty()) p += "Relevant systems: " + join(tags.systems, ", ") + "\n";
  if (!tags.query_types.empty()) p += "Query type: " + join(tags.query_types, ", ") + "\n";
  const auto chosen = select_examples(library, tags);
  if (!chosen.empty()) p += "Worked examples:\n";
  for (const auto* e : chosen) {
    p += "Q: " + e->query + "\n";
    for (const auto& c : e->tool_sequence) p += "  " + c.tool + " " + c.arguments.dump() + "\n";
    p += "  answer: " + join(e->answer, ", ") + "\n";
  }
  p += "Request: " + subquery + "\n";
  return p;
}

// ---- the agent loop --------------------------------------------------------

struct MiddleLayerConfig {
  int max_iterations = 20;
  bool decompose = true;
  bool allow_abstain = true;
  bool restrict_to_detected = true;  // only offer detected systems
};

inline constexpr const char* kAllDevices = "(all devices)";

struct MmlTrace {
  std::vector<ToolCall> calls;
  std::vector<json> observations;
  std::vector<std::string> channels;
  DomainTags tags;
  std::string prompt;
  bool abstained = false;
  std::string note;
};

namespace mml_detail {

class Agent {
 public:
  Agent(const MmlTools& tools, Selector& selector, const MiddleLayerConfig& cfg, std::string query, std::string prompt)
      : tools_(tools), selector_(selector), cfg_(cfg), query_(std::move(query)) {
    trace_.prompt = std::move(prompt);
  }

  MmlTrace run(const DomainTags& tags) {
    trace_.tags = tags;
    try {
      run_inner(tags);
    } catch (const IterationLimitExceeded& e) {
      trace_.abstained = true;
      trace_.channels.clear();
      trace_.note = e.what();
    }
    return std::move(trace_);
  }

 private:
  json act(const std::string& tool, const json& args) {
    if (static_cast<int>(trace_.calls.size()) >= cfg_.max_iterations)
      throw IterationLimitExceeded("agent exceeded " + std::to_string(cfg_.max_iterations) + " steps");
    auto obs = tool == "finish" ? json(nullptr) : tools_.call(tool, args);
    trace_.calls.push_back({tool, args});
    trace_.observations.push_back(obs);
    return obs;
  }

  std::optional<std::string> pick(const std::string& what, const json& listing, const std::set<std::string>& allowed = {}) {
    ChoiceRequest req;
    req.context = trace_.prompt + "Choose the " + what + ".";
    req.query = query_;
    req.resolved = resolved_;
    req.allow_abstain = cfg_.allow_abstain;
    for (const auto& e : listing) {
      const auto name = e.at("name").get<std::string>();
      if (!allowed.empty() && !allowed.count(name)) continue;
      req.options.push_back({name, name, e.value("description", std::string()), false});
    }
    if (req.options.empty()) return std::nullopt;
    const auto resp = selector_.choose(req);
    if (resp.abstained || resp.selected.empty()) return std::nullopt;
    for (const auto& o : req.options)
      if (o.id == resp.selected.front()) resolved_.push_back(o.label + " " + o.description);
    return resp.selected.front();
  }

  void abstain(const std::string& why) {
    trace_.abstained = true;
    trace_.note = why;
    act("finish", json::object());
  }

  void run_inner(const DomainTags& tags) {
    const auto systems = act("list_systems", json::object());
    std::set<std::string> allowed;
    if (cfg_.restrict_to_detected && !tags.fallback)
      for (const auto& s : tags.systems) allowed.insert(s);
    const auto system = pick("system", systems, allowed);
    if (!system) return abstain("no system matches");
    const auto families = act("list_families", {{"system", *system}});
    const auto family = pick("device family", families);
    if (!family) return abstain("no family matches");
    const auto fields = act("list_fields", {{"system", *system}, {"family", *family}});
    const auto field = pick("field", fields);
    if (!field) return abstain("no field matches");
    const auto indices = act("get_indices", {{"system", *system}, {"family", *family}});

    ChoiceRequest req;
    req.context = trace_.prompt + "Choose the devices the request names, or all devices if it names none.";
    req.query = query_;
    req.resolved = resolved_;
    req.multi_select = true;
    req.allow_abstain = false;
    for (const auto& d : indices) {
      const auto el = std::to_string(d.at("element").get<int>());
      req.options.push_back({el, "element " + el, "", false});
    }
    req.options.push_back({kAllDevices, kAllDevices, "every device of the family", true});
    const auto resp = selector_.choose(req);
    json args = {{"system", *system}, {"family", *family}, {"field", *field}};
    const bool all = resp.selected.empty() ||
                     std::find(resp.selected.begin(), resp.selected.end(), kAllDevices) != resp.selected.end();
    if (!all) {
      std::vector<int> els;
      for (const auto& id : resp.selected) els.push_back(std::stoi(id));
      std::sort(els.begin(), els.end());
      args["elements"] = els;
    }
    const auto channels = act("get_channels", args);
    for (const auto& c : channels) trace_.channels.push_back(c.at("address").get<std::string>());
    act("finish", json::object());
    if (trace_.channels.empty()) {
      trace_.abstained = true;
      trace_.note = "selection matched no channel";
    }
  }

  const MmlTools& tools_;
  Selector& selector_;
  const MiddleLayerConfig& cfg_;
  std::string query_;
  std::vector<std::string> resolved_;
  MmlTrace trace_;
};

}  // namespace mml_detail

struct MiddleLayer {
  MmlTree tree;
  KeywordMap keywords;
  std::vector<ExampleEntry> examples;
  DatabasePtr companion;

  MiddleLayer(MmlTree t, KeywordMap k, std::vector<ExampleEntry> e)
      : tree(std::move(t)), keywords(std::move(k)), examples(std::move(e)), companion(companion_database(tree)) {}

  std::vector<std::string> system_names() const {
    std::vector<std::string> out;
    for (const auto& s : tree.systems()) out.push_back(s.name);
    return out;
  }
};

inline MmlTrace run_mml_agent(const std::string& subquery, const MiddleLayer& ml, Selector& selector,
                              const MiddleLayerConfig& cfg = {}) {
  MmlTools tools(ml.tree);
  const auto tags = detect_domains(subquery, ml.keywords, ml.system_names());
  const auto prompt = build_agent_prompt(subquery, ml.examples, tags);
  return mml_detail::Agent(tools, selector, cfg, subquery, prompt).run(tags);
}

inline json to_json(const MmlTrace& t) {
  json calls = json::array();
  for (std::size_t i = 0; i < t.calls.size(); ++i)
    calls.push_back({{"tool", t.calls[i].tool}, {"arguments", t.calls[i].arguments}});
  return {{"calls", calls},
          {"systems", t.tags.systems},
          {"query_types", t.tags.query_types},
          {"domain_fallback", t.tags.fallback},
          {"channels", t.channels},
          {"abstained", t.abstained}};
}

inline FinderResult find_middle_layer(const std::string& query, const MiddleLayer& ml, Selector& selector,
                                      const MiddleLayerConfig& cfg = {}) {
  FinderResult result;
  const auto subs = cfg.decompose ? selector.decompose(query) : std::vector<std::string>{trim(query)};
  auto traces = run_indexed(subs.size(), [&](std::size_t i) { return run_mml_agent(subs[i], ml, selector, cfg); });
  json tj = json::array();
  for (std::size_t i = 0; i < subs.size(); ++i) {
    auto check = validate_channels(traces[i].channels, *ml.companion);
    SubQueryResult s{subs[i], check.valid, check.valid.empty(), traces[i].note};
    result.rejected.insert(result.rejected.end(), check.invalid.begin(), check.invalid.end());
    result.subqueries.push_back(std::move(s));
    auto j = to_json(traces[i]);
    j["subquery"] = subs[i];
    tj.push_back(std::move(j));
  }
  aggregate(result);
  result.selector_calls = selector.calls_used();
  result.trace = {{"paradigm", "mml"}, {"agents", tj}};
  return result;
}

}  // namespace chanfind
