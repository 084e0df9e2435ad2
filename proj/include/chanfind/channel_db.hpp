#pragma once

// Channel databases: hierarchy schema, naming-pattern assembly/parsing,
// list/range expansion and the immutable indexed record store.

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "chanfind/document.hpp"
#include "chanfind/errors.hpp"
#include "chanfind/text.hpp"

namespace chanfind {

enum class SuffixRole { kSetpoint, kReadback, kCommand, kStatus, kNone };

inline std::string to_string(SuffixRole r) {
  switch (r) {
    case SuffixRole::kSetpoint: return "setpoint";
    case SuffixRole::kReadback: return "readback";
    case SuffixRole::kCommand: return "command";
    case SuffixRole::kStatus: return "status";
    case SuffixRole::kNone: return "none";
  }
  return "none";
}

inline SuffixRole parse_suffix_role(std::string_view s) {
  const std::string l = to_lower(s);
  if (l == "setpoint" || l == "sp") return SuffixRole::kSetpoint;
  if (l == "readback" || l == "rb") return SuffixRole::kReadback;
  if (l == "command" || l == "cmd") return SuffixRole::kCommand;
  if (l == "status" || l == "stat") return SuffixRole::kStatus;
  if (l == "none" || l.empty()) return SuffixRole::kNone;
  throw ParseError("unknown suffix role '" + std::string(s) + "'");
}

struct PathElement {
  std::string level;
  std::string value;
  friend bool operator==(const PathElement&, const PathElement&) = default;
  friend auto operator<=>(const PathElement&, const PathElement&) = default;
};
using Path = std::vector<PathElement>;

struct ChannelRecord {
  std::string address;
  std::optional<std::string> name;
  std::string description;
  Path path;
  SuffixRole suffix_role = SuffixRole::kNone;
  std::map<std::string, std::string> metadata;

  // Text a selector matches against: name plus description.
  std::string match_text() const { return name ? *name + " " + description : description; }
};

struct LevelDef {
  std::string name;
  int ordinal = 0;
  bool optional = false;
  std::string separator_before;
};

// Ordered levels plus the naming template ("{0}-{1}:{2}" or "{system}-{...}").
// Literal text before the first placeholder and after the last is kept
// verbatim; the text between placeholders is the separator_before of the
// following level and disappears together with an omitted optional level.
class HierarchySchema {
 public:
  HierarchySchema() = default;

  HierarchySchema(std::vector<LevelDef> levels, std::string pattern,
                  std::map<std::string, SuffixRole> suffix_vocabulary = {})
      : levels_(std::move(levels)), pattern_(std::move(pattern)),
        suffix_vocabulary_(std::move(suffix_vocabulary)) {
    compile();
  }

  // Single-level schema for flat channel lists: the address is the path.
  static HierarchySchema flat() { return HierarchySchema({LevelDef{"address", 0, false, ""}}, "{0}"); }

  const std::vector<LevelDef>& levels() const { return levels_; }
  const std::string& pattern() const { return pattern_; }
  const std::map<std::string, SuffixRole>& suffix_vocabulary() const { return suffix_vocabulary_; }
  std::size_t depth() const { return levels_.size(); }

  std::optional<std::size_t> level_index(std::string_view name) const {
    for (std::size_t i = 0; i < levels_.size(); ++i)
      if (levels_[i].name == name) return i;
    return std::nullopt;
  }

  SuffixRole role_for(std::string_view final_value) const {
    auto it = suffix_vocabulary_.find(std::string(final_value));
    return it == suffix_vocabulary_.end() ? SuffixRole::kNone : it->second;
  }

  // Levels in path must appear in schema order; absent levels must be optional.
  std::string assemble(const Path& path) const {
    std::string out = lead_;
    std::size_t p = 0;
    for (const auto& level : levels_) {
      if (p < path.size() && path[p].level == level.name) {
        if (path[p].value.empty()) throw MissingLevel("empty value for level '" + level.name + "'");
        out += level.separator_before;
        out += path[p].value;
        ++p;
      } else if (!level.optional) {
        throw MissingLevel("required level '" + level.name + "' absent from path");
      }
    }
    if (p != path.size())
      throw MissingLevel("path element '" + path[p].level + "' is not a schema level in order");
    return out + trail_;
  }

  // Inverse of assemble. Values may not contain separator characters; returns
  // nullopt if the address does not fit the pattern or fits it more than once.
  std::optional<Path> parse(std::string_view address) const {
    if (address.size() < lead_.size() + trail_.size()) return std::nullopt;
    if (address.substr(0, lead_.size()) != lead_) return std::nullopt;
    if (address.substr(address.size() - trail_.size()) != trail_) return std::nullopt;
    const std::string_view body = address.substr(lead_.size(), address.size() - lead_.size() - trail_.size());
    std::vector<Path> found;
    Path cur;
    parse_from(body, 0, 0, cur, found);
    if (found.size() != 1) return std::nullopt;
    return found.front();
  }

  bool value_is_legal(std::string_view value) const {
    return !value.empty() && value.find_first_of(separator_chars_) == std::string_view::npos;
  }

 private:
  void compile() {
    if (levels_.empty()) throw SchemaError("schema has no levels");
    for (std::size_t i = 0; i < levels_.size(); ++i) levels_[i].ordinal = static_cast<int>(i);
    std::vector<std::string> literals;  // literal text before each placeholder
    std::vector<std::size_t> order;
    std::string lit;
    for (std::size_t i = 0; i < pattern_.size(); ++i) {
      if (pattern_[i] != '{') {
        lit += pattern_[i];
        continue;
      }
      const auto close = pattern_.find('}', i);
      if (close == std::string::npos) throw SchemaError("unterminated placeholder in pattern");
      const std::string key = pattern_.substr(i + 1, close - i - 1);
      std::size_t idx = 0;
      if (!key.empty() && std::all_of(key.begin(), key.end(), ::isdigit)) {
        idx = std::stoul(key);
      } else {
        auto li = level_index(key);
        if (!li) throw SchemaError("pattern placeholder '{" + key + "}' names no level");
        idx = *li;
      }
      literals.push_back(lit);
      order.push_back(idx);
      lit.clear();
      i = close;
    }
    trail_ = lit;
    if (order.size() != levels_.size())
      throw SchemaError("pattern has " + std::to_string(order.size()) + " placeholders for " +
                        std::to_string(levels_.size()) + " levels");
    for (std::size_t i = 0; i < order.size(); ++i)
      if (order[i] != i) throw SchemaError("pattern placeholders must follow level order");
    lead_ = literals.front();
    levels_.front().separator_before.clear();
    for (std::size_t i = 1; i < levels_.size(); ++i) levels_[i].separator_before = literals[i];
    separator_chars_.clear();
    for (const auto& l : levels_)
      for (char c : l.separator_before)
        if (separator_chars_.find(c) == std::string::npos) separator_chars_ += c;
  }

  void parse_from(std::string_view rest, std::size_t level, std::size_t placed, Path& cur,
                  std::vector<Path>& found) const {
    if (found.size() > 1) return;
    if (level == levels_.size()) {
      if (rest.empty() && placed > 0) found.push_back(cur);
      return;
    }
    const auto& def = levels_[level];
    if (def.optional) parse_from(rest, level + 1, placed, cur, found);
    std::string_view r = rest;
    if (r.substr(0, def.separator_before.size()) != def.separator_before) return;
    r.remove_prefix(def.separator_before.size());
    // Value runs to the next separator character (values never contain one).
    std::size_t end = separator_chars_.empty() ? r.size() : r.find_first_of(separator_chars_);
    if (end == std::string_view::npos) end = r.size();
    if (end == 0) return;
    cur.push_back({def.name, std::string(r.substr(0, end))});
    parse_from(r.substr(end), level + 1, placed + 1, cur, found);
    cur.pop_back();
  }

  std::vector<LevelDef> levels_;
  std::string pattern_;
  std::map<std::string, SuffixRole> suffix_vocabulary_;
  std::string lead_;
  std::string trail_;
  std::string separator_chars_;
};

struct ExpansionSpec {
  enum class Kind { kList, kRange };
  Kind kind = Kind::kList;
  std::vector<std::pair<std::string, std::string>> items;  // List: (value, description)
  std::string prefix;                                      // Range
  long lo = 0;
  long hi = 0;
  int pad_width = 0;
  std::string description_template;  // Range: "{n}" and "{value}" are substituted

  std::size_t cardinality() const {
    return kind == Kind::kList ? items.size() : static_cast<std::size_t>(hi - lo + 1);
  }
};

inline std::string pad_number(long n, int width) {
  std::string s = std::to_string(n);
  if (static_cast<int>(s.size()) < width) s.insert(0, static_cast<std::size_t>(width) - s.size(), '0');
  return s;
}

// Instances produced by an expansion: (value, description) in declaration order.
inline std::vector<std::pair<std::string, std::string>> expansion_items(const ExpansionSpec& spec,
                                                                        const std::string& node_description) {
  std::vector<std::pair<std::string, std::string>> out;
  if (spec.kind == ExpansionSpec::Kind::kList) {
    if (spec.items.empty()) throw EmptyList("list expansion has no items");
    for (const auto& [value, desc] : spec.items)
      out.emplace_back(value, desc.empty() ? trim(node_description + " " + value) : desc);
    return out;
  }
  if (spec.lo > spec.hi)
    throw RangeError("range " + std::to_string(spec.lo) + ".." + std::to_string(spec.hi) + " has lo > hi");
  const std::string tmpl = spec.description_template.empty() ? node_description : spec.description_template;
  for (long n = spec.lo; n <= spec.hi; ++n) {
    const std::string value = spec.prefix + pad_number(n, spec.pad_width);
    std::string desc;
    if (tmpl.find("{n}") != std::string::npos || tmpl.find("{value}") != std::string::npos) {
      desc = replace_all(replace_all(tmpl, "{n}", std::to_string(n)), "{value}", value);
    } else {
      desc = trim(tmpl + " " + std::to_string(n));
    }
    out.emplace_back(value, desc);
  }
  return out;
}

// One node of the configuration tree. A node carries either a literal value
// or an expansion; children form the subtree replicated under every instance.
struct NodeSpec {
  std::string level;
  std::string value;
  std::string description;
  std::optional<std::string> name;  // channel name for leaf/terminal nodes
  bool terminal = false;            // node is itself a channel despite having children
  std::vector<NodeSpec> children;
  std::optional<ExpansionSpec> expansion;
  std::map<std::string, std::string> metadata;
};

// Materialized tree used for navigation: expansions resolved into instances.
struct TreeNode {
  std::string level;
  std::string value;
  std::string description;
  bool is_channel = false;
  std::string address;  // set when is_channel
  std::vector<TreeNode> children;
};

namespace db_detail {

inline std::string substitute_instance(std::string s, const std::string& value, const std::string& n) {
  return replace_all(replace_all(s, "{value}", value), "{n}", n);
}

struct Walk {
  const HierarchySchema& schema;
  Path path;
  std::vector<std::string> descriptions;
  std::vector<ChannelRecord>* records = nullptr;
};

inline ChannelRecord make_record(const Walk& w, const NodeSpec& spec, const std::optional<std::string>& name) {
  ChannelRecord r;
  r.path = w.path;
  r.address = w.schema.assemble(r.path);
  r.name = name;
  r.description = join(w.descriptions, " / ");
  r.suffix_role = w.schema.role_for(r.path.back().value);
  r.metadata = spec.metadata;
  return r;
}

inline void check_level(const HierarchySchema& schema, const NodeSpec& node, const Path& prefix) {
  auto idx = schema.level_index(node.level);
  if (!idx) throw SchemaError("node level '" + node.level + "' is not declared in the schema");
  if (!prefix.empty()) {
    auto parent = schema.level_index(prefix.back().level);
    if (*idx <= *parent)
      throw SchemaError("node level '" + node.level + "' does not descend from '" + prefix.back().level + "'");
  }
  if (node.description.empty()) throw SchemaError("node at level '" + node.level + "' has no description");
}

inline std::vector<TreeNode> materialize(const NodeSpec& node, Walk& w) {
  check_level(w.schema, node, w.path);
  std::vector<std::pair<std::string, std::string>> instances;
  if (node.expansion) {
    instances = expansion_items(*node.expansion, node.description);
  } else {
    if (node.value.empty()) throw SchemaError("node at level '" + node.level + "' has neither value nor expansion");
    instances.emplace_back(node.value, node.description);
  }
  std::vector<TreeNode> out;
  out.reserve(instances.size());
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& [value, desc] = instances[i];
    if (!w.schema.value_is_legal(value))
      throw SchemaError("value '" + value + "' contains a pattern separator character");
    const std::string n = node.expansion && node.expansion->kind == ExpansionSpec::Kind::kRange
                              ? std::to_string(node.expansion->lo + static_cast<long>(i))
                              : value;
    TreeNode t{node.level, value, desc, false, {}, {}};
    w.path.push_back({node.level, value});
    w.descriptions.push_back(desc);
    std::optional<std::string> name;
    if (node.name) name = substitute_instance(*node.name, value, n);
    if (node.children.empty() || node.terminal) {
      auto rec = make_record(w, node, name);
      t.is_channel = true;
      t.address = rec.address;
      if (w.records) w.records->push_back(std::move(rec));
    }
    for (const auto& child : node.children) {
      auto sub = materialize(child, w);
      for (auto& s : sub) t.children.push_back(std::move(s));
    }
    w.path.pop_back();
    w.descriptions.pop_back();
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace db_detail

// All leaf (and terminal) records under `node`, depth-first in document order.
inline std::vector<ChannelRecord> expand(const NodeSpec& node, const HierarchySchema& schema,
                                         const Path& prefix_path = {},
                                         const std::vector<std::string>& prefix_descriptions = {}) {
  std::vector<ChannelRecord> records;
  db_detail::Walk w{schema, prefix_path, prefix_descriptions, &records};
  if (w.descriptions.size() < w.path.size()) w.descriptions.resize(w.path.size());
  db_detail::materialize(node, w);
  return records;
}

inline std::string assemble_address(const Path& path, const HierarchySchema& schema) {
  return schema.assemble(path);
}

// Immutable after construction; share through std::shared_ptr<const ChannelDatabase>.
class ChannelDatabase {
 public:
  ChannelDatabase(HierarchySchema schema, std::vector<ChannelRecord> records, std::vector<TreeNode> roots = {},
                  std::string name = {}, std::map<std::string, std::string> glossary = {})
      : schema_(std::move(schema)), records_(std::move(records)), roots_(std::move(roots)),
        name_(std::move(name)), glossary_(std::move(glossary)) {
    for (std::size_t i = 0; i < records_.size(); ++i) {
      const auto& r = records_[i];
      if (!by_address_.emplace(r.address, i).second) throw DuplicateAddress("duplicate address '" + r.address + "'");
      for (const auto& el : r.path) by_level_[{el.level, el.value}].push_back(i);
    }
  }

  const HierarchySchema& schema() const { return schema_; }
  const std::vector<ChannelRecord>& records() const { return records_; }
  const std::vector<TreeNode>& roots() const { return roots_; }
  const std::string& name() const { return name_; }
  const std::map<std::string, std::string>& glossary_terms() const { return glossary_; }
  std::size_t size() const { return records_.size(); }
  bool has_tree() const { return !roots_.empty(); }

  const ChannelRecord* find(std::string_view address) const {
    auto it = by_address_.find(std::string(address));
    return it == by_address_.end() ? nullptr : &records_[it->second];
  }
  bool contains(std::string_view address) const { return find(address) != nullptr; }

  const ChannelRecord* find_by_name(std::string_view name) const {
    if (by_name_.empty() && !records_.empty()) build_name_index();
    auto it = by_name_.find(std::string(name));
    return it == by_name_.end() ? nullptr : &records_[it->second];
  }

  const std::vector<std::size_t>& with_level(const std::string& level, const std::string& value) const {
    static const std::vector<std::size_t> kEmpty;
    auto it = by_level_.find({level, value});
    return it == by_level_.end() ? kEmpty : it->second;
  }

  const std::map<std::pair<std::string, std::string>, std::vector<std::size_t>>& level_index() const {
    return by_level_;
  }

  Glossary glossary() const {
    Glossary g;
    for (const auto& [term, canonical] : glossary_) g.add(term, canonical);
    return g;
  }

 private:
  void build_name_index() const {
    std::lock_guard<std::mutex> lock(name_mutex_);
    if (!by_name_.empty()) return;
    for (std::size_t i = 0; i < records_.size(); ++i)
      if (records_[i].name) by_name_.emplace(*records_[i].name, i);
  }

  HierarchySchema schema_;
  std::vector<ChannelRecord> records_;
  std::vector<TreeNode> roots_;
  std::string name_;
  std::map<std::string, std::string> glossary_;
  std::unordered_map<std::string, std::size_t> by_address_;
  std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> by_level_;
  mutable std::unordered_map<std::string, std::size_t> by_name_;
  mutable std::mutex name_mutex_;
};

using DatabasePtr = std::shared_ptr<const ChannelDatabase>;

namespace db_detail {

inline ExpansionSpec parse_expansion(const json& j) {
  ExpansionSpec e;
  const std::string kind = to_lower(get_or<std::string>(j, "kind", "range"));
  if (kind == "list") {
    e.kind = ExpansionSpec::Kind::kList;
    const json items = j.contains("items") ? j.at("items") : json::array();
    for (const auto& it : items) {
      if (it.is_object()) {
        e.items.emplace_back(scalar_string(it.at("value")), get_or<std::string>(it, "description", ""));
      } else {
        e.items.emplace_back(scalar_string(it), "");
      }
    }
  } else if (kind == "range") {
    e.kind = ExpansionSpec::Kind::kRange;
    e.prefix = get_or<std::string>(j, "prefix", "");
    e.lo = require<long>(j, "lo");
    e.hi = require<long>(j, "hi");
    e.pad_width = get_or<int>(j, "pad", get_or<int>(j, "pad_width", 0));
    e.description_template = get_or<std::string>(j, "description", "");
  } else {
    throw ParseError("unknown expansion kind '" + kind + "'");
  }
  return e;
}

inline NodeSpec parse_node(const json& j) {
  if (!j.is_object()) throw ParseError("tree node must be a mapping");
  NodeSpec n;
  n.level = require<std::string>(j, "level");
  if (j.contains("value")) n.value = scalar_string(j.at("value"));
  n.description = get_or<std::string>(j, "description", "");
  if (j.contains("name")) n.name = require<std::string>(j, "name");
  n.terminal = get_or<bool>(j, "terminal", false);
  if (j.contains("expand") && !j.at("expand").is_null()) n.expansion = parse_expansion(j.at("expand"));
  if (n.expansion && !n.value.empty()) throw SchemaError("node '" + n.value + "' has both value and expansion");
  if (j.contains("children"))
    for (const auto& c : j.at("children")) n.children.push_back(parse_node(c));
  if (j.contains("metadata"))
    for (const auto& [k, v] : j.at("metadata").items()) n.metadata[k] = scalar_string(v);
  return n;
}

inline HierarchySchema parse_schema(const json& doc) {
  std::map<std::string, SuffixRole> vocab;
  if (doc.contains("suffixes"))
    for (const auto& [token, role] : doc.at("suffixes").items()) vocab[token] = parse_suffix_role(scalar_string(role));
  if (!doc.contains("schema")) {
    return HierarchySchema({LevelDef{"address", 0, false, ""}}, "{0}", vocab);
  }
  const json& s = doc.at("schema");
  std::vector<LevelDef> levels;
  for (const auto& l : s.at("levels")) {
    LevelDef d;
    d.name = l.is_string() ? l.get<std::string>() : require<std::string>(l, "name");
    d.optional = l.is_object() ? get_or<bool>(l, "optional", false) : false;
    levels.push_back(d);
  }
  return HierarchySchema(std::move(levels), require<std::string>(s, "pattern"), vocab);
}

// Flat "channels:" entries, each optionally expanded by a list or range that
// substitutes {n}/{value} into address, name and description.
inline void parse_flat_channels(const json& arr, const HierarchySchema& schema, std::vector<ChannelRecord>& out) {
  for (const auto& c : arr) {
    const std::string address = scalar_string(c.at("address"));
    const std::optional<std::string> name =
        c.contains("name") ? std::optional<std::string>(require<std::string>(c, "name")) : std::nullopt;
    const std::string desc = get_or<std::string>(c, "description", "");
    std::map<std::string, std::string> meta;
    if (c.contains("metadata"))
      for (const auto& [k, v] : c.at("metadata").items()) meta[k] = scalar_string(v);
    std::vector<std::pair<std::string, std::string>> inst;  // (value, n)
    if (c.contains("expand")) {
      const auto spec = parse_expansion(c.at("expand"));
      const auto items = expansion_items(spec, "");
      for (std::size_t i = 0; i < items.size(); ++i) {
        const std::string n = spec.kind == ExpansionSpec::Kind::kRange ? std::to_string(spec.lo + static_cast<long>(i))
                                                                        : items[i].first;
        inst.emplace_back(items[i].first, n);
      }
    } else {
      inst.emplace_back("", "");
    }
    for (const auto& [value, n] : inst) {
      ChannelRecord r;
      r.address = substitute_instance(address, value, n);
      if (name) r.name = substitute_instance(*name, value, n);
      r.description = substitute_instance(desc, value, n);
      r.path = {{schema.levels().front().name, r.address}};
      if (schema.depth() != 1) {
        auto parsed = schema.parse(r.address);
        if (!parsed) throw SchemaError("flat channel '" + r.address + "' does not fit the naming pattern");
        r.path = *parsed;
      }
      r.suffix_role = c.contains("role") ? parse_suffix_role(scalar_string(c.at("role")))
                                         : schema.role_for(r.path.back().value);
      r.metadata = meta;
      out.push_back(std::move(r));
    }
  }
}

}  // namespace db_detail

// Loads a structured config (YAML or JSON) with keys schema / suffixes / tree
// (or channels for flat inventories) / glossary.
inline std::shared_ptr<const ChannelDatabase> load_database(const json& doc) {
  if (!doc.is_object()) throw ParseError("database document must be a mapping");
  HierarchySchema schema = db_detail::parse_schema(doc);
  std::vector<ChannelRecord> records;
  std::vector<TreeNode> roots;
  if (doc.contains("tree")) {
    for (const auto& jn : doc.at("tree")) {
      const NodeSpec node = db_detail::parse_node(jn);
      db_detail::Walk w{schema, {}, {}, &records};
      for (auto& t : db_detail::materialize(node, w)) roots.push_back(std::move(t));
    }
  }
  if (doc.contains("channels")) db_detail::parse_flat_channels(doc.at("channels"), schema, records);
  std::map<std::string, std::string> glossary;
  if (doc.contains("glossary"))
    for (const auto& [k, v] : doc.at("glossary").items()) glossary[k] = scalar_string(v);
  return std::make_shared<const ChannelDatabase>(std::move(schema), std::move(records), std::move(roots),
                                                 get_or<std::string>(doc, "name", ""), std::move(glossary));
}

inline std::shared_ptr<const ChannelDatabase> load_database_text(std::string_view document) {
  return load_database(parse_document(document));
}

inline std::shared_ptr<const ChannelDatabase> load_database_file(const std::string& path) {
  return load_database_text(read_file(path));
}

struct ValidationResult {
  std::vector<std::string> valid;
  std::vector<std::string> invalid;
};

// Order-preserving partition by membership.
inline ValidationResult validate_channels(const std::vector<std::string>& candidates, const ChannelDatabase& db) {
  ValidationResult out;
  for (const auto& c : candidates) (db.contains(c) ? out.valid : out.invalid).push_back(c);
  return out;
}

// One record per line: address TAB name TAB description.
inline std::string export_flat(const ChannelDatabase& db) {
  std::string out;
  for (const auto& r : db.records()) {
    out += r.address;
    out += '\t';
    out += r.name.value_or("");
    out += '\t';
    out += r.description;
    out += '\n';
  }
  return out;
}

// Parses the flat export back into a database with the flat schema.
inline std::shared_ptr<const ChannelDatabase> import_flat(std::string_view text) {
  std::vector<ChannelRecord> records;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string_view::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string_view::npos) throw ParseError("flat channel line needs three tab-separated fields");
    ChannelRecord r;
    r.address = std::string(line.substr(0, t1));
    const auto name = line.substr(t1 + 1, t2 - t1 - 1);
    if (!name.empty()) r.name = std::string(name);
    r.description = std::string(line.substr(t2 + 1));
    r.path = {{"address", r.address}};
    records.push_back(std::move(r));
  }
  return std::make_shared<const ChannelDatabase>(HierarchySchema::flat(), std::move(records));
}

}  // namespace chanfind
