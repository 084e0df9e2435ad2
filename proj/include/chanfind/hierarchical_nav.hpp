#pragma once

// Level-by-level descent through the materialized channel tree. Each step
// offers the children of the current node; multi-selection branches the
// search (capped), a dead end gets one backtrack before the branch abstains.

#include <algorithm>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "chanfind/channel_db.hpp"
#include "chanfind/finder.hpp"
#include "chanfind/selector.hpp"

namespace chanfind {

struct NavConfig {
  std::size_t branch_cap = 4;
  bool allow_abstain = true;
  bool decompose = true;
  bool honor_intent = true;  // restrict suffix options to the role the query asks for
};

inline constexpr const char* kStopHere = "(stop here)";

struct NavStep {
  std::string position;  // values chosen so far, joined by '/'
  std::vector<std::string> levels;
  std::vector<std::string> options;
  std::vector<std::string> selected;
  bool abstained = false;
  bool backtrack = false;
};

struct NavTrace {
  std::vector<NavStep> steps;
  std::vector<std::string> addresses;
  int selector_calls = 0;
  bool abstained = false;
  bool backtracked = false;

  bool branched() const {
    return std::any_of(steps.begin(), steps.end(), [](const NavStep& s) { return s.selected.size() > 1; });
  }
};

struct QueryIntent {
  SuffixRole role = SuffixRole::kNone;
  std::string navigation_query;  // query with the intent verbs removed
};

// "set the gauge 1 pressure" -> setpoint; "check current vacuum" -> readback.
inline QueryIntent detect_intent(const std::string& query) {
  static const std::set<std::string> kSetVerbs = {"set", "adjust", "change", "write"};
  static const std::set<std::string> kReadVerbs = {"read", "check", "monitor", "measure"};
  static const std::set<std::string> kSetNouns = {"setpoint", "setpoints"};
  static const std::set<std::string> kReadNouns = {"readback", "readbacks", "measured", "reading", "readings"};
  std::vector<std::string> words;
  std::string cur;
  for (char c : query) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) words.push_back(cur), cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) words.push_back(cur);

  auto bare = [](const std::string& w) {
    std::string out;
    for (char c : w)
      if (std::isalnum(static_cast<unsigned char>(c))) out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
  };
  QueryIntent intent;
  std::vector<std::string> kept;
  // Verbs only count in imperative position ("please set ...", "... and read ...");
  // elsewhere "monitor" or "change" are plain nouns.
  bool at_start = true;
  for (std::size_t i = 0; i < words.size(); ++i) {
    const auto w = bare(words[i]);
    const bool lead = at_start;
    at_start = w == "please" || w == "and" || w == "then" || w.empty();
    if (!lead) {
      if (intent.role == SuffixRole::kNone && kSetNouns.count(w)) intent.role = SuffixRole::kSetpoint;
      if (intent.role == SuffixRole::kNone && kReadNouns.count(w)) intent.role = SuffixRole::kReadback;
      kept.push_back(words[i]);
      continue;
    }
    if (kSetVerbs.count(w)) {
      if (intent.role == SuffixRole::kNone) intent.role = SuffixRole::kSetpoint;
      continue;
    }
    if (kReadVerbs.count(w)) {
      if (intent.role == SuffixRole::kNone) intent.role = SuffixRole::kReadback;
      // "check current X": here "current" means present value, not amperes.
      if (i + 2 < words.size() && bare(words[i + 1]) == "current") ++i;
      continue;
    }
    if (intent.role == SuffixRole::kNone && kSetNouns.count(w)) intent.role = SuffixRole::kSetpoint;
    if (intent.role == SuffixRole::kNone && kReadNouns.count(w)) intent.role = SuffixRole::kReadback;
    kept.push_back(words[i]);
  }
  intent.navigation_query = kept.empty() ? trim(query) : join(kept, " ");
  return intent;
}

namespace nav_detail {

struct Branch {
  std::vector<NavStep> steps;
  std::vector<std::string> addresses;
  bool dead = false;
  bool used_backtrack = false;
};

struct Context {
  const ChannelDatabase& db;
  Selector& selector;
  const NavConfig& cfg;
  std::string query;
  SuffixRole intent;
};

inline bool is_suffix_node(const ChannelDatabase& db, const TreeNode& n) {
  return n.children.empty() && db.schema().role_for(n.value) != SuffixRole::kNone;
}

inline Branch explore(const Context& cx, const TreeNode* parent, const std::vector<const TreeNode*>& position,
                      const std::vector<std::string>& resolved, bool can_backtrack) {
  // Candidate children, with the query's suffix intent applied.
  std::vector<const TreeNode*> kids;
  const auto& children = parent ? parent->children : cx.db.roots();
  for (const auto& c : children) {
    if (cx.cfg.honor_intent && cx.intent != SuffixRole::kNone && is_suffix_node(cx.db, c) &&
        cx.db.schema().role_for(c.value) != cx.intent)
      continue;
    kids.push_back(&c);
  }

  std::vector<std::string> pos_values;
  for (const auto* n : position) pos_values.push_back(n->value);
  const std::string where = join(pos_values, "/");

  ChoiceRequest req;
  req.query = cx.query;
  req.resolved = resolved;
  req.multi_select = true;
  req.max_selected = cx.cfg.branch_cap;
  req.allow_abstain = cx.cfg.allow_abstain;
  std::set<std::string> levels;
  std::vector<const TreeNode*> by_option;  // nullptr = stop here
  std::set<std::string> ids;
  for (const auto* k : kids) {
    std::string id = k->value;
    if (!ids.insert(id).second) ids.insert(id = k->value + "@" + k->level);
    req.options.push_back({id, k->value, k->description, false});
    by_option.push_back(k);
    levels.insert(k->level);
  }
  if (parent && parent->is_channel) {
    req.options.push_back({kStopHere, kStopHere, "the " + parent->description + " channel itself", true});
    by_option.push_back(nullptr);
  }
  req.context = "Navigate the channel hierarchy one level at a time. Current position: " +
                (where.empty() ? std::string("(root)") : where) + ". Choose the next " +
                join(std::vector<std::string>(levels.begin(), levels.end()), " or ") +
                " needed by the query; choose several only if the query asks for several.";

  Branch out;
  if (req.options.empty()) {
    out.dead = true;
    return out;
  }

  bool backtracking = false;
  while (true) {
    const auto resp = cx.selector.choose(req);
    NavStep step{where, std::vector<std::string>(levels.begin(), levels.end()), {}, resp.selected, resp.abstained,
                 backtracking};
    for (const auto& o : req.options) step.options.push_back(o.id);
    out.steps.push_back(std::move(step));
    if (resp.abstained || resp.selected.empty()) {
      out.dead = true;
      return out;
    }

    // Selected options in presentation order.
    std::vector<std::size_t> picked;
    for (std::size_t i = 0; i < req.options.size(); ++i)
      if (std::find(resp.selected.begin(), resp.selected.end(), req.options[i].id) != resp.selected.end())
        picked.push_back(i);

    auto sub = run_indexed(picked.size(), [&](std::size_t j) {
      const TreeNode* node = by_option[picked[j]];
      Branch b;
      if (!node) {
        b.addresses.push_back(parent->address);
      } else if (node->children.empty()) {
        b.addresses.push_back(node->address);
      } else {
        auto next_pos = position;
        next_pos.push_back(node);
        auto next_resolved = resolved;
        next_resolved.push_back(node->value + " " + node->description);
        b = explore(cx, node, next_pos, next_resolved, can_backtrack);
      }
      return b;
    });

    bool any_alive = false;
    bool child_backtracked = false;
    std::set<std::string> dead_ids;
    for (std::size_t j = 0; j < sub.size(); ++j) {
      auto& b = sub[j];
      out.steps.insert(out.steps.end(), b.steps.begin(), b.steps.end());
      out.addresses.insert(out.addresses.end(), b.addresses.begin(), b.addresses.end());
      child_backtracked = child_backtracked || b.used_backtrack;
      if (b.dead) {
        dead_ids.insert(req.options[picked[j]].id);
      } else {
        any_alive = true;
      }
    }
    out.used_backtrack = out.used_backtrack || child_backtracked;
    if (any_alive) return out;

    // Every branch dead-ended: one backtrack, with the dead options removed.
    if (!can_backtrack || child_backtracked || backtracking) {
      out.dead = true;
      return out;
    }
    std::vector<ChoiceOption> remaining;
    std::vector<const TreeNode*> remaining_nodes;
    for (std::size_t i = 0; i < req.options.size(); ++i) {
      if (dead_ids.count(req.options[i].id)) continue;
      remaining.push_back(req.options[i]);
      remaining_nodes.push_back(by_option[i]);
    }
    if (remaining.empty()) {
      out.dead = true;
      return out;
    }
    req.options = std::move(remaining);
    by_option = std::move(remaining_nodes);
    backtracking = true;
    out.used_backtrack = true;
  }
}

}  // namespace nav_detail

inline NavTrace navigate(const std::string& query, const ChannelDatabase& db, Selector& selector,
                         const NavConfig& cfg = {}, SuffixRole intent = SuffixRole::kNone) {
  if (!db.has_tree()) throw ConfigError("database '" + db.name() + "' has no hierarchy to navigate");
  nav_detail::Context cx{db, selector, cfg, query, intent};
  auto b = nav_detail::explore(cx, nullptr, {}, {}, true);
  NavTrace t;
  t.steps = std::move(b.steps);
  t.selector_calls = static_cast<int>(t.steps.size());
  t.backtracked = b.used_backtrack;
  std::set<std::string> seen;
  for (auto& a : b.addresses)
    if (seen.insert(a).second) t.addresses.push_back(std::move(a));
  t.abstained = t.addresses.empty();
  return t;
}

inline nlohmann::json to_json(const NavTrace& t) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : t.steps)
    steps.push_back({{"position", s.position},
                     {"levels", s.levels},
                     {"options", s.options.size()},
                     {"selected", s.selected},
                     {"abstained", s.abstained},
                     {"backtrack", s.backtrack}});
  return {{"steps", steps}, {"selector_calls", t.selector_calls}, {"addresses", t.addresses},
          {"abstained", t.abstained}, {"branched", t.branched()}};
}

inline FinderResult find_hierarchical(const std::string& query, const ChannelDatabase& db, Selector& selector,
                                      const NavConfig& cfg = {}) {
  if (!db.has_tree()) throw ConfigError("database '" + db.name() + "' has no hierarchy to navigate");
  FinderResult result;
  const auto subs = cfg.decompose ? selector.decompose(query) : std::vector<std::string>{trim(query)};
  auto traces = run_indexed(subs.size(), [&](std::size_t i) {
    const auto intent = detect_intent(subs[i]);
    return navigate(intent.navigation_query, db, selector, cfg, cfg.honor_intent ? intent.role : SuffixRole::kNone);
  });
  nlohmann::json trace_json = nlohmann::json::array();
  for (std::size_t i = 0; i < subs.size(); ++i) {
    SubQueryResult s{subs[i], {}, traces[i].abstained, {}};
    // Reassemble from the selected path and check membership.
    std::vector<std::string> assembled;
    for (const auto& a : traces[i].addresses) {
      const auto* rec = db.find(a);
      assembled.push_back(rec ? db.schema().assemble(rec->path) : a);
    }
    auto check = validate_channels(assembled, db);
    s.channels = std::move(check.valid);
    result.rejected.insert(result.rejected.end(), check.invalid.begin(), check.invalid.end());
    if (s.channels.empty()) {
      s.abstained = true;
      s.note = traces[i].backtracked ? "dead end after backtrack" : "no matching branch";
    }
    result.subqueries.push_back(std::move(s));
    auto tj = to_json(traces[i]);
    tj["subquery"] = subs[i];
    trace_json.push_back(std::move(tj));
  }
  aggregate(result);
  result.selector_calls = selector.calls_used();
  result.trace = {{"paradigm", "tree"}, {"navigations", trace_json}};
  return result;
}

}  // namespace chanfind
