#pragma once

// Whole-dictionary matching: decompose the request, match each sub-query
// against every (name, description) pair, resolve names to addresses and
// validate against the database.

#include <cctype>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "chanfind/channel_db.hpp"
#include "chanfind/finder.hpp"
#include "chanfind/selector.hpp"

namespace chanfind {

struct DirectConfig {
  std::size_t direct_limit = 2000;
  std::size_t comfortable_size = 1000;  // above this a warning is attached
  int max_correction_rounds = 2;
  bool decompose = true;
  bool allow_abstain = true;
  std::string facility_terms;  // glossary text placed in the matching context
};

namespace direct_detail {

inline std::string option_id(const ChannelRecord& r) { return r.name ? *r.name : r.address; }

inline std::string dictionary_context(const ChannelDatabase& db, const DirectConfig& cfg) {
  std::string ctx =
      "Match the operator request against the channel dictionary below (one line per channel: name - "
      "description). Prefer precision over recall: select only channels that clearly match, and abstain "
      "when none does.";
  if (!cfg.facility_terms.empty()) ctx += "\nFacility terminology:\n" + cfg.facility_terms;
  if (!db.glossary_terms().empty()) {
    ctx += "\nGlossary:";
    for (const auto& [term, canonical] : db.glossary_terms()) ctx += "\n  " + term + " = " + canonical;
  }
  return ctx;
}

}  // namespace direct_detail

inline SubQueryResult match_subquery(const std::string& subquery, const ChannelDatabase& db, Selector& selector,
                                     const DirectConfig& cfg, std::vector<std::string>& rejected) {
  SubQueryResult out{subquery, {}, false, {}};
  std::map<std::string, const ChannelRecord*> by_id;
  ChoiceRequest req;
  req.context = direct_detail::dictionary_context(db, cfg);
  req.query = subquery;
  req.multi_select = true;
  req.allow_abstain = cfg.allow_abstain;
  for (const auto& r : db.records()) {
    const auto id = direct_detail::option_id(r);
    if (by_id.emplace(id, &r).second) req.options.push_back({id, id, r.description, false});
  }
  std::set<std::string> excluded;
  for (int round = 0; round <= cfg.max_correction_rounds; ++round) {
    const auto resp = selector.choose(req);
    if (resp.abstained || resp.selected.empty()) {
      out.abstained = true;
      out.note = resp.rationale.value_or("abstained");
      return out;
    }
    // Second dictionary layer: name -> address, then ground-truth membership.
    std::vector<std::string> candidates;
    for (const auto& id : resp.selected) candidates.push_back(by_id.at(id)->address);
    auto check = validate_channels(candidates, db);
    if (check.invalid.empty()) {
      out.channels = std::move(check.valid);
      return out;
    }
    for (const auto& bad : check.invalid) rejected.push_back(bad);
    for (const auto& id : resp.selected)
      if (!db.contains(by_id.at(id)->address)) excluded.insert(id);
    std::erase_if(req.options, [&](const ChoiceOption& o) { return excluded.count(o.id) > 0; });
    if (req.options.empty()) break;
    req.context += "\nThese channels do not exist and must not be selected again: " +
                   join(std::vector<std::string>(excluded.begin(), excluded.end()), ", ");
  }
  out.abstained = true;
  out.note = "no valid channel after correction rounds";
  return out;
}

inline FinderResult find_direct(const std::string& query, const ChannelDatabase& db, Selector& selector,
                                const DirectConfig& cfg = {}) {
  if (db.size() > cfg.direct_limit)
    throw DatabaseTooLarge(std::to_string(db.size()) + " channels exceed the in-context limit of " +
                           std::to_string(cfg.direct_limit) + "; use hierarchical navigation or exploration");
  FinderResult result;
  if (db.size() > cfg.comfortable_size)
    result.warnings.push_back("dictionary of " + std::to_string(db.size()) + " channels is large for in-context matching");
  for (const auto& r : db.records())
    if (!r.name) {
      result.warnings.push_back("records without names are presented by address");
      break;
    }

  const auto subs = cfg.decompose ? selector.decompose(query) : std::vector<std::string>{trim(query)};
  std::vector<std::vector<std::string>> rejected(subs.size());
  result.subqueries = run_indexed(subs.size(), [&](std::size_t i) {
    return match_subquery(subs[i], db, selector, cfg, rejected[i]);
  });
  for (auto& r : rejected) result.rejected.insert(result.rejected.end(), r.begin(), r.end());
  aggregate(result);
  result.selector_calls = selector.calls_used();
  result.trace = {{"paradigm", "direct"}, {"subqueries", subs}};
  return result;
}

// Generated names: PascalCase, unique within the output (numeric suffix on
// collision, in input order).
inline std::map<std::string, std::string> generate_names(
    const std::vector<std::pair<std::string, std::string>>& records, Selector& selector) {
  std::vector<std::string> descriptions;
  for (const auto& [address, desc] : records) {
    if (trim(desc).empty()) throw EmptyDescription("channel '" + address + "' has no description");
    descriptions.push_back(desc);
  }
  const auto raw = selector.name_channels(descriptions);
  if (raw.size() != records.size()) throw InvalidAfterRetry("name generator returned the wrong number of names");
  std::map<std::string, std::string> out;
  std::set<std::string> used;
  for (std::size_t i = 0; i < records.size(); ++i) {
    // Keep the backend's casing, only strip characters outside [A-Za-z0-9].
    std::string base;
    for (char c : raw[i])
      if (std::isalnum(static_cast<unsigned char>(c))) base += c;
    if (!base.empty()) base[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(base[0])));
    if (base.empty()) base = pascal_case(content_tokens(records[i].second));
    if (base.empty()) base = "Channel";
    std::string name = base;
    for (int n = 2; used.count(name); ++n) name = base + std::to_string(n);
    used.insert(name);
    out[records[i].first] = name;
  }
  return out;
}

}  // namespace chanfind
