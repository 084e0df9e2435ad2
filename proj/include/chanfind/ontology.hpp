#pragma once

// Small triple store with a conjunctive query subset: SELECT over basic graph
// patterns, `a` for rdf:type and a `+` closure marker on hierarchy predicates
// (reflexive-transitive). Plus channel-to-graph mapping and template-based
// natural-language translation driven by the selector.

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "chanfind/channel_db.hpp"
#include "chanfind/document.hpp"
#include "chanfind/errors.hpp"
#include "chanfind/finder.hpp"
#include "chanfind/selector.hpp"

namespace chanfind {

using Term = std::string;  // opaque: "core:Magnet", "<http://...>", "\"literal\""

struct Triple {
  Term s, p, o;
  friend bool operator==(const Triple&, const Triple&) = default;
  friend auto operator<=>(const Triple&, const Triple&) = default;
};

inline constexpr const char* kRdfType = "rdf:type";
inline constexpr const char* kSubClassOf = "rdfs:subClassOf";
inline constexpr const char* kSubPropertyOf = "rdfs:subPropertyOf";
inline constexpr const char* kLabel = "rdfs:label";

inline bool is_literal(const Term& t) { return !t.empty() && t.front() == '"'; }

inline std::string literal_text(const Term& t) {
  if (!is_literal(t) || t.size() < 2) return t;
  std::string out;
  for (std::size_t i = 1; i + 1 < t.size(); ++i) {
    if (t[i] == '\\' && i + 2 < t.size()) ++i;
    out += t[i];
  }
  return out;
}

inline Term make_literal(const std::string& text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

class TripleStore {
 public:
  TripleStore() { hierarchical_ = {kSubClassOf, kSubPropertyOf}; }

  void add(const Triple& t) {
    if (triples_.insert(t).second) by_predicate_[t.p].emplace_back(t.s, t.o);
  }
  void add(const std::vector<Triple>& ts) {
    for (const auto& t : ts) add(t);
  }
  void add_prefix(const std::string& prefix, const std::string& iri) { prefixes_[prefix] = iri; }
  void add_hierarchical(const std::string& predicate) { hierarchical_.insert(predicate); }

  const std::set<Triple>& triples() const { return triples_; }
  const std::map<std::string, std::string>& prefixes() const { return prefixes_; }
  const std::set<std::string>& hierarchical_predicates() const { return hierarchical_; }
  std::size_t size() const { return triples_.size(); }
  bool has_predicate(const Term& p) const { return by_predicate_.count(p) > 0; }

  const std::vector<std::pair<Term, Term>>& with_predicate(const Term& p) const {
    static const std::vector<std::pair<Term, Term>> kEmpty;
    auto it = by_predicate_.find(p);
    return it == by_predicate_.end() ? kEmpty : it->second;
  }

  // First rdfs:label literal of `t`, or empty.
  std::string label(const Term& t) const {
    for (const auto& [s, o] : with_predicate(kLabel))
      if (s == t) return literal_text(o);
    return {};
  }

 private:
  std::set<Triple> triples_;
  std::map<Term, std::vector<std::pair<Term, Term>>> by_predicate_;
  std::map<std::string, std::string> prefixes_;
  std::set<std::string> hierarchical_;
};

namespace onto_detail {

// Shared lexer for triple files and queries. Tracks byte offsets.
class Lexer {
 public:
  explicit Lexer(std::string_view text, std::size_t base = 0) : text_(text), base_(base) {}

  std::size_t position() const { return base_ + pos_; }
  bool done() {
    skip();
    return pos_ >= text_.size();
  }
  char peek() {
    skip();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  void expect(char c, const char* what) {
    if (peek() != c) throw SyntaxError(std::string("expected ") + what, position());
    ++pos_;
  }
  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  // Next whitespace-delimited word (stops before '{', '}' and a final '.').
  std::string word() {
    skip();
    const auto start = pos_;
    if (pos_ < text_.size() && text_[pos_] == '"') return quoted();
    if (pos_ < text_.size() && text_[pos_] == '<') {
      const auto close = text_.find('>', pos_);
      if (close == std::string_view::npos) throw SyntaxError("unterminated IRI", position());
      pos_ = close + 1;
      return std::string(text_.substr(start, pos_ - start));
    }
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '{' &&
           text_[pos_] != '}') {
      if (text_[pos_] == '.' && (pos_ + 1 == text_.size() || std::isspace(static_cast<unsigned char>(text_[pos_ + 1])) ||
                                 text_[pos_ + 1] == '}'))
        break;
      ++pos_;
    }
    return std::string(text_.substr(start, pos_ - start));
  }

 private:
  std::string quoted() {
    const auto start = pos_++;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\') ++pos_;
      ++pos_;
    }
    if (pos_ >= text_.size()) throw SyntaxError("unterminated literal", base_ + start);
    ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }
  void skip() {
    while (pos_ < text_.size()) {
      if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      } else if (text_[pos_] == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t base_;
  std::size_t pos_ = 0;
};

// Full IRIs under a declared prefix are compacted; everything else is opaque.
inline Term normalize_term(const std::string& raw, const std::map<std::string, std::string>& prefixes) {
  if (raw == "a") return kRdfType;
  if (raw.size() > 2 && raw.front() == '<' && raw.back() == '>') {
    const auto iri = raw.substr(1, raw.size() - 2);
    for (const auto& [p, base] : prefixes)
      if (!base.empty() && iri.rfind(base, 0) == 0) return p + ":" + iri.substr(base.size());
  }
  return raw;
}

inline void check_prefixed(const Term& t, const std::map<std::string, std::string>& prefixes, std::size_t pos) {
  if (t.empty() || t.front() == '<' || t.front() == '"' || t.front() == '?') return;
  const auto colon = t.find(':');
  if (colon == std::string::npos) return;
  if (!prefixes.count(t.substr(0, colon))) throw UnknownPrefix("undeclared prefix '" + t.substr(0, colon) + "' at " + std::to_string(pos));
}

inline std::map<std::string, std::string> default_prefixes() {
  return {{"rdf", "http://www.w3.org/1999/02/22-rdf-syntax-ns#"},
          {"rdfs", "http://www.w3.org/2000/01/rdf-schema#"},
          {"core", "urn:chanfind:core#"},
          {"pv", "urn:chanfind:pv#"}};
}

}  // namespace onto_detail

// Line-oriented triples: "s p o ." with "@prefix p: <iri> ." declarations.
inline void parse_triples_into(TripleStore& store, std::string_view text) {
  auto prefixes = onto_detail::default_prefixes();
  for (const auto& [p, iri] : store.prefixes()) prefixes[p] = iri;
  std::size_t line_start = 0;
  while (line_start < text.size()) {
    auto eol = text.find('\n', line_start);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = text.substr(line_start, eol - line_start);
    onto_detail::Lexer lx(line, line_start);
    line_start = eol + 1;
    if (lx.done()) continue;
    const auto first = lx.word();
    if (first == "@prefix") {
      auto name = lx.word();
      if (name.empty() || name.back() != ':') throw SyntaxError("prefix name must end with ':'", lx.position());
      name.pop_back();
      const auto iri = lx.word();
      if (iri.size() < 2 || iri.front() != '<') throw SyntaxError("prefix IRI must be in <>", lx.position());
      lx.expect('.', "'.' after prefix");
      prefixes[name] = iri.substr(1, iri.size() - 2);
      store.add_prefix(name, prefixes[name]);
      continue;
    }
    const auto pos = lx.position();
    const auto p = lx.word();
    const auto o = lx.word();
    if (p.empty() || o.empty()) throw SyntaxError("triple needs subject, predicate and object", pos);
    lx.expect('.', "'.' at end of triple");
    if (!lx.done()) throw SyntaxError("trailing text after triple", lx.position());
    Triple t{onto_detail::normalize_term(first, prefixes), onto_detail::normalize_term(p, prefixes),
             onto_detail::normalize_term(o, prefixes)};
    for (const auto* term : {&t.s, &t.p, &t.o}) onto_detail::check_prefixed(*term, prefixes, pos);
    store.add(t);
  }
}

inline TripleStore parse_triples(std::string_view text) {
  TripleStore s;
  parse_triples_into(s, text);
  return s;
}

inline std::string serialize_triples(const TripleStore& store) {
  std::string out;
  for (const auto& [p, iri] : store.prefixes()) out += "@prefix " + p + ": <" + iri + "> .\n";
  for (const auto& t : store.triples()) out += t.s + " " + t.p + " " + t.o + " .\n";
  return out;
}

// ---- closure ----------------------------------------------------------------

struct ClosureResult {
  std::map<Term, std::set<Term>> reachable;  // reflexive over the predicate's nodes
  bool has_cycle = false;
  std::vector<Term> cycle_nodes;
};

inline ClosureResult materialize_closure(const TripleStore& store, const Term& predicate) {
  std::map<Term, std::vector<Term>> adj;
  std::set<Term> nodes;
  for (const auto& [s, o] : store.with_predicate(predicate)) {
    adj[s].push_back(o);
    nodes.insert(s);
    nodes.insert(o);
  }
  ClosureResult r;
  std::set<Term> cyclic;
  for (const auto& n : nodes) {
    auto& seen = r.reachable[n];
    seen.insert(n);
    std::vector<Term> stack = {n};
    bool back_to_self = false;
    while (!stack.empty()) {
      const auto cur = stack.back();
      stack.pop_back();
      auto it = adj.find(cur);
      if (it == adj.end()) continue;
      for (const auto& next : it->second) {
        if (next == n) back_to_self = true;
        if (seen.insert(next).second) stack.push_back(next);
      }
    }
    if (back_to_self) cyclic.insert(n);
  }
  r.has_cycle = !cyclic.empty();
  r.cycle_nodes.assign(cyclic.begin(), cyclic.end());
  return r;
}

// ---- queries ----------------------------------------------------------------

struct TriplePattern {
  Term s, p, o;
  bool closure = false;  // p is followed by '+'
};

struct GraphQuery {
  std::vector<std::string> select;  // variable names with '?'
  std::vector<TriplePattern> patterns;
};

struct BindingsTable {
  std::vector<std::string> vars;
  std::vector<std::vector<Term>> rows;  // sorted, unique
  std::vector<std::string> warnings;
};

inline bool is_var(const Term& t) { return !t.empty() && t.front() == '?'; }

inline GraphQuery parse_query(std::string_view text) {
  onto_detail::Lexer lx(text);
  auto prefixes = onto_detail::default_prefixes();
  auto upper = [](std::string s) {
    for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
  };
  GraphQuery q;
  while (true) {
    const auto pos = lx.position();
    auto w = lx.word();
    if (upper(w) == "PREFIX") {
      auto name = lx.word();
      if (name.empty() || name.back() != ':') throw SyntaxError("prefix name must end with ':'", lx.position());
      name.pop_back();
      auto iri = lx.word();
      if (iri.size() < 2 || iri.front() != '<') throw SyntaxError("prefix IRI must be in <>", lx.position());
      prefixes[name] = iri.substr(1, iri.size() - 2);
      continue;
    }
    if (upper(w) != "SELECT") throw SyntaxError("expected SELECT", pos);
    break;
  }
  while (true) {
    const auto pos = lx.position();
    auto w = lx.word();
    if (upper(w) == "DISTINCT") continue;
    if (upper(w) == "WHERE") break;
    if (!is_var(w) || w.size() < 2) throw SyntaxError("expected variable or WHERE", pos);
    q.select.push_back(w);
  }
  if (q.select.empty()) throw SyntaxError("SELECT needs at least one variable", lx.position());
  lx.expect('{', "'{'");
  auto term = [&](bool predicate, bool& closure) {
    const auto pos = lx.position();
    auto w = lx.word();
    if (w.empty()) throw SyntaxError("expected term", pos);
    closure = false;
    if (predicate && w.size() > 1 && w.back() == '+') {
      closure = true;
      w.pop_back();
    }
    auto t = onto_detail::normalize_term(w, prefixes);
    onto_detail::check_prefixed(t, prefixes, pos);
    return t;
  };
  while (!lx.accept('}')) {
    if (lx.done()) throw SyntaxError("missing '}'", lx.position());
    bool c1 = false, c2 = false, c3 = false;
    TriplePattern tp;
    tp.s = term(false, c1);
    const auto ppos = lx.position();
    tp.p = term(true, c2);
    tp.o = term(false, c3);
    tp.closure = c2;
    if (tp.closure && is_var(tp.p)) throw SyntaxError("closure marker needs a fixed predicate", ppos);
    q.patterns.push_back(tp);
    if (!lx.accept('.')) {
      if (lx.peek() != '}') throw SyntaxError("expected '.' or '}'", lx.position());
    }
  }
  if (!lx.done()) throw SyntaxError("trailing text after query", lx.position());
  if (q.patterns.empty()) throw SyntaxError("empty WHERE clause", lx.position());
  std::set<std::string> bound;
  for (const auto& p : q.patterns)
    for (const auto* t : {&p.s, &p.p, &p.o})
      if (is_var(*t)) bound.insert(*t);
  for (const auto& v : q.select)
    if (!bound.count(v)) throw QueryError("selected variable " + v + " does not occur in WHERE");
  return q;
}

namespace onto_detail {

using Binding = std::map<std::string, Term>;

class Evaluator {
 public:
  Evaluator(const TripleStore& store, const GraphQuery& q) : store_(store), q_(q) {}

  std::vector<Binding> run() {
    std::vector<bool> used(q_.patterns.size(), false);
    Binding b;
    solve(b, used, 0);
    return std::move(out_);
  }

 private:
  Term resolve(const Term& t, const Binding& b) const {
    if (!is_var(t)) return t;
    auto it = b.find(t);
    return it == b.end() ? Term() : it->second;
  }

  // Fewest unbound positions first; ties by declaration order.
  std::size_t next_pattern(const Binding& b, const std::vector<bool>& used) const {
    std::size_t best = q_.patterns.size();
    int best_free = 4;
    for (std::size_t i = 0; i < q_.patterns.size(); ++i) {
      if (used[i]) continue;
      const auto& p = q_.patterns[i];
      int free = 0;
      for (const auto* t : {&p.s, &p.p, &p.o}) free += resolve(*t, b).empty() ? 1 : 0;
      if (free < best_free) best_free = free, best = i;
    }
    return best;
  }

  static bool bind(Binding& b, const Term& pattern_term, const Term& value, std::vector<std::string>& added) {
    if (!is_var(pattern_term)) return pattern_term == value;
    auto it = b.find(pattern_term);
    if (it != b.end()) return it->second == value;
    b.emplace(pattern_term, value);
    added.push_back(pattern_term);
    return true;
  }

  const ClosureResult& closure(const Term& p) {
    auto it = closures_.find(p);
    if (it == closures_.end()) it = closures_.emplace(p, materialize_closure(store_, p)).first;
    return it->second;
  }

  void solve(Binding& b, std::vector<bool>& used, std::size_t depth) {
    if (depth == q_.patterns.size()) {
      out_.push_back(b);
      return;
    }
    const auto i = next_pattern(b, used);
    const auto& pat = q_.patterns[i];
    used[i] = true;
    const Term s = resolve(pat.s, b), p = resolve(pat.p, b), o = resolve(pat.o, b);

    auto emit = [&](const Term& ts, const Term& tp, const Term& to) {
      std::vector<std::string> added;
      if (bind(b, pat.s, ts, added) && bind(b, pat.p, tp, added) && bind(b, pat.o, to, added)) solve(b, used, depth + 1);
      for (const auto& v : added) b.erase(v);
    };

    if (pat.closure) {
      const auto& cl = closure(p);
      if (!s.empty()) {
        auto it = cl.reachable.find(s);
        if (it == cl.reachable.end()) {
          if (nodes().count(s)) emit(s, p, s);  // zero-length path
        } else {
          for (const auto& t : it->second) emit(s, p, t);
        }
      } else if (!o.empty()) {
        bool has_o = false;
        for (const auto& [from, tos] : cl.reachable) {
          if (tos.count(o)) emit(from, p, o);
          has_o = has_o || from == o;
        }
        if (!has_o && nodes().count(o)) emit(o, p, o);
      } else {
        for (const auto& [from, tos] : cl.reachable)
          for (const auto& t : tos) emit(from, p, t);
        // Zero-length paths for graph nodes the predicate never touches.
        for (const auto& t : nodes())
          if (!cl.reachable.count(t)) emit(t, p, t);
      }
    } else if (!p.empty()) {
      for (const auto& [ts, to] : store_.with_predicate(p))
        if ((s.empty() || s == ts) && (o.empty() || o == to)) emit(ts, p, to);
    } else {
      for (const auto& t : store_.triples())
        if ((s.empty() || s == t.s) && (o.empty() || o == t.o)) emit(t.s, t.p, t.o);
    }
    used[i] = false;
  }

  const std::set<Term>& nodes() {
    if (nodes_.empty())
      for (const auto& t : store_.triples()) nodes_.insert(t.s), nodes_.insert(t.o);
    return nodes_;
  }

  const TripleStore& store_;
  const GraphQuery& q_;
  std::map<Term, ClosureResult> closures_;
  std::set<Term> nodes_;
  std::vector<Binding> out_;
};

}  // namespace onto_detail

inline BindingsTable evaluate(const GraphQuery& q, const TripleStore& store) {
  BindingsTable table;
  table.vars = q.select;
  for (const auto& p : q.patterns) {
    if (p.closure && !store.hierarchical_predicates().count(p.p))
      throw QueryError("closure is only allowed on hierarchy predicates, not " + p.p);
    if (!is_var(p.p) && !store.has_predicate(p.p)) table.warnings.push_back("unknown predicate " + p.p);
  }
  std::set<std::vector<Term>> rows;
  for (const auto& b : onto_detail::Evaluator(store, q).run()) {
    std::vector<Term> row;
    for (const auto& v : q.select) row.push_back(b.at(v));
    rows.insert(std::move(row));
  }
  table.rows.assign(rows.begin(), rows.end());
  std::sort(table.warnings.begin(), table.warnings.end());
  table.warnings.erase(std::unique(table.warnings.begin(), table.warnings.end()), table.warnings.end());
  return table;
}

inline BindingsTable run_query(std::string_view text, const TripleStore& store) {
  return evaluate(parse_query(text), store);
}

// ---- core ontology and channel mapping ---------------------------------------

// Class -> (parent, label words). Labels carry plural forms so request words
// match without stemming.
inline const std::vector<std::tuple<std::string, std::string, std::string>>& core_classes() {
  static const std::vector<std::tuple<std::string, std::string, std::string>> kClasses = {
      {"core:Device", "", "device devices equipment"},
      {"core:Magnet", "core:Device", "magnet magnets"},
      {"core:Dipole", "core:Magnet", "dipole dipoles bend bends bending magnet"},
      {"core:Quadrupole", "core:Magnet", "quadrupole quadrupoles quad quads"},
      {"core:Sextupole", "core:Magnet", "sextupole sextupoles"},
      {"core:Corrector", "core:Magnet", "corrector correctors steering steerer steerers"},
      {"core:HorizontalCorrector", "core:Corrector", "horizontal corrector correctors"},
      {"core:VerticalCorrector", "core:Corrector", "vertical corrector correctors"},
      {"core:Diagnostic", "core:Device", "diagnostic diagnostics instrument instruments"},
      {"core:BPM", "core:Diagnostic", "beam position monitor monitors bpm bpms"},
      {"core:BLM", "core:Diagnostic", "beam loss monitor monitors blm blms"},
      {"core:CurrentMonitor", "core:Diagnostic", "current transformer dcct toroid toroids"},
      {"core:Screen", "core:Diagnostic", "screen screens camera cameras profile"},
      {"core:VacuumDevice", "core:Device", "vacuum device devices"},
      {"core:Gauge", "core:VacuumDevice", "gauge gauges"},
      {"core:IonPump", "core:VacuumDevice", "ion pump pumps"},
      {"core:Valve", "core:VacuumDevice", "valve valves"},
      {"core:RFDevice", "core:Device", "rf radio frequency"},
      {"core:Cavity", "core:RFDevice", "cavity cavities"},
      {"core:Klystron", "core:RFDevice", "klystron klystrons"},
      {"core:PowerSupply", "core:Device", "power supply supplies"},
  };
  return kClasses;
}

inline const std::vector<std::tuple<std::string, SuffixRole, std::string>>& core_roles() {
  static const std::vector<std::tuple<std::string, SuffixRole, std::string>> kRoles = {
      {"core:hasSetpoint", SuffixRole::kSetpoint, "setpoint setpoints setting settings set demand"},
      {"core:hasReadback", SuffixRole::kReadback, "readback readbacks reading readings read measured monitor"},
      {"core:hasCommand", SuffixRole::kCommand, "command commands control"},
      {"core:hasStatus", SuffixRole::kStatus, "status state"},
      {"core:hasAuxiliary", SuffixRole::kNone, "auxiliary other"},
  };
  return kRoles;
}

inline TripleStore core_ontology() {
  TripleStore s;
  for (const auto& [p, iri] : onto_detail::default_prefixes()) s.add_prefix(p, iri);
  s.add({"core:Device", kRdfType, "rdfs:Class"});
  for (const auto& [cls, parent, label] : core_classes()) {
    s.add({cls, kRdfType, "rdfs:Class"});
    if (!parent.empty()) s.add({cls, kSubClassOf, parent});
    s.add({cls, kLabel, make_literal(label)});
  }
  s.add({"core:hasSignal", kRdfType, "rdf:Property"});
  s.add({"core:hasSignal", kLabel, make_literal("signal signals channel channels")});
  for (const auto& [pred, role, label] : core_roles()) {
    s.add({pred, kRdfType, "rdf:Property"});
    s.add({pred, kSubPropertyOf, "core:hasSignal"});
    s.add({pred, kLabel, make_literal(label)});
  }
  return s;
}

struct OntologyMapping {
  std::string instance_prefix = "dev:";
  std::string device_key = "device";  // metadata key holding the device identity
  std::string family_key = "family";  // metadata key holding the device family
  std::string role_key;               // metadata key whose value picks the role; empty = suffix role
  std::map<std::string, std::string> classes;  // family -> class term
  std::map<std::string, std::string> roles;    // role value -> predicate
  std::vector<Triple> extra;                   // local class declarations etc.
  std::map<std::string, std::string> prefixes;  // declared for serialization
};

inline OntologyMapping load_mapping(const json& doc) {
  OntologyMapping m;
  m.instance_prefix = get_or<std::string>(doc, "instance_prefix", m.instance_prefix);
  m.device_key = get_or<std::string>(doc, "device_key", m.device_key);
  m.family_key = get_or<std::string>(doc, "family_key", m.family_key);
  m.role_key = get_or<std::string>(doc, "role_key", "");
  if (doc.contains("classes"))
    for (const auto& [k, v] : doc.at("classes").items()) m.classes[k] = v.get<std::string>();
  if (doc.contains("roles"))
    for (const auto& [k, v] : doc.at("roles").items()) m.roles[k] = v.get<std::string>();
  if (doc.contains("prefixes"))
    for (const auto& [k, v] : doc.at("prefixes").items()) m.prefixes[k] = v.get<std::string>();
  if (doc.contains("extra_triples"))
    for (const auto& t : doc.at("extra_triples")) {
      const auto v = t.get<std::vector<std::string>>();
      if (v.size() != 3) throw ParseError("extra triple needs three terms");
      m.extra.push_back({v[0], v[1], v[2]});
    }
  return m;
}

inline std::string channel_term(const std::string& address) { return "pv:" + address; }

inline std::string address_of(const Term& t) { return t.rfind("pv:", 0) == 0 ? t.substr(3) : t; }

// Core ontology triples, mapping extras, then three triples per record:
// (device rdf:type class), (device core:hasSignal channel), (device role channel).
inline std::vector<Triple> map_channels_to_graph(const ChannelDatabase& db, const OntologyMapping& m) {
  const auto core = core_ontology();
  std::vector<Triple> out(core.triples().begin(), core.triples().end());
  out.insert(out.end(), m.extra.begin(), m.extra.end());
  std::map<SuffixRole, std::string> default_roles;
  for (const auto& [pred, role, label] : core_roles()) default_roles[role] = pred;
  for (const auto& r : db.records()) {
    auto fam = r.metadata.find(m.family_key);
    if (fam == r.metadata.end()) throw UnmappedFamily("channel '" + r.address + "' has no '" + m.family_key + "'");
    auto cls = m.classes.find(fam->second);
    if (cls == m.classes.end()) throw UnmappedFamily("family '" + fam->second + "' has no class in the mapping");
    auto dev = r.metadata.find(m.device_key);
    const std::string device = m.instance_prefix + (dev == r.metadata.end() ? r.address : dev->second);
    std::string role = default_roles[r.suffix_role];
    if (!m.role_key.empty()) {
      auto rv = r.metadata.find(m.role_key);
      if (rv != r.metadata.end()) {
        auto it = m.roles.find(rv->second);
        if (it != m.roles.end()) role = it->second;
      }
    } else if (auto it = m.roles.find(to_string(r.suffix_role)); it != m.roles.end()) {
      role = it->second;
    }
    const auto ch = channel_term(r.address);
    out.push_back({device, kRdfType, cls->second});
    out.push_back({device, "core:hasSignal", ch});
    out.push_back({device, role, ch});
  }
  return out;
}

inline TripleStore build_graph(const ChannelDatabase& db, const OntologyMapping& m) {
  TripleStore s = core_ontology();
  for (const auto& [p, iri] : m.prefixes) s.add_prefix(p, iri);
  s.add(map_channels_to_graph(db, m));
  return s;
}

// ---- natural language to query -------------------------------------------------

struct QueryTemplate {
  std::string id;
  std::string description;
  std::string text;  // with {class} and/or {role}
};

struct SlotValue {
  Term term;
  std::string label;
};

struct TemplateLibrary {
  std::vector<QueryTemplate> templates;
  std::vector<SlotValue> classes;
  std::vector<SlotValue> roles;
};

inline TemplateLibrary default_templates(const TripleStore& store = core_ontology()) {
  TemplateLibrary lib;
  lib.templates = {
      {"devices_of_class", "every device belonging to a class",
       "SELECT ?dev WHERE { ?dev a ?cls . ?cls rdfs:subClassOf+ {class} }"},
      {"role_of_class", "the signals of one role for every device of a class",
       "SELECT ?pv WHERE { ?dev a ?cls . ?cls rdfs:subClassOf+ {class} . ?dev {role} ?pv }"},
  };
  for (const auto& [cls, parent, label] : core_classes()) lib.classes.push_back({cls, store.label(cls)});
  for (const auto& [pred, role, label] : core_roles()) lib.roles.push_back({pred, store.label(pred)});
  return lib;
}

struct Translation {
  std::string template_id;
  std::optional<SlotValue> cls;
  std::optional<SlotValue> role;
  std::string text;
  GraphQuery query;
};

namespace onto_detail {

inline std::optional<SlotValue> fill(const std::string& slot, const std::vector<SlotValue>& values,
                                     const std::string& query, const std::vector<std::string>& resolved,
                                     Selector& selector) {
  ChoiceRequest req;
  req.context = "Fill the {" + slot + "} slot of the query template from the request.";
  req.query = query;
  req.resolved = resolved;
  req.allow_abstain = true;
  for (const auto& v : values) req.options.push_back({v.term, v.term, v.label, false});
  const auto resp = selector.choose(req);
  if (resp.abstained || resp.selected.empty()) return std::nullopt;
  for (const auto& v : values)
    if (v.term == resp.selected.front()) return v;
  return std::nullopt;
}

inline std::string slot_vocabulary(const std::vector<SlotValue>& values) {
  std::vector<std::string> labels;
  for (const auto& v : values) labels.push_back(v.label);
  return join(labels, " ");
}

}  // namespace onto_detail

inline Translation translate_nl(const std::string& query, const TemplateLibrary& lib, Selector& selector) {
  ChoiceRequest req;
  req.context = "Pick the query template that expresses the request.";
  req.query = query;
  req.allow_abstain = true;
  for (const auto& t : lib.templates) {
    std::string desc = t.description;
    if (t.text.find("{class}") != std::string::npos) desc += " | " + onto_detail::slot_vocabulary(lib.classes);
    if (t.text.find("{role}") != std::string::npos) desc += " | " + onto_detail::slot_vocabulary(lib.roles);
    req.options.push_back({t.id, t.id, desc, false});
  }
  const auto resp = selector.choose(req);
  if (resp.abstained || resp.selected.empty()) throw NoTemplateMatch("no query template fits '" + query + "'");
  const auto& tmpl = *std::find_if(lib.templates.begin(), lib.templates.end(),
                                   [&](const QueryTemplate& t) { return t.id == resp.selected.front(); });
  Translation tr;
  tr.template_id = tmpl.id;
  tr.text = tmpl.text;
  std::vector<std::string> resolved;
  if (tmpl.text.find("{class}") != std::string::npos) {
    tr.cls = onto_detail::fill("class", lib.classes, query, resolved, selector);
    if (!tr.cls) throw NoTemplateMatch("no class in the request '" + query + "'");
    resolved.push_back(tr.cls->label);
    tr.text = replace_all(tr.text, "{class}", tr.cls->term);
  }
  if (tmpl.text.find("{role}") != std::string::npos) {
    tr.role = onto_detail::fill("role", lib.roles, query, resolved, selector);
    if (!tr.role) throw NoTemplateMatch("no signal role in the request '" + query + "'");
    tr.text = replace_all(tr.text, "{role}", tr.role->term);
  }
  tr.query = parse_query(tr.text);
  return tr;
}

struct OntologyResult {
  Translation translation;
  BindingsTable table;
  std::vector<std::string> channels;  // channel terms in the result, as addresses
};

inline OntologyResult find_ontology(const std::string& query, const TripleStore& store, const TemplateLibrary& lib,
                                    Selector& selector) {
  OntologyResult r;
  r.translation = translate_nl(query, lib, selector);
  r.table = evaluate(r.translation.query, store);
  std::set<std::string> seen;
  for (const auto& row : r.table.rows)
    for (const auto& t : row)
      if (t.rfind("pv:", 0) == 0 && seen.insert(t).second) r.channels.push_back(address_of(t));
  return r;
}

// Finder wrapper: per sub-query translation and evaluation; channels are
// checked against `db` when one is given. A request no template fits abstains.
inline FinderResult find_graph(const std::string& query, const TripleStore& store, const TemplateLibrary& lib,
                               const ChannelDatabase* db, Selector& selector, bool decompose = true) {
  FinderResult result;
  const auto subs = decompose ? selector.decompose(query) : std::vector<std::string>{trim(query)};
  json tj = json::array();
  for (const auto& sq : subs) {
    SubQueryResult s{sq, {}, true, {}};
    json j = {{"subquery", sq}};
    try {
      auto r = find_ontology(sq, store, lib, selector);
      j["template"] = r.translation.template_id;
      j["query"] = r.translation.text;
      j["rows"] = r.table.rows.size();
      if (db) {
        auto check = validate_channels(r.channels, *db);
        s.channels = std::move(check.valid);
        result.rejected.insert(result.rejected.end(), check.invalid.begin(), check.invalid.end());
      } else {
        s.channels = std::move(r.channels);
      }
      result.warnings.insert(result.warnings.end(), r.table.warnings.begin(), r.table.warnings.end());
      s.abstained = s.channels.empty();
      if (s.abstained) s.note = "query matched no channel";
    } catch (const NoTemplateMatch& e) {
      s.note = e.what();
      j["error"] = e.what();
    }
    result.subqueries.push_back(std::move(s));
    tj.push_back(std::move(j));
  }
  aggregate(result);
  result.selector_calls = selector.calls_used();
  result.trace = {{"paradigm", "onto"}, {"translations", tj}};
  return result;
}

}  // namespace chanfind
