#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "support.hpp"

using namespace chanfind;
using chanfind::testing::oracle;

using chanfind::testing::brute_force;
using chanfind::testing::closure_by_squaring;
using chanfind::testing::random_graph;
using chanfind::testing::random_query;
using Rows = chanfind::testing::Rows;

TEST(Triples, ParseSerializeRoundTrip) {
  const auto g = toy_graph_a();
  const auto store = build_graph(*g.db, g.mapping);
  const auto back = parse_triples(serialize_triples(store));
  EXPECT_EQ(back.triples(), store.triples());
}

TEST(Triples, UndeclaredPrefixIsRejected) {
  EXPECT_THROW(parse_triples("foo:a rdf:type core:Magnet ."), UnknownPrefix);
  EXPECT_NO_THROW(parse_triples("@prefix foo: <urn:foo#> .\nfoo:a rdf:type core:Magnet ."));
  EXPECT_THROW(run_query("SELECT ?x WHERE { ?x rdf:type foo:Magnet }", core_ontology()), UnknownPrefix);
}

TEST(Triples, SyntaxErrorsCarryPosition) {
  EXPECT_THROW(parse_triples("core:a rdf:type"), SyntaxError);
  EXPECT_THROW(parse_triples("core:a rdf:type core:b"), SyntaxError);
  EXPECT_THROW(parse_query("SELECT WHERE { ?x a ?y }"), SyntaxError);
  EXPECT_THROW(parse_query("SELECT ?x WHERE { ?x a ?y"), SyntaxError);
  EXPECT_THROW(parse_query("SELECT ?x WHERE { ?x ?p+ ?y }"), SyntaxError);
  EXPECT_THROW(parse_query("SELECT ?z WHERE { ?x a ?y }"), QueryError);
}

TEST(Closure, ChainAddsTransitiveAndReflexiveEdges) {
  TripleStore s;
  s.add(Triple{"core:A", kSubClassOf, "core:B"});
  s.add(Triple{"core:B", kSubClassOf, "core:C"});
  const auto c = materialize_closure(s, kSubClassOf);
  EXPECT_EQ(c.reachable.at("core:A"), (std::set<Term>{"core:A", "core:B", "core:C"}));
  EXPECT_EQ(c.reachable.at("core:C"), (std::set<Term>{"core:C"}));
  EXPECT_FALSE(c.has_cycle);
}

TEST(Closure, CyclesAreReportedAndStillClosed) {
  TripleStore s;
  s.add(Triple{"core:A", kSubClassOf, "core:B"});
  s.add(Triple{"core:B", kSubClassOf, "core:A"});
  s.add(Triple{"core:C", kSubClassOf, "core:A"});
  const auto c = materialize_closure(s, kSubClassOf);
  EXPECT_TRUE(c.has_cycle);
  EXPECT_EQ(c.cycle_nodes, (std::vector<Term>{"core:A", "core:B"}));
  EXPECT_EQ(c.reachable.at("core:C"), (std::set<Term>{"core:A", "core:B", "core:C"}));
}

TEST(Closure, CoreTaxonomyMatchesSquaring) {
  const auto core = core_ontology();
  std::set<std::string> node_set;
  for (const auto& t : core.triples()) node_set.insert(t.s), node_set.insert(t.o);
  const std::vector<std::string> nodes(node_set.begin(), node_set.end());
  const auto expect = closure_by_squaring(core.triples(), kSubClassOf, nodes);
  const auto got = materialize_closure(core, kSubClassOf);
  for (const auto& [from, tos] : got.reachable)
    for (const auto& t : tos) EXPECT_TRUE(expect.count({from, t})) << from << " " << t;
  std::size_t n = 0;
  for (const auto& [from, tos] : got.reachable) n += tos.size();
  std::size_t m = 0;
  for (const auto& [a, b] : expect)
    if (got.reachable.count(a)) ++m;
  EXPECT_EQ(n, m);
}

TEST(Query, EvaluatorMatchesBruteForceOnRandomGraphs) {
  std::mt19937_64 rng(2024);
  for (int g = 0; g < 200; ++g) {
    const auto store = random_graph(rng, 30);
    ASSERT_LE(store.size(), 30u);
    for (int k = 0; k < 5; ++k) {
      const auto text = random_query(rng);
      const auto q = parse_query(text);
      const auto got = evaluate(q, store);
      const Rows rows(got.rows.begin(), got.rows.end());
      EXPECT_EQ(rows, brute_force(q, store)) << text << "\n" << serialize_triples(store);
    }
  }
}

TEST(Query, ClosureOnlyOnHierarchyPredicates) {
  EXPECT_THROW(run_query("SELECT ?x WHERE { ?x rdf:type+ ?y }", core_ontology()), QueryError);
}

TEST(Query, UnknownPredicateWarns) {
  const auto t = run_query("SELECT ?x WHERE { ?x core:nothing ?y }", core_ontology());
  EXPECT_TRUE(t.rows.empty());
  ASSERT_EQ(t.warnings.size(), 1u);
}

TEST(Mapping, ThreeTriplesPerRecordPlusCore) {
  json channels = json::array();
  for (int i = 0; i < 200; ++i)
    channels.push_back({{"address", "CH" + std::to_string(i)},
                        {"description", "channel " + std::to_string(i)},
                        {"role", i % 2 ? "setpoint" : "readback"},
                        {"metadata", {{"family", i % 3 ? "Q" : "B"}}}});
  const auto db = load_database({{"channels", channels}});
  OntologyMapping m;
  m.classes = {{"Q", "core:Quadrupole"}, {"B", "core:BPM"}};
  EXPECT_EQ(build_graph(*db, m).size(), 3 * 200 + core_ontology().size());
  m.classes.erase("B");
  EXPECT_THROW(build_graph(*db, m), UnmappedFamily);
}

TEST(Portability, SettingPvsForAllMagnetsOnBothGraphs) {
  for (const auto& g : {toy_graph_a(), toy_graph_b()}) {
    const auto store = build_graph(*g.db, g.mapping);
    const auto lib = default_templates(store);
    auto b = oracle();
    Selector s(*b);
    const auto r = find_ontology("setting PVs for all magnets", store, lib, s);
    EXPECT_EQ(r.translation.template_id, "role_of_class");
    ASSERT_TRUE(r.translation.cls);
    EXPECT_EQ(r.translation.cls->term, "core:Magnet");
    auto got = r.channels;
    std::sort(got.begin(), got.end());
    EXPECT_EQ(got, g.magnet_setpoints);
    EXPECT_FALSE(g.magnet_setpoints.empty());
  }
}

TEST(Portability, SameQueryTextOnBothGraphs) {
  auto b = oracle();
  std::string first;
  for (const auto& g : {toy_graph_a(), toy_graph_b()}) {
    const auto store = build_graph(*g.db, g.mapping);
    Selector s(*b);
    const auto tr = translate_nl("setting PVs for all magnets", default_templates(store), s);
    if (first.empty()) first = tr.text;
    EXPECT_EQ(tr.text, first);
  }
}

TEST(Translation, NoTemplateForNonsense) {
  auto b = oracle();
  Selector s(*b);
  EXPECT_THROW(translate_nl("zebra migration", default_templates(), s), NoTemplateMatch);
  const auto g = toy_graph_a();
  const auto store = build_graph(*g.db, g.mapping);
  Selector s2(*b);
  const auto r = find_graph("zebra migration", store, default_templates(store), g.db.get(), s2);
  EXPECT_TRUE(r.abstained);
}

TEST(Translation, ReadbacksOfQuadrupoles) {
  const auto g = toy_graph_a();
  const auto store = build_graph(*g.db, g.mapping);
  auto b = oracle();
  Selector s(*b);
  const auto r = find_graph("readback signals of every quadrupole", store, default_templates(store), g.db.get(), s);
  ASSERT_EQ(r.channels.size(), 4u);
  for (const auto& c : r.channels) EXPECT_EQ(g.db->find(c)->suffix_role, SuffixRole::kReadback);
}
