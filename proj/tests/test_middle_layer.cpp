#include <gtest/gtest.h>

#include "support.hpp"

using namespace chanfind;
using chanfind::testing::data_path;
using chanfind::testing::oracle;

namespace {

const MiddleLayer& ml() {
  static const MiddleLayer m = make_middle_layer(1);
  return m;
}

std::vector<std::string> addresses(const json& obs) {
  std::vector<std::string> out;
  for (const auto& o : obs) out.push_back(o.at("address").get<std::string>());
  return out;
}

}  // namespace

TEST(MmlTree, CountsAndCompanionAgree) {
  EXPECT_EQ(ml().tree.channel_count(), 919u);
  EXPECT_EQ(ml().companion->size(), ml().tree.channel_count());
  // Every companion record round-trips to its field.
  for (const auto& r : ml().companion->records()) EXPECT_FALSE(r.description.empty());
}

TEST(MmlTree, RejectsMisalignedFields) {
  json bad = {{"name", "bad"},
              {"systems",
               {{{"name", "S"},
                 {"description", "s"},
                 {"families", {{{"name", "F"}, {"description", "f"}, {"devices", {{{"sector", 1}, {"number", 1}}}},
                                {"fields", {{{"name", "X"}, {"description", "x"}, {"addresses", {"A", "B"}}}}}}}}}}}};
  EXPECT_THROW(load_mml(bad), SchemaError);
}

TEST(MmlTools, ListingsAreSortedAndComplete) {
  MmlTools t(ml().tree);
  const auto systems = t.call("list_systems", json::object());
  ASSERT_EQ(systems.size(), 6u);
  EXPECT_EQ(systems[0].at("name"), "BR");
  const auto fams = t.call("list_families", {{"system", "BR"}});
  std::vector<std::string> names;
  for (const auto& f : fams) names.push_back(f.at("name"));
  EXPECT_TRUE(std::is_sorted(names.begin(), names.end()));
  EXPECT_EQ(t.call("list_fields", {{"system", "SR"}, {"family", "QF"}}).size(), 2u);
}

TEST(MmlTools, GetChannelsFiltersByElementAndSubstring) {
  MmlTools t(ml().tree);
  const auto all = addresses(t.call("get_channels", {{"system", "BR"}, {"family", "BPM"}, {"field", "X"}}));
  EXPECT_EQ(all.size(), 16u);
  EXPECT_EQ(all.front(), "BR01C:BPM1:X");
  const auto two = addresses(t.call("get_channels", {{"system", "BR"}, {"family", "BPM"}, {"field", "X"}, {"elements", {1, 5}}}));
  EXPECT_EQ(two, (std::vector<std::string>{"BR01C:BPM1:X", "BR02C:BPM1:X"}));
  const auto sec = addresses(t.call("get_channels", {{"system", "BR"}, {"family", "BPM"}, {"field", "X"}, {"contains", "BR03C"}}));
  EXPECT_EQ(sec.size(), 4u);
  EXPECT_EQ(t.call("get_indices", {{"system", "BR"}, {"family", "BPM"}, {"selector", "sector:2"}}).size(), 4u);
}

TEST(MmlTools, DescribeAndCount) {
  MmlTools t(ml().tree);
  EXPECT_EQ(t.call("describe", {{"path", ""}}).at("kind"), "root");
  EXPECT_EQ(t.call("describe", {{"path", "SR/QF"}}).at("kind"), "family");
  EXPECT_EQ(t.call("count_channels", {{"path", ""}}).at("count"), 919);
  EXPECT_EQ(t.call("count_channels", {{"path", "BR/BPM/X"}}).at("count"), 16);
}

TEST(MmlTools, ErrorsAreTyped) {
  MmlTools t(ml().tree);
  EXPECT_THROW(t.call("list_families", {{"system", "XX"}}), UnknownSystem);
  EXPECT_THROW(t.call("list_fields", {{"system", "SR"}, {"family", "ZZ"}}), UnknownFamily);
  EXPECT_THROW(t.call("get_channels", {{"system", "SR"}, {"family", "QF"}, {"field", "Nope"}}), UnknownField);
  EXPECT_THROW(t.call("launch_missiles", json::object()), UnknownTool);
  EXPECT_THROW(t.call("list_families", json::object()), InvalidRequest);
  EXPECT_THROW(t.call("get_indices", {{"system", "SR"}, {"family", "QF"}, {"selector", "sector:x"}}), InvalidRequest);
  EXPECT_THROW(t.call("describe", {{"path", "a/b/c/d"}}), InvalidRequest);
}

TEST(Domains, LabeledQueries) {
  const auto doc = load_document_file(std::string(CHANFIND_TEST_DIR) + "/data/domains.json");
  const auto& qs = doc.at("queries");
  ASSERT_EQ(qs.size(), 50u);
  for (const auto& q : qs) {
    const auto tags = detect_domains(q.at("query"), ml().keywords);
    EXPECT_EQ(tags.systems, q.at("systems").get<std::vector<std::string>>()) << q.at("query");
    EXPECT_EQ(tags.query_types, q.at("query_types").get<std::vector<std::string>>()) << q.at("query");
    EXPECT_EQ(tags.fallback, q.at("systems").empty()) << q.at("query");
  }
}

TEST(Domains, FallbackOffersEverySystem) {
  const auto tags = detect_domains("undulator gap", ml().keywords, ml().system_names());
  EXPECT_TRUE(tags.fallback);
  EXPECT_EQ(tags.systems.size(), 6u);
}

TEST(Examples, EveryLibraryEntryReplays) {
  MmlTools t(ml().tree);
  ASSERT_FALSE(ml().examples.empty());
  for (const auto& e : ml().examples) EXPECT_TRUE(replay_example(e, t)) << e.query;
  const auto shipped = load_examples(load_document_file(data_path("mml_examples.json")));
  EXPECT_EQ(shipped.size(), ml().examples.size());
}

TEST(Examples, SelectionPrefersDetectedDomainAndIsCapped) {
  const auto tags = detect_domains("booster bpm", ml().keywords, ml().system_names());
  const auto picked = select_examples(ml().examples, tags);
  ASSERT_FALSE(picked.empty());
  EXPECT_LE(picked.size(), kMaxPromptExamples);
  EXPECT_TRUE(picked.front()->system == "BR" || picked.front()->system == "generic");
}

TEST(Agent, WholeFieldAndSingleElement) {
  auto b = oracle();
  Selector s(*b);
  const auto all = find_middle_layer("horizontal position of all booster bpms", ml(), s);
  EXPECT_EQ(all.channels.size(), 16u);
  EXPECT_EQ(all.channels.front(), "BR01C:BPM1:X");

  Selector s2(*b);
  const auto one = find_middle_layer("storage ring focusing quadrupole current setpoint element 5", ml(), s2);
  ASSERT_EQ(one.channels.size(), 1u);
  EXPECT_EQ(ml().companion->find(one.channels[0])->metadata.at("field"), "Setpoint");
}

TEST(Agent, AbstainsOutsideTheTree) {
  auto b = oracle();
  Selector s(*b);
  EXPECT_TRUE(find_middle_layer("undulator gap", ml(), s).abstained);
}

TEST(Agent, IterationLimitAbstains) {
  auto b = oracle();
  Selector s(*b);
  MiddleLayerConfig cfg;
  cfg.max_iterations = 1;
  const auto r = find_middle_layer("horizontal position of all booster bpms", ml(), s, cfg);
  EXPECT_TRUE(r.abstained);
}
