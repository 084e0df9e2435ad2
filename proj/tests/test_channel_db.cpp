#include <gtest/gtest.h>

#include <chrono>

#include "oracles.hpp"
#include "support.hpp"

using namespace chanfind;
using chanfind::testing::data_path;

namespace {

using chanfind::testing::enumerate_doc;

json vacuum_doc() { return load_document_file(data_path("vacuum_device.yaml")); }

// Swap `thermal` of the four ion-gauge heads for thermal gauges.
json vacuum_mix(int thermal) {
  json doc = vacuum_doc();
  auto& device = doc["tree"][0]["children"][0]["children"][0];
  auto& ion = device["children"][0];
  json items = ion["expand"]["items"];
  json ion_items = json::array(), th_items = json::array();
  for (std::size_t i = 0; i < items.size(); ++i)
    (static_cast<int>(i) < 4 - thermal ? ion_items : th_items).push_back(items[i]);
  if (thermal == 4) {
    ion = {{"level", "subdevice"}, {"description", "thermal gauge"}, {"expand", {{"kind", "list"}, {"items", th_items}}},
           {"children", doc["thermal_gauge"]}};
    return doc;
  }
  ion["expand"]["items"] = ion_items;
  if (thermal > 0) {
    json th = {{"level", "subdevice"}, {"description", "thermal gauge"}, {"expand", {{"kind", "list"}, {"items", th_items}}},
               {"children", doc["thermal_gauge"]}};
    device["children"].insert(device["children"].begin() + 1, th);
  }
  return doc;
}

}  // namespace

TEST(Expansion, TutorialHas1050RecordsAcrossFourSystems) {
  const auto db = load_database_file(data_path("tutorial.yaml"));
  EXPECT_EQ(db->size(), 1050u);
  EXPECT_EQ(db->roots().size(), 4u);
  std::map<std::string, std::size_t> per_system;
  for (const auto& r : db->records()) ++per_system[r.path.front().value];
  EXPECT_EQ(per_system.size(), 4u);
  EXPECT_EQ(per_system["VAC"], 760u);
}

TEST(Expansion, VacuumDeviceMatchesEnumerator) {
  const auto doc = vacuum_doc();
  const auto db = load_database(doc);
  EXPECT_EQ(db->size(), enumerate_doc(doc));
  EXPECT_GE(db->size(), 145u);
  EXPECT_LE(db->size(), 152u);
}

TEST(Expansion, VacuumGaugeMixStaysInRange) {
  for (int thermal = 0; thermal <= 4; ++thermal) {
    const auto doc = vacuum_mix(thermal);
    const auto db = load_database(doc);
    EXPECT_EQ(db->size(), enumerate_doc(doc)) << thermal;
    EXPECT_EQ(db->size(), 152u - 2u * static_cast<std::size_t>(thermal)) << thermal;
  }
  // 0..3 thermal heads land inside the per-instance band.
  EXPECT_GE(load_database(vacuum_mix(3))->size(), 145u);
}

TEST(Expansion, GeneratedConfigsMatchEnumerator) {
  for (const auto& doc : {six_level_config(1), six_level_config(10), explorer_config()})
    EXPECT_EQ(load_database(doc)->size(), enumerate_doc(doc));
  EXPECT_EQ(load_database(six_level_config(10))->size(), 10 * load_database(six_level_config(1))->size());
}

TEST(Expansion, TutorialLoadsFast) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto db = load_database_file(data_path("tutorial.yaml"));
  const auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_LT(secs, 1.0);
  EXPECT_EQ(db->size(), 1050u);
}

TEST(Schema, AssembleParseRoundTripOnEveryRecord) {
  for (const auto& file : {"tutorial.yaml", "vacuum_device.yaml"}) {
    const auto db = load_database_file(data_path(file));
    for (const auto& r : db->records()) {
      EXPECT_EQ(db->schema().assemble(r.path), r.address);
      const auto p = db->schema().parse(r.address);
      ASSERT_TRUE(p) << r.address;
      EXPECT_EQ(*p, r.path);
    }
  }
}

TEST(Schema, OptionalLevelsDropWithTheirSeparator) {
  const auto db = load_database_file(data_path("vacuum_device.yaml"));
  EXPECT_TRUE(db->contains("VAC-GCT:VGC01:FWVER"));
  EXPECT_TRUE(db->contains("VAC-GCT:VGC01:UNITS.SP"));
  EXPECT_TRUE(db->contains("VAC-GCT:VGC01:IG1:PRES.RB"));
  EXPECT_EQ(db->find("VAC-GCT:VGC01:IG1:EMIS.SP")->suffix_role, SuffixRole::kSetpoint);
  EXPECT_EQ(db->find("VAC-GCT:VGC01:FWVER")->suffix_role, SuffixRole::kNone);
}

TEST(Schema, MissingRequiredLevelThrows) {
  const auto db = load_database_file(data_path("vacuum_device.yaml"));
  Path p = {{"system", "VAC"}, {"device", "VGC01"}, {"signal", "PRES"}};
  EXPECT_THROW(db->schema().assemble(p), MissingLevel);
}

TEST(Schema, PatternWithoutEnoughPlaceholdersIsRejected) {
  EXPECT_THROW(HierarchySchema({LevelDef{"a", 0, false, ""}, LevelDef{"b", 1, false, ""}}, "{0}"), SchemaError);
  EXPECT_THROW(HierarchySchema({LevelDef{"a", 0, false, ""}, LevelDef{"b", 1, false, ""}}, "{1}:{0}"), SchemaError);
}

TEST(Loader, RejectsBadConfigs) {
  EXPECT_THROW(load_database_text(R"(
schema: {levels: [a], pattern: "{0}"}
tree: [{level: a, description: x, expand: {kind: range, prefix: X, lo: 5, hi: 1}}])"),
               RangeError);
  EXPECT_THROW(load_database_text(R"(
schema: {levels: [a], pattern: "{0}"}
tree: [{level: a, description: x, expand: {kind: list, items: []}}])"),
               EmptyList);
  EXPECT_THROW(load_database_text(R"(
schema: {levels: [a], pattern: "{0}"}
tree: [{level: a, value: X, description: x}, {level: a, value: X, description: y}])"),
               DuplicateAddress);
  EXPECT_THROW(load_database_text(R"(
schema: {levels: [a], pattern: "{0}"}
tree: [{level: a, value: X, description: x, expand: {kind: list, items: [Y]}}])"),
               SchemaError);
  EXPECT_THROW(load_database_text("[1, 2]"), ParseError);
}

TEST(Loader, RangePaddingAndDescriptionTemplate) {
  const auto db = load_database_text(R"y(
schema: {levels: [dev], pattern: "{0}"}
tree: [{level: dev, description: pump, expand: {kind: range, prefix: P, lo: 8, hi: 10, pad: 2, description: "pump {n} ({value})"}}])y");
  ASSERT_EQ(db->size(), 3u);
  EXPECT_EQ(db->records()[0].address, "P08");
  EXPECT_EQ(db->records()[2].address, "P10");
  EXPECT_EQ(db->records()[2].description, "pump 10 (P10)");
}

TEST(FlatDatabase, UcsbInventory) {
  const auto db = load_database_file(data_path("ucsb_fel.yaml"));
  EXPECT_EQ(db->size(), 296u);
  EXPECT_FALSE(db->has_tree());
  std::set<std::string> names;
  for (const auto& r : db->records()) {
    ASSERT_TRUE(r.name);
    EXPECT_TRUE(names.insert(*r.name).second) << *r.name;
  }
  EXPECT_EQ(db->find_by_name("TerminalVoltageSetPoint")->address, "TMVST");
}

TEST(FlatDatabase, ExportImportRoundTrip) {
  const auto db = load_database_file(data_path("ucsb_fel.yaml"));
  const auto back = import_flat(export_flat(*db));
  ASSERT_EQ(back->size(), db->size());
  for (std::size_t i = 0; i < db->size(); ++i) {
    EXPECT_EQ(back->records()[i].address, db->records()[i].address);
    EXPECT_EQ(back->records()[i].name, db->records()[i].name);
    EXPECT_EQ(back->records()[i].description, db->records()[i].description);
  }
}

TEST(Validation, PartitionsPreservingOrder) {
  const auto db = load_database_file(data_path("tutorial.yaml"));
  const auto r = validate_channels({"nope", db->records()[3].address, "VAC-GCT:VGC01:IG9:PRES.RB", db->records()[0].address}, *db);
  EXPECT_EQ(r.valid, (std::vector<std::string>{db->records()[3].address, db->records()[0].address}));
  EXPECT_EQ(r.invalid, (std::vector<std::string>{"nope", "VAC-GCT:VGC01:IG9:PRES.RB"}));
}

TEST(Text, TokenizerSplitsCaseAndDigits) {
  EXPECT_EQ(tokenize("SetPoint"), (std::vector<std::string>{"set", "point"}));
  EXPECT_EQ(tokenize("GAUGE01"), (std::vector<std::string>{"gauge", "1"}));
  EXPECT_EQ(tokenize("gauge 1"), (std::vector<std::string>{"gauge", "1"}));
  EXPECT_EQ(tokenize("BPMReading"), (std::vector<std::string>{"bpm", "reading"}));
  EXPECT_DOUBLE_EQ(lexical_score("camera image", "The camera image (8 bit)"), 1.0);
  EXPECT_DOUBLE_EQ(lexical_score("", "x"), 0.0);
}
