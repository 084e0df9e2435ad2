#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "support.hpp"

using namespace chanfind;
using chanfind::testing::data_path;

namespace {

std::string test_file(const std::string& name) { return std::string(CHANFIND_TEST_DIR) + "/data/" + name; }

std::string run_inspect(const ChannelDatabase& db, const std::string& prefix) {
  std::ostringstream out;
  inspect(db, prefix, out);
  return out.str();
}

}  // namespace

TEST(Inspect, RootSumsEverySystem) {
  const auto db = load_database_file(data_path("tutorial.yaml"));
  const auto out = run_inspect(*db, "/");
  EXPECT_NE(out.find("total 1050"), std::string::npos) << out;
  for (const char* sys : {"VAC", "RF", "MAG", "DIAG"}) EXPECT_NE(out.find(sys), std::string::npos) << sys;
}

TEST(Inspect, LeafPrintsTheRecord) {
  const auto db = load_database_file(data_path("tutorial.yaml"));
  const auto& rec = db->records().front();
  std::string prefix;
  for (const auto& p : rec.path) prefix += "/" + p.value;
  const auto out = run_inspect(*db, prefix);
  EXPECT_EQ(out.rfind(rec.address, 0), 0u) << out;
  EXPECT_NE(out.find(rec.description), std::string::npos);
}

TEST(Inspect, UnknownPrefixIsTyped) {
  const auto db = load_database_file(data_path("tutorial.yaml"));
  EXPECT_THROW(run_inspect(*db, "VAC/NOPE"), UnknownPrefix);
  const auto flat = load_database_file(data_path("ucsb_fel.yaml"));
  EXPECT_NE(run_inspect(*flat, "").find("(flat)"), std::string::npos);
  EXPECT_THROW(run_inspect(*flat, "NOPE"), UnknownPrefix);
}

TEST(Workspace, PathsResolveAgainstTheConfigFile) {
  const auto ws = load_workspace_file(test_file("workspace.json"));
  ASSERT_TRUE(ws.db);
  EXPECT_EQ(ws.call_budget, 16);
  EXPECT_FALSE(ws.synonyms.empty());
  EXPECT_FALSE(ws.space);
  EXPECT_THROW(make_finder(Paradigm::kMml, ws), ConfigError);
  EXPECT_THROW(load_workspace(json{{"mapping", "x.json"}}), ConfigError);
  EXPECT_THROW(parse_paradigm("psychic"), ConfigError);
}

TEST(Repl, TranscriptMatchesGolden) {
  // Flat database: the tree line in the session must come back as an error.
  const auto ws = load_workspace_file(test_file("workspace.json"));
  std::ifstream in(test_file("repl_session.txt"));
  ASSERT_TRUE(in);
  std::ostringstream out;
  EXPECT_EQ(run_repl(in, out, ws, ws.oracle_factory(), {Paradigm::kDirect, true, "oracle"}), kExitOk);

  const auto golden = read_file(test_file("repl_golden.txt"));
  EXPECT_EQ(out.str(), golden);
}
