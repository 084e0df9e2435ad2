#include <gtest/gtest.h>

#include "support.hpp"

using namespace chanfind;
using chanfind::testing::data_path;
using chanfind::testing::oracle;

namespace {

BenchConfig direct_config(DatabasePtr db, std::size_t parallel = 1) {
  BenchConfig cfg;
  cfg.paradigm = "direct";
  cfg.finder = [db](const std::string& q, Selector& s) { return find_direct(q, *db, s); };
  cfg.make_backend = [] { return oracle(); };
  cfg.parallelism = parallel;
  return cfg;
}

}  // namespace

TEST(Scoring, SetAlgebra) {
  using V = std::vector<std::string>;
  EXPECT_TRUE(score_case(V{"b", "a"}, V{"a", "b"}, MatchMode::kExactSet));
  EXPECT_FALSE(score_case(V{"a"}, V{"a", "b"}, MatchMode::kExactSet));
  EXPECT_TRUE(score_case(V{}, V{}, MatchMode::kExactSet));
  EXPECT_TRUE(score_case(V{"a", "b", "c"}, V{"a", "b"}, MatchMode::kSuperset));
  EXPECT_FALSE(score_case(V{"a"}, V{"a", "b"}, MatchMode::kSuperset));
  EXPECT_TRUE(score_case(V{"z", "b"}, V{"a", "b"}, MatchMode::kAnyOf));
  EXPECT_FALSE(score_case(V{"z"}, V{"a", "b"}, MatchMode::kAnyOf));
  EXPECT_FALSE(score_case(V{}, V{}, MatchMode::kAnyOf));
  EXPECT_EQ(parse_match_mode("superset"), MatchMode::kSuperset);
  EXPECT_THROW(parse_match_mode("fuzzy"), ParseError);
}

TEST(Cases, LoadRejectsDuplicateIds) {
  const json doc = {{"cases", {{{"id", "a"}, {"query", "x"}, {"expected", {"A"}}}, {{"id", "a"}, {"query", "y"}, {"expected", {"B"}}}}}};
  EXPECT_THROW(load_cases(doc), ConfigError);
}

TEST(Cases, JsonRoundTrip) {
  const auto db = load_database_file(data_path("ucsb_fel.yaml"));
  const auto suite = generate_synthetic_benchmark(*db, 20, 5, Difficulty::kParaphrase, default_synonyms());
  const auto back = load_cases(to_json(suite));
  ASSERT_EQ(back.cases.size(), suite.cases.size());
  EXPECT_TRUE(back.synthetic);
  for (std::size_t i = 0; i < back.cases.size(); ++i) {
    EXPECT_EQ(back.cases[i].query, suite.cases[i].query);
    EXPECT_EQ(back.cases[i].expected, suite.cases[i].expected);
  }
}

TEST(Generator, SeededAndReproducible) {
  const auto db = load_database_file(data_path("ucsb_fel.yaml"));
  const auto a = to_json(generate_synthetic_benchmark(*db, 30, 9, Difficulty::kAdversarial));
  const auto b = to_json(generate_synthetic_benchmark(*db, 30, 9, Difficulty::kAdversarial));
  const auto c = to_json(generate_synthetic_benchmark(*db, 30, 10, Difficulty::kAdversarial));
  EXPECT_EQ(a.dump(), b.dump());
  EXPECT_NE(a.dump(), c.dump());
  EXPECT_THROW(generate_synthetic_benchmark(*db, 0, 1, Difficulty::kVerbatim), ConfigError);
}

TEST(Generator, TargetsAreUnambiguous) {
  const auto db = load_database_file(data_path("ucsb_fel.yaml"));
  for (const auto* r : unambiguous_records(*db)) {
    const auto mine = token_set(r->match_text());
    for (const auto& other : db->records()) {
      if (other.address == r->address) continue;
      EXPECT_NE(token_set(other.match_text()), mine);
    }
  }
}

TEST(Report, EmptyCaseListHasNullAccuracy) {
  const auto db = load_database_file(data_path("ucsb_fel.yaml"));
  const auto report = run_benchmark({}, direct_config(db));
  EXPECT_FALSE(report.accuracy);
  EXPECT_TRUE(to_json(report).at("accuracy").is_null());
}

TEST(Report, ByteIdenticalAcrossRunsAndParallelism) {
  const auto db = load_database_file(data_path("ucsb_fel.yaml"));
  const auto suite = generate_synthetic_benchmark(*db, 30, 42, Difficulty::kParaphrase, default_synonyms());
  const auto one = to_json(run_benchmark(suite.cases, direct_config(db))).dump(2);
  const auto two = to_json(run_benchmark(suite.cases, direct_config(db))).dump(2);
  const auto par = to_json(run_benchmark(suite.cases, direct_config(db, 4))).dump(2);
  EXPECT_EQ(one, two);
  EXPECT_EQ(one, par);
}

TEST(Report, ErrorsAreRecordedPerCase) {
  const auto db = load_database_file(data_path("ucsb_fel.yaml"));
  auto cfg = direct_config(db);
  cfg.call_budget = 1;  // the split alone uses it up
  const auto report = run_benchmark(
      {{"c1", "terminal voltage set point and terminal voltage readback", {"TMVST"}, MatchMode::kSuperset}}, cfg);
  ASSERT_EQ(report.per_case.size(), 1u);
  EXPECT_FALSE(report.per_case[0].correct);
  EXPECT_NE(report.per_case[0].error.find("BudgetExhausted"), std::string::npos);
  EXPECT_EQ(*report.accuracy, 0.0);
}

TEST(Report, HistogramAndCounts) {
  const auto db = load_database_file(data_path("ucsb_fel.yaml"));
  const auto suite = generate_synthetic_benchmark(*db, 30, 1, Difficulty::kVerbatim, default_synonyms());
  const auto report = run_benchmark(suite.cases, direct_config(db));
  int total = 0;
  for (const auto& [calls, n] : report.call_histogram) total += n;
  EXPECT_EQ(total, 30);
  EXPECT_EQ(report.backend, "oracle");
  EXPECT_TRUE(report.synthetic == false);  // config did not mark it
  const auto j = to_json(report);
  EXPECT_FALSE(j.contains("wall_time"));
  EXPECT_TRUE(to_json(report, true).at("per_case")[0].contains("wall_time"));
}
