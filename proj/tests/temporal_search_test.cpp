#include "vidsearch/temporal_search.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "compare.hpp"
#include "oracle.hpp"
#include "random_data.hpp"
#include "vidsearch/error.hpp"
#include "vidsearch/fixture.hpp"

namespace vidsearch {
namespace {

using testing_support::same_sequences;

class F1Temporal : public ::testing::Test {
 protected:
  Dataset data = fixture_f1();
  FeatureStore store = build_store(data, {kFixtureF1IntervalS, 5});
  oracle::Data reference = oracle::build(data, kFixtureF1IntervalS);

  SearchPage<SequenceMatch> run(std::string_view q, double window) {
    return search_temporal(store, parse_query(q), window, 100);
  }
};

TEST_F(F1Temporal, CarThenRacing) {
  const auto ast = parse_query("--objects car --> --events racing");
  const auto expected = oracle::search_temporal(reference, ast, 30.0);
  ASSERT_EQ(expected.size(), 1u);
  EXPECT_EQ(expected[0].video_id, "v2");
  EXPECT_EQ(expected[0].shot_ids, (std::vector<std::string>{"v2#0", "v2#2"}));
  EXPECT_NEAR(expected[0].score, 1.2, 1e-12);

  const auto page = run("--objects car --> --events racing", 30.0);
  EXPECT_TRUE(same_sequences(page, expected));
  ASSERT_EQ(page.total, 1u);
  EXPECT_EQ(page.items[0].video_id, "v2");
  ASSERT_EQ(page.items[0].hits.size(), 2u);
  EXPECT_EQ(page.items[0].hits[0].shot_id, "v2#0");
  EXPECT_EQ(page.items[0].hits[1].shot_id, "v2#2");
  EXPECT_NEAR(page.items[0].score, 1.2, 1e-12);
}

TEST_F(F1Temporal, WindowTooSmall) {
  EXPECT_EQ(run("--objects car --> --events racing", 1.0).total, 0u);
  EXPECT_EQ(run("--objects car --> --events racing", 2.0).total, 1u);
}

TEST_F(F1Temporal, NeverCrossesVideos) {
  // raceway only in v1, racing only in v2.
  EXPECT_EQ(run("--places raceway --> --events racing", 1000.0).total, 0u);
}

TEST_F(F1Temporal, SameShotCannotServeTwoSegments) {
  // raceway appears only in v1#0.
  EXPECT_EQ(run("--places raceway --> --places raceway", 30.0).total, 0u);
  const auto person = run("--objects person --> --objects person", 30.0);
  ASSERT_EQ(person.total, 1u);
  EXPECT_EQ(person.items[0].hits[0].shot_id, "v1#1");
  EXPECT_EQ(person.items[0].hits[1].shot_id, "v1#2");
  EXPECT_NEAR(person.items[0].score, 1.55, 1e-12);
}

TEST_F(F1Temporal, Errors) {
  auto code_of = [&](auto&& f) -> std::optional<ErrorCode> {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return std::nullopt;
  };
  EXPECT_EQ(code_of([&] { run("--objects car", 30.0); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([&] { run("--objects car --> --objects car", 0.0); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([&] { run("--objects car --> --objects car", -3.0); }), ErrorCode::kInvalidArgument);
}

QueryAst random_temporal(const FeatureStore& store, std::mt19937_64& rng) {
  QueryAst ast;
  ast.segments.resize(std::uniform_int_distribution<std::size_t>(2, 3)(rng));
  for (auto& s : ast.segments) s = testing_support::random_segment(store, rng, 2);
  return ast;
}

TEST(TemporalProperties, OracleEquivalence) {
  std::mt19937_64 rng(9001);
  for (int trial = 0; trial < 60; ++trial) {
    const auto cfg = testing_support::random_small_config(rng);
    const Dataset data = generate_synthetic(cfg);
    const FeatureStore store = build_store(data, {cfg.interval_s, 5});
    const oracle::Data reference = oracle::build(data, cfg.interval_s);
    for (int q = 0; q < 8; ++q) {
      const QueryAst ast = random_temporal(store, rng);
      const double window = std::uniform_int_distribution<int>(1, 20)(rng);
      const auto page = search_temporal(store, ast, window, 10000);
      ASSERT_TRUE(same_sequences(page, oracle::search_temporal(reference, ast, window))) << canonicalize(ast);
      for (const auto& m : page.items) {
        for (std::size_t k = 1; k < m.hits.size(); ++k) {
          ASSERT_EQ(m.hits[k].video_id, m.video_id);
          ASSERT_GT(m.hits[k].index, m.hits[k - 1].index);
          ASSERT_LE(m.hits[k].start_s - m.hits[k - 1].start_s, window);
        }
      }
    }
  }
}

TEST(TemporalProperties, WindowMonotonicity) {
  std::mt19937_64 rng(12);
  const auto cfg = testing_support::random_small_config(rng);
  const FeatureStore store = build_store(generate_synthetic(cfg), {cfg.interval_s, 5});
  for (int trial = 0; trial < 300; ++trial) {
    const QueryAst ast = random_temporal(store, rng);
    const double w = std::uniform_int_distribution<int>(1, 20)(rng);
    const double wider = w + std::uniform_int_distribution<int>(0, 20)(rng);
    std::set<std::string> narrow;
    for (const auto& m : search_temporal(store, ast, w, 10000).items) narrow.insert(m.video_id);
    std::set<std::string> wide;
    for (const auto& m : search_temporal(store, ast, wider, 10000).items) wide.insert(m.video_id);
    for (const auto& v : narrow) ASSERT_TRUE(wide.count(v)) << canonicalize(ast);
  }
}

}  // namespace
}  // namespace vidsearch
