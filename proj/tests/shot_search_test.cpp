#include "vidsearch/shot_search.hpp"

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

using testing_support::same_shots;

class F1ShotSearch : public ::testing::Test {
 protected:
  Dataset data = fixture_f1();
  FeatureStore store = build_store(data, {kFixtureF1IntervalS, 5});
  oracle::Data reference = oracle::build(data, kFixtureF1IntervalS);

  SearchPage<RankedShot> run(std::string_view q, std::size_t limit = 100, std::size_t offset = 0) {
    return search_shots(store, parse_query(q).segments.at(0), limit, offset);
  }
};

TEST_F(F1ShotSearch, CarAboveThreshold) {
  const auto expected = oracle::search_shots(reference, parse_query("--objects car (0.8)").segments[0]);
  ASSERT_EQ(expected.size(), 2u);
  EXPECT_EQ(expected[0].shot_id, "v1#0");
  EXPECT_EQ(expected[0].score, 0.9);
  EXPECT_EQ(expected[1].shot_id, "v1#1");
  EXPECT_EQ(expected[1].score, 0.85);

  const auto page = run("--objects car (0.8)");
  EXPECT_TRUE(same_shots(page, expected, 0, 100));
  ASSERT_EQ(page.items.size(), 2u);
  EXPECT_EQ(page.items[0].shot_id, "v1#0");
  EXPECT_DOUBLE_EQ(page.items[0].score, 0.9);
  EXPECT_EQ(page.items[1].shot_id, "v1#1");
  EXPECT_DOUBLE_EQ(page.items[1].score, 0.85);
}

TEST_F(F1ShotSearch, CarAndPerson) {
  const auto expected = oracle::search_shots(reference, parse_query("--objects car, person").segments[0]);
  ASSERT_EQ(expected.size(), 1u);
  EXPECT_EQ(expected[0].shot_id, "v1#1");
  EXPECT_NEAR(expected[0].score, 1.45, 1e-12);

  const auto page = run("--objects car, person");
  EXPECT_TRUE(same_shots(page, expected, 0, 100));
  ASSERT_EQ(page.total, 1u);
  EXPECT_EQ(page.items[0].shot_id, "v1#1");
  EXPECT_NEAR(page.items[0].score, 1.45, 1e-12);
}

TEST_F(F1ShotSearch, AbsentLabel) {
  const auto page = run("--objects unicorn");
  EXPECT_EQ(page.total, 0u);
  EXPECT_TRUE(page.items.empty());
}

TEST_F(F1ShotSearch, ReferenceQueryHasNoShotWithAllThree) {
  EXPECT_EQ(run("--objects car (0.8), person --places raceway").total, 0u);
  const auto page = run("--objects car (0.8) --places raceway");
  ASSERT_EQ(page.total, 1u);
  EXPECT_EQ(page.items[0].shot_id, "v1#0");
  EXPECT_NEAR(page.items[0].score, 1.6, 1e-12);
}

TEST_F(F1ShotSearch, AllCategoriesAndText) {
  const auto all = run("--all car");
  EXPECT_EQ(all.total, 3u);
  const auto sports = run("--all sports_car");
  ASSERT_EQ(sports.total, 1u);
  EXPECT_EQ(sports.items[0].matched[0].category, Category::kConcepts);

  const auto phrase = run("--stt \"Race ends\"");
  EXPECT_EQ(phrase.total, 3u);
  EXPECT_DOUBLE_EQ(phrase.items[0].score, 2.0);
  EXPECT_EQ(phrase.items[0].shot_id, "v2#0");
  EXPECT_EQ(run("--stt \"race starts\"").total, 0u);
  EXPECT_EQ(run("--ocr race").total, 0u);
}

TEST_F(F1ShotSearch, Errors) {
  EXPECT_THROW(search_shots(store, Segment{}, 10), Error);
  EXPECT_THROW(run("--objects car", 0), Error);
}

TEST_F(F1ShotSearch, ShotsLike) {
  const auto expected = oracle::shots_like(reference, "v1#0");
  ASSERT_FALSE(expected.empty());
  EXPECT_EQ(expected[0].shot_id, "v1#1");

  const auto page = shots_like(store, "v1#0", 10);
  EXPECT_TRUE(same_shots(page, expected, 0, 10));
  ASSERT_FALSE(page.items.empty());
  EXPECT_EQ(page.items[0].shot_id, "v1#1");
  for (const auto& r : page.items) EXPECT_NE(r.shot_id, "v1#0");

  EXPECT_EQ(shots_like(store, "v1#0", 1).items.size(), 1u);
  EXPECT_EQ(shots_like(store, "v1#4", 10).total, 0u);
  try {
    shots_like(store, "zz#1", 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFound);
  }
}

TEST(ShotSearchProperties, OracleEquivalence) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 60; ++trial) {
    const auto cfg = testing_support::random_small_config(rng);
    const Dataset data = generate_synthetic(cfg);
    const FeatureStore store = build_store(data, {cfg.interval_s, 5});
    const oracle::Data reference = oracle::build(data, cfg.interval_s);
    for (int q = 0; q < 10; ++q) {
      const auto segment = testing_support::random_segment(store, rng);
      const auto expected = oracle::search_shots(reference, segment);
      ASSERT_TRUE(same_shots(search_shots(store, segment, 10000), expected, 0, 10000))
          << canonicalize(QueryAst{{segment}, std::nullopt});
    }
    const std::string source = store.shot_id(std::uniform_int_distribution<ShotOrdinal>(
        0, static_cast<ShotOrdinal>(store.shot_count() - 1))(rng));
    ASSERT_TRUE(same_shots(shots_like(store, source, 10000), oracle::shots_like(reference, source), 0, 10000));
  }
}

TEST(ShotSearchProperties, ThresholdMonotonicity) {
  std::mt19937_64 rng(5);
  const auto cfg = testing_support::random_small_config(rng);
  const FeatureStore store = build_store(generate_synthetic(cfg), {cfg.interval_s, 5});
  for (int trial = 0; trial < 300; ++trial) {
    auto segment = testing_support::random_segment(store, rng);
    std::set<std::string> before;
    for (const auto& r : search_shots(store, segment, 100000).items) before.insert(r.shot_id);
    Term& raised = segment[std::uniform_int_distribution<std::size_t>(0, segment.size() - 1)(rng)];
    raised.threshold = std::min(1.0, raised.threshold + std::uniform_int_distribution<int>(1, 32)(rng) / 64.0);
    for (const auto& r : search_shots(store, segment, 100000).items) ASSERT_TRUE(before.count(r.shot_id));
  }
}

TEST(ShotSearchProperties, PaginationCoherence) {
  std::mt19937_64 rng(17);
  const auto cfg = testing_support::random_small_config(rng);
  const FeatureStore store = build_store(generate_synthetic(cfg), {cfg.interval_s, 5});
  for (int trial = 0; trial < 50; ++trial) {
    const auto segment = testing_support::random_segment(store, rng, 1);
    const auto full = search_shots(store, segment, 100000);
    const std::size_t limit = std::uniform_int_distribution<std::size_t>(1, 7)(rng);
    std::vector<std::string> concatenated;
    for (std::size_t offset = 0; offset < full.total + limit; offset += limit) {
      const auto page = search_shots(store, segment, limit, offset);
      ASSERT_EQ(page.total, full.total);
      for (const auto& r : page.items) concatenated.push_back(r.shot_id);
    }
    std::vector<std::string> expected;
    for (const auto& r : full.items) expected.push_back(r.shot_id);
    ASSERT_EQ(concatenated, expected);
  }
}

TEST(ShotSearchProperties, RemovingATermKeepsSurvivors) {
  std::mt19937_64 rng(23);
  const auto cfg = testing_support::random_small_config(rng);
  const Dataset data = generate_synthetic(cfg);
  const FeatureStore store = build_store(data, {cfg.interval_s, 5});
  const oracle::Data reference = oracle::build(data, cfg.interval_s);
  for (int trial = 0; trial < 100; ++trial) {
    auto segment = testing_support::random_segment(store, rng);
    if (segment.size() < 2) continue;
    std::set<std::string> full;
    for (const auto& r : search_shots(store, segment, 100000).items) full.insert(r.shot_id);
    segment.erase(segment.begin() + std::uniform_int_distribution<long>(0, static_cast<long>(segment.size()) - 1)(rng));
    const auto reduced = search_shots(store, segment, 100000);
    ASSERT_TRUE(same_shots(reduced, oracle::search_shots(reference, segment), 0, 100000));
    std::set<std::string> reduced_ids;
    for (const auto& r : reduced.items) reduced_ids.insert(r.shot_id);
    for (const auto& id : full) ASSERT_TRUE(reduced_ids.count(id));
  }
}

}  // namespace
}  // namespace vidsearch
