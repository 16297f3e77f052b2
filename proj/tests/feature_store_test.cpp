#include "vidsearch/feature_store.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "oracle.hpp"
#include "random_data.hpp"
#include "vidsearch/error.hpp"
#include "vidsearch/fixture.hpp"
#include "vidsearch/ingest.hpp"

namespace vidsearch {
namespace {

namespace fs = std::filesystem;

FeatureStore f1_store() { return build_store(fixture_f1(), {kFixtureF1IntervalS, 5}); }

fs::path temp_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("vidsearch_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TEST(FeatureStore, FixtureCounts) {
  const FeatureStore store = f1_store();
  const DatasetSummary& s = store.summary();
  EXPECT_EQ(s.videos, 2u);
  EXPECT_EQ(s.shots, 8u);
  EXPECT_EQ(s.detections, 8u);
  EXPECT_EQ(s.feature_postings, 8u);
  // "the race ends" over v2 [0,3): three tokens on three shots.
  EXPECT_EQ(s.text_postings, 9u);
  EXPECT_EQ(s.map_vectors, 2u);
  EXPECT_TRUE(s.rejected.empty());
}

TEST(FeatureStore, DetectionSpanningTwoShots) {
  Dataset d;
  d.videos.push_back({"v1", "", "", {}, 5.0, {}});
  d.detections.push_back({"v1", Category::kObjects, "car", 0.9, 0.2, 1.4});
  const FeatureStore store = build_store(d);
  const auto postings = store.postings(Category::kObjects, "car");
  ASSERT_EQ(postings.size(), 2u);
  EXPECT_EQ(store.shot_id(postings[0].shot), "v1#0");
  EXPECT_EQ(store.shot_id(postings[1].shot), "v1#1");
}

TEST(FeatureStore, TouchingIntervalIsNotOverlap) {
  Dataset d;
  d.videos.push_back({"v1", "", "", {}, 5.0, {}});
  d.detections.push_back({"v1", Category::kObjects, "car", 0.9, 1.0, 2.0});
  const FeatureStore store = build_store(d);
  const auto postings = store.postings(Category::kObjects, "car");
  ASSERT_EQ(postings.size(), 1u);
  EXPECT_EQ(store.shot_id(postings[0].shot), "v1#1");
}

TEST(FeatureStore, RejectsInvalidRecords) {
  Dataset d;
  d.videos.push_back({"v1", "", "", {}, 5.0, {}});
  d.videos.push_back({"v1", "", "", {}, 3.0, {}});
  d.detections.push_back({"v1", Category::kObjects, "car", 1.3, 0.0, 1.0});
  d.detections.push_back({"zz", Category::kObjects, "car", 0.5, 0.0, 1.0});
  d.detections.push_back({"v1", Category::kObjects, "car", 0.5, 2.0, 2.0});
  d.detections.push_back({"v1", Category::kObjects, "  ", 0.5, 0.0, 1.0});
  d.detections.push_back({"v1", Category::kObjects, "car", 0.5, 7.0, 9.0});
  d.map_vectors.push_back({"v1", {1.0, 2.0}});
  d.map_vectors.push_back({"v1", {1.0, 2.0}});
  const FeatureStore store = build_store(d);
  const auto& rejected = store.summary().rejected;
  ASSERT_EQ(rejected.size(), 7u);
  EXPECT_NE(rejected[0].reason.find("duplicate video id"), std::string::npos);
  EXPECT_EQ(rejected[0].line, 2u);
  EXPECT_NE(rejected[1].reason.find("outside [0,1]"), std::string::npos);
  EXPECT_NE(rejected[2].reason.find("unknown video"), std::string::npos);
  EXPECT_EQ(store.summary().videos, 1u);
  EXPECT_EQ(store.summary().detections, 0u);
  EXPECT_EQ(store.summary().map_vectors, 1u);
}

TEST(FeatureStore, SingleConfidenceViolationListsOneRejection) {
  Dataset d = fixture_f1();
  d.detections.push_back({"v1", Category::kObjects, "car", 1.3, 0.0, 1.0});
  const FeatureStore store = build_store(d);
  ASSERT_EQ(store.summary().rejected.size(), 1u);
  EXPECT_EQ(store.summary().feature_postings, 8u);
}

TEST(FeatureStore, LabelsAreLowercased) {
  Dataset d;
  d.videos.push_back({"v1", "", "", {}, 2.0, {}});
  d.detections.push_back({"v1", Category::kPlaces, "RaceWay", 0.5, 0.0, 1.0});
  const FeatureStore store = build_store(d);
  EXPECT_EQ(store.postings(Category::kPlaces, "raceway").size(), 1u);
}

TEST(FeatureStore, DuplicateDetectionsMergeByMax) {
  Dataset base = fixture_f1();
  Dataset twice = base;
  twice.detections.insert(twice.detections.end(), base.detections.begin(), base.detections.end());
  twice.detections.push_back({"v1", Category::kObjects, "car", 0.1, 0.0, 1.0});
  const FeatureStore a = build_store(base);
  const FeatureStore b = build_store(twice);
  EXPECT_EQ(a.summary().feature_postings, b.summary().feature_postings);
  for (const auto& entry : a.vocabulary()) {
    const auto pa = a.postings(entry.category, entry.label);
    const auto pb = b.postings(entry.category, entry.label);
    ASSERT_EQ(pa.size(), pb.size());
    for (std::size_t i = 0; i < pa.size(); ++i) {
      EXPECT_EQ(pa[i].shot, pb[i].shot);
      EXPECT_EQ(pa[i].confidence, pb[i].confidence);
    }
  }
}

TEST(FeatureStore, ShotProfile) {
  const FeatureStore store = f1_store();
  const ShotProfile p = store.shot_profile("v1#1");
  ASSERT_EQ(p[Category::kObjects].size(), 2u);
  EXPECT_EQ(p[Category::kObjects][0], (LabelConfidence{Category::kObjects, "car", 0.85}));
  EXPECT_EQ(p[Category::kObjects][1], (LabelConfidence{Category::kObjects, "person", 0.6}));
  EXPECT_TRUE(p[Category::kPlaces].empty());

  for (const auto& list : store.shot_profile("v1#4").categories) EXPECT_TRUE(list.empty());

  try {
    store.shot_profile("zz#9");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFound);
  }
  EXPECT_THROW(store.shot_profile("v1#5"), Error);
  EXPECT_THROW(store.shot_profile("v1"), Error);
}

TEST(FeatureStore, ShotProfileTopK) {
  Dataset d;
  d.videos.push_back({"v1", "", "", {}, 1.0, {}});
  for (int i = 0; i < 8; ++i) {
    d.detections.push_back({"v1", Category::kConcepts, "c" + std::to_string(i), 0.1 * (i + 1), 0.0, 1.0});
  }
  const FeatureStore store = build_store(d);
  const auto top = store.shot_profile("v1#0", 3)[Category::kConcepts];
  ASSERT_EQ(top.size(), 3u);
  EXPECT_EQ(top[0].label, "c7");
  EXPECT_EQ(top[2].label, "c5");
  EXPECT_EQ(store.shot_profile("v1#0")[Category::kConcepts].size(), 5u);
}

TEST(FeatureStore, Vocabulary) {
  const FeatureStore store = f1_store();
  const auto objects = store.vocabulary(Category::kObjects);
  ASSERT_EQ(objects.size(), 2u);
  EXPECT_EQ(objects[0].label, "car");
  EXPECT_EQ(objects[0].shot_frequency, 3u);
  EXPECT_EQ(objects[0].example_shot_ids, (std::vector<std::string>{"v1#0", "v1#1", "v2#0"}));
  EXPECT_EQ(objects[1].label, "person");
  EXPECT_EQ(objects[1].shot_frequency, 2u);
  EXPECT_EQ(objects[1].example_shot_ids, (std::vector<std::string>{"v1#2", "v1#1"}));

  std::set<Category> categories;
  for (const auto& e : store.vocabulary()) categories.insert(e.category);
  EXPECT_EQ(categories, (std::set<Category>{Category::kConcepts, Category::kObjects, Category::kEvents,
                                            Category::kPlaces, Category::kStt}));
  EXPECT_THROW(store.vocabulary(Category::kAll), Error);
}

TEST(FeatureStore, VocabularyMatchesLinearScan) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const auto cfg = testing_support::random_small_config(rng);
    const Dataset data = generate_synthetic(cfg);
    const FeatureStore store = build_store(data, {cfg.interval_s, 5});
    const auto expected = oracle::vocabulary(oracle::build(data, cfg.interval_s));
    const auto& actual = store.vocabulary_index();
    ASSERT_EQ(actual.size(), expected.size());
    for (std::size_t i = 0; i < actual.size(); ++i) {
      EXPECT_EQ(actual[i].category, expected[i].category);
      EXPECT_EQ(actual[i].label, expected[i].label);
      EXPECT_EQ(actual[i].shot_frequency, expected[i].frequency);
      EXPECT_LE(actual[i].example_shot_ids.size(), 3u);
    }
  }
}

TEST(FeatureStore, SegmentationCountPerVideo) {
  std::mt19937_64 rng(3);
  for (double interval : {1.0, 10.0, 0.4}) {
    const auto cfg = testing_support::random_small_config(rng);
    Dataset data = generate_synthetic(cfg);
    data.detections.clear();
    data.texts.clear();
    const FeatureStore store = build_store(data, {interval, 5});
    for (VideoOrdinal v = 0; v < store.video_count(); ++v) {
      EXPECT_EQ(store.video_shot_count(v),
                static_cast<std::uint32_t>(std::ceil(store.video(v).duration_s / interval)));
    }
  }
}

TEST(Ingest, FilesRoundTripAndRejections) {
  const fs::path dir = temp_dir("ingest");
  write_dataset(fixture_f1(), dir, 1.0);
  {
    std::ofstream det(dir / "detections.jsonl", std::ios::app);
    det << "{not json\n";
    det << R"({"video_id":"v1","category":"objects","label":"car","confidence":1.3,"start_s":0,"end_s":1})" << '\n';
    det << R"({"video_id":"nope","category":"objects","label":"car","confidence":0.3,"start_s":0,"end_s":1})" << '\n';
    det << R"({"video_id":"v1","category":"weather","label":"rain","confidence":0.3,"start_s":0,"end_s":1})" << '\n';
    det << R"({"video_id":"v1","category":"objects","confidence":0.3,"start_s":0,"end_s":1})" << '\n';
    std::ofstream vids(dir / "videos.jsonl", std::ios::app);
    vids << R"({"id":"v1","duration_s":4.0})" << '\n';
  }
  const FeatureStore store = ingest_dataset(load_manifest(dir));
  const DatasetSummary& s = store.summary();
  EXPECT_EQ(s.videos, 2u);
  EXPECT_EQ(s.shots, 8u);
  EXPECT_EQ(s.feature_postings, 8u);
  EXPECT_EQ(s.text_postings, 9u);
  ASSERT_EQ(s.rejected.size(), 6u);
  EXPECT_EQ(s.rejected[0].source, "videos.jsonl");
  EXPECT_EQ(s.rejected[0].line, 3u);
  EXPECT_EQ(s.rejected[1].source, "detections.jsonl");
  EXPECT_EQ(s.rejected[1].line, 9u);
  EXPECT_EQ(s.rejected[1].reason, "malformed line");
  EXPECT_EQ(store.video(*store.find_video("v2")).description, "A sports car race ends");
  fs::remove_all(dir);
}

TEST(Ingest, ManifestErrors) {
  const fs::path dir = temp_dir("manifest");
  EXPECT_THROW(load_manifest(dir / "missing.json"), Error);
  {
    std::ofstream(dir / "m.json") << R"({"detections":"d.jsonl"})";
  }
  EXPECT_THROW(load_manifest(dir / "m.json"), Error);
  {
    std::ofstream(dir / "m2.json") << R"({"videos":"nothere.jsonl","interval_s":10})";
  }
  const Manifest m = load_manifest(dir / "m2.json");
  EXPECT_DOUBLE_EQ(m.interval_s, 10.0);
  EXPECT_THROW(ingest_dataset(m), Error);
  fs::remove_all(dir);
}

TEST(Ingest, KeyframeRefs) {
  const fs::path dir = temp_dir("keyframes");
  {
    std::ofstream(dir / "videos.jsonl") << R"({"id":"a","duration_s":2.0,"keyframes":["a/0.jpg","a/1.jpg"]})" << '\n';
    std::ofstream(dir / "manifest.json") << R"({"videos":"videos.jsonl"})";
  }
  const FeatureStore store = ingest_dataset(load_manifest(dir));
  EXPECT_EQ(store.shot(*store.find_shot("a#1")).keyframe_ref, "a/1.jpg");
  fs::remove_all(dir);
}

TEST(Ingest, IntervalTenSeconds) {
  Dataset d = fixture_f1();
  const FeatureStore store = build_store(d, {10.0, 5});
  EXPECT_EQ(store.shot_count(), 2u);
  EXPECT_EQ(store.postings(Category::kObjects, "car").size(), 2u);
  const auto car = store.postings(Category::kObjects, "car");
  EXPECT_DOUBLE_EQ(car[0].confidence, 0.9);
}

}  // namespace
}  // namespace vidsearch
