#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "vidsearch/types.hpp"

namespace vidsearch {

using VideoOrdinal = std::uint32_t;
using ShotOrdinal = std::uint32_t;

// Videos are ordered by video_id and shots are numbered contiguously in that
// order, so comparing shot ordinals is the same as comparing
// (video_id, shot index).
struct ShotRecord {
  VideoOrdinal video = 0;
  std::uint32_t index = 0;
  double start_s = 0.0;
  double end_s = 0.0;
};

struct Posting {
  ShotOrdinal shot = 0;
  double confidence = 0.0;
};

struct LabelKey {
  Category category = Category::kConcepts;
  std::uint32_t label_id = 0;

  bool operator==(const LabelKey&) const = default;
};

struct ShotFeature {
  LabelKey key;
  double confidence = 0.0;
};

struct StoreConfig {
  double interval_s = 1.0;
  std::size_t profile_k = 5;
};

struct RejectedRecord {
  std::string source;  // file name or "memory"
  std::size_t line = 0;
  std::string reason;
};

struct DatasetSummary {
  std::size_t videos = 0;
  std::size_t shots = 0;
  std::size_t detections = 0;       // accepted detection records
  std::size_t text_records = 0;     // accepted ocr/stt records
  std::size_t feature_postings = 0; // concepts/objects/events/places
  std::size_t text_postings = 0;    // ocr/stt
  std::size_t vocabulary_size = 0;
  std::size_t map_vectors = 0;
  std::vector<RejectedRecord> rejected;
};

// Per-category top-k (label, confidence), confidence descending.
struct ShotProfile {
  std::array<std::vector<LabelConfidence>, kIndexedCategoryCount> categories;

  const std::vector<LabelConfidence>& operator[](Category c) const {
    return categories[static_cast<std::size_t>(c)];
  }
};

class StoreBuilder;

// Immutable after construction; safe for concurrent readers.
class FeatureStore {
 public:
  double interval_s() const { return config_.interval_s; }
  const StoreConfig& config() const { return config_; }
  const DatasetSummary& summary() const { return summary_; }

  std::size_t video_count() const { return videos_.size(); }
  std::size_t shot_count() const { return shots_.size(); }

  const VideoMeta& video(VideoOrdinal v) const { return videos_[v]; }
  std::optional<VideoOrdinal> find_video(std::string_view video_id) const;
  // Throws kNotFound.
  VideoOrdinal require_video(std::string_view video_id) const;

  ShotOrdinal first_shot(VideoOrdinal v) const { return video_first_shot_[v]; }
  std::uint32_t video_shot_count(VideoOrdinal v) const {
    return video_first_shot_[v + 1] - video_first_shot_[v];
  }

  const ShotRecord& shot_record(ShotOrdinal s) const { return shots_[s]; }
  Shot shot(ShotOrdinal s) const;
  std::string shot_id(ShotOrdinal s) const;
  std::optional<ShotOrdinal> find_shot(std::string_view shot_id) const;
  // Throws kNotFound.
  ShotOrdinal require_shot(std::string_view shot_id) const;
  std::vector<Shot> video_shots(std::string_view video_id) const;

  std::optional<LabelKey> find_label(Category category, std::string_view label) const;
  const std::string& label(LabelKey key) const;
  // Sorted by shot ordinal, one posting per shot.
  std::span<const Posting> postings(LabelKey key) const;
  std::span<const Posting> postings(Category category, std::string_view label) const;

  // All postings of one shot, confidence descending (ties: category, label).
  std::span<const ShotFeature> shot_features(ShotOrdinal s) const;
  ShotProfile shot_profile(ShotOrdinal s, std::size_t k) const;
  ShotProfile shot_profile(std::string_view shot_id) const;
  ShotProfile shot_profile(std::string_view shot_id, std::size_t k) const;

  // One entry per (category, label), ordered by category then label.
  // Throws kInvalidArgument when `category` is kAll.
  std::vector<VocabularyEntry> vocabulary(std::optional<Category> category = std::nullopt) const;
  const std::vector<VocabularyEntry>& vocabulary_index() const { return vocabulary_; }

  // Map vectors: one column per video that has one.
  Eigen::Index map_dimension() const { return map_vectors_.rows(); }
  const Eigen::MatrixXd& map_vectors() const { return map_vectors_; }
  std::optional<Eigen::Index> map_column(VideoOrdinal v) const;
  VideoOrdinal map_column_video(Eigen::Index column) const { return map_column_video_[column]; }

 private:
  friend class StoreBuilder;

  struct LabelTable {
    std::vector<std::string> labels;
    std::unordered_map<std::string, std::uint32_t> ids;
    std::vector<std::uint32_t> posting_lists;  // label_id -> index in posting_lists_
  };

  StoreConfig config_;
  DatasetSummary summary_;
  std::vector<VideoMeta> videos_;
  std::unordered_map<std::string, VideoOrdinal> video_ids_;
  std::vector<ShotOrdinal> video_first_shot_;  // size videos + 1
  std::vector<ShotRecord> shots_;
  std::array<LabelTable, kIndexedCategoryCount> labels_;
  std::vector<std::vector<Posting>> posting_lists_;
  std::vector<std::uint32_t> shot_feature_offsets_;  // size shots + 1
  std::vector<ShotFeature> shot_features_;
  std::vector<VocabularyEntry> vocabulary_;
  Eigen::MatrixXd map_vectors_;
  std::vector<std::int64_t> video_map_column_;
  std::vector<VideoOrdinal> map_column_video_;
};

struct RecordLocation {
  std::string source = "memory";
  std::size_t line = 0;
};

// Single-writer ingestion. All videos must be added before the first
// detection, text record or map vector; invalid records are rejected and
// reported in the summary rather than thrown.
class StoreBuilder {
 public:
  explicit StoreBuilder(StoreConfig config = {});

  bool add_video(VideoMeta video, const RecordLocation& where = {});
  bool add_detection(const Detection& detection, const RecordLocation& where = {});
  bool add_text(const TextRecord& record, const RecordLocation& where = {});
  bool add_map_vector(const MapVectorRecord& record, const RecordLocation& where = {});
  void reject(const RecordLocation& where, std::string reason);

  FeatureStore build() &&;

 private:
  struct RawPosting {
    std::uint64_t key;  // category << 32 | label_id
    ShotOrdinal shot;
    double confidence;
  };

  void seal_videos();
  std::uint32_t intern(Category category, std::string_view label);
  bool expand(VideoOrdinal v, Category category, std::uint32_t label_id,
              double confidence, double start_s, double end_s);

  FeatureStore store_;
  bool sealed_ = false;
  std::vector<RawPosting> raw_;
  std::vector<std::pair<VideoOrdinal, std::vector<double>>> map_records_;
};

}  // namespace vidsearch
