#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>

#include "vidsearch/ingest.hpp"

namespace vidsearch {

// Two-video reference dataset: v1 (5 s), v2 (3 s), 1 s shots.
//   v1#0 objects/car 0.9, places/raceway 0.7   v1#1 objects/car 0.85, objects/person 0.6
//   v1#2 objects/person 0.95                   v2#0 objects/car 0.3
//   v2#1 concepts/sports_car 0.8               v2#2 events/racing 0.9
//   map vectors v1 = (1, 0), v2 = (0.6, 0.8); stt on v2 [0,3): "the race ends"
Dataset fixture_f1();
inline constexpr double kFixtureF1IntervalS = 1.0;

struct SyntheticConfig {
  std::size_t videos = 1000;
  double min_duration_s = 100.0;
  double max_duration_s = 100.0;
  double interval_s = 1.0;
  std::size_t detections_per_shot = 20;
  // Concepts, objects, events, places label counts.
  std::array<std::size_t, 4> vocabulary = {1000, 80, 304, 365};
  std::size_t text_records_per_video = 4;
  std::size_t map_dimension = 64;
  // Confidences on the k/64 grid so that score sums are exact.
  bool dyadic_confidences = false;
  std::uint64_t seed = 1;
};

struct DatasetSink {
  std::function<void(const VideoMeta&)> video;
  std::function<void(const Detection&)> detection;
  std::function<void(const TextRecord&)> text;
  std::function<void(const MapVectorRecord&)> map_vector;
};

// Deterministic for a given config. Labels are "<category>_<n>" with a
// skewed popularity so low n are frequent.
void generate_synthetic(const SyntheticConfig& config, const DatasetSink& sink);
Dataset generate_synthetic(const SyntheticConfig& config);
// Streams the dataset to `dir` in the ingestion file formats.
void write_synthetic(const SyntheticConfig& config, const std::filesystem::path& dir);

std::string synthetic_label(Category category, std::size_t n);

}  // namespace vidsearch
