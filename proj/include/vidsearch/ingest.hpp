#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "vidsearch/feature_store.hpp"

namespace vidsearch {

// Names the dataset files. Relative paths resolve against the manifest's
// directory. Only `videos` is mandatory.
//
//   {"videos": "videos.jsonl", "detections": "detections.jsonl",
//    "mapvectors": "mapvectors.jsonl", "text": "text.jsonl", "interval_s": 1.0}
struct Manifest {
  std::filesystem::path videos;
  std::optional<std::filesystem::path> detections;
  std::optional<std::filesystem::path> mapvectors;
  std::optional<std::filesystem::path> text;
  double interval_s = 1.0;
};

inline constexpr const char* kManifestFileName = "manifest.json";

// Throws kIoError when unreadable, kInvalidArgument when malformed.
Manifest load_manifest(const std::filesystem::path& path);
// Accepts either a manifest file or a directory holding manifest.json.
std::filesystem::path resolve_manifest_path(const std::filesystem::path& path_or_dir);

// In-memory form of the four files.
struct Dataset {
  std::vector<VideoMeta> videos;
  std::vector<Detection> detections;
  std::vector<TextRecord> texts;
  std::vector<MapVectorRecord> map_vectors;
};

// Malformed or invalid lines are rejected (listed in summary().rejected);
// only a missing/unreadable file aborts.
FeatureStore ingest_dataset(const Manifest& manifest, std::size_t profile_k = 5);
FeatureStore build_store(const Dataset& dataset, StoreConfig config = {});

// Writes videos/detections/mapvectors/text .jsonl and manifest.json into `dir`.
void write_dataset(const Dataset& dataset, const std::filesystem::path& dir, double interval_s);

}  // namespace vidsearch
