#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "vidsearch/feature_store.hpp"
#include "vidsearch/query_language.hpp"

namespace vidsearch {

template <typename T>
struct SearchPage {
  std::size_t total = 0;
  std::vector<T> items;
};

struct RankedShot {
  std::string shot_id;
  std::string video_id;
  std::uint32_t index = 0;
  double start_s = 0.0;
  double end_s = 0.0;
  std::optional<std::string> keyframe_ref;
  double score = 0.0;
  std::vector<LabelConfidence> matched;  // in term order
};

RankedShot make_ranked_shot(const FeatureStore& store, ShotOrdinal shot, double score,
                            std::vector<LabelConfidence> matched);

}  // namespace vidsearch
