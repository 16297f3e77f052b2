#pragma once

#include <json.hpp>

#include "vidsearch/feature_store.hpp"
#include "vidsearch/map_search.hpp"
#include "vidsearch/session_history.hpp"
#include "vidsearch/shot_search.hpp"
#include "vidsearch/temporal_search.hpp"

// Wire representation of engine results. Field names are snake_case.
namespace vidsearch {

void to_json(nlohmann::json& j, const VideoMeta& v);
void to_json(nlohmann::json& j, const Shot& s);
void to_json(nlohmann::json& j, const LabelConfidence& l);
void to_json(nlohmann::json& j, const VocabularyEntry& e);
void to_json(nlohmann::json& j, const ShotProfile& p);
void to_json(nlohmann::json& j, const Term& t);
void to_json(nlohmann::json& j, const RankedShot& r);
void to_json(nlohmann::json& j, const RankedVideo& r);
void to_json(nlohmann::json& j, const SequenceMatch& m);
void to_json(nlohmann::json& j, const SimilarVideo& s);
void to_json(nlohmann::json& j, const Inspection& i);
void to_json(nlohmann::json& j, const HistoryEntry& e);
void to_json(nlohmann::json& j, const RejectedRecord& r);
void to_json(nlohmann::json& j, const DatasetSummary& s);

template <typename T>
nlohmann::json page_json(const SearchPage<T>& page) {
  return {{"total", page.total}, {"results", page.items}};
}

// Vocabulary entry plus the keyframe refs of its example shots.
nlohmann::json suggestion_json(const FeatureStore& store, const VocabularyEntry& entry);

nlohmann::json video_json(const FeatureStore& store, VideoOrdinal video);

nlohmann::json error_json(std::string_view code, std::string_view message,
                          std::optional<std::size_t> offset = std::nullopt);

}  // namespace vidsearch
