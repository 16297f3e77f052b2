#include "vidsearch/json_codec.hpp"

namespace vidsearch {

using nlohmann::json;

void to_json(json& j, const VideoMeta& v) {
  j = json{{"video_id", v.video_id}, {"title", v.title}, {"description", v.description},
           {"tags", v.tags}, {"duration_s", v.duration_s}};
}

void to_json(json& j, const Shot& s) {
  j = json{{"shot_id", s.shot_id()}, {"video_id", s.video_id}, {"index", s.index},
           {"start_s", s.start_s}, {"end_s", s.end_s}};
  j["keyframe_ref"] = s.keyframe_ref ? json(*s.keyframe_ref) : json(nullptr);
}

void to_json(json& j, const LabelConfidence& l) {
  j = json{{"category", to_string(l.category)}, {"label", l.label}, {"confidence", l.confidence}};
}

void to_json(json& j, const VocabularyEntry& e) {
  j = json{{"label", e.label}, {"category", to_string(e.category)}, {"frequency", e.shot_frequency},
           {"example_shot_ids", e.example_shot_ids}};
}

void to_json(json& j, const ShotProfile& p) {
  j = json::object();
  for (Category c : kIndexedCategories) {
    json list = json::array();
    for (const LabelConfidence& l : p[c]) list.push_back({{"label", l.label}, {"confidence", l.confidence}});
    j[std::string(to_string(c))] = std::move(list);
  }
}

void to_json(json& j, const Term& t) {
  j = json{{"category", to_string(t.category)}, {"label", t.label}, {"threshold", t.threshold}};
}

void to_json(json& j, const RankedShot& r) {
  j = json{{"shot_id", r.shot_id}, {"video_id", r.video_id}, {"index", r.index}, {"start_s", r.start_s},
           {"end_s", r.end_s}, {"score", r.score}, {"matched", r.matched}};
  j["keyframe_ref"] = r.keyframe_ref ? json(*r.keyframe_ref) : json(nullptr);
}

void to_json(json& j, const RankedVideo& r) {
  json counts = json::array();
  for (const TermCount& tc : r.per_term_counts) {
    json t = tc.term;
    t["count"] = tc.count;
    counts.push_back(std::move(t));
  }
  j = json{{"video_id", r.video_id}, {"score", r.score}, {"per_term_counts", std::move(counts)}};
}

void to_json(json& j, const SequenceMatch& m) {
  j = json{{"video_id", m.video_id}, {"score", m.score}, {"hits", m.hits}};
}

void to_json(json& j, const SimilarVideo& s) {
  j = json{{"video_id", s.video_id}, {"cosine", s.cosine}};
}

void to_json(json& j, const Inspection& i) {
  j = json{{"shot_id", i.shot_id}, {"started_at_ms", i.started_at_ms}, {"dwell_ms", i.dwell_ms}};
}

void to_json(json& j, const HistoryEntry& e) {
  auto opt = [](const std::optional<Inspection>& i) { return i ? json(*i) : json(nullptr); };
  j = json{{"entry_id", e.entry_id},
           {"timestamp_ms", e.timestamp_ms},
           {"kind", to_string(e.kind)},
           {"canonical_query", e.canonical_query},
           {"browsed", {{"first", opt(e.first)}, {"last", opt(e.last)}, {"longest", opt(e.longest)}}},
           {"inspections", e.inspections}};
}

void to_json(json& j, const RejectedRecord& r) {
  j = json{{"source", r.source}, {"line", r.line}, {"reason", r.reason}};
}

void to_json(json& j, const DatasetSummary& s) {
  j = json{{"videos", s.videos},
           {"shots", s.shots},
           {"detections", s.detections},
           {"text_records", s.text_records},
           {"feature_postings", s.feature_postings},
           {"text_postings", s.text_postings},
           {"vocabulary_size", s.vocabulary_size},
           {"map_vectors", s.map_vectors},
           {"rejected", s.rejected}};
}

json suggestion_json(const FeatureStore& store, const VocabularyEntry& entry) {
  json j = entry;
  json keyframes = json::array();
  for (const std::string& id : entry.example_shot_ids) {
    const auto shot = store.find_shot(id);
    const auto ref = shot ? store.shot(*shot).keyframe_ref : std::nullopt;
    keyframes.push_back(ref ? json(*ref) : json(nullptr));
  }
  j["example_keyframes"] = std::move(keyframes);
  return j;
}

json video_json(const FeatureStore& store, VideoOrdinal video) {
  json j = store.video(video);
  j["shot_count"] = store.video_shot_count(video);
  j["has_map_vector"] = store.map_column(video).has_value();
  return j;
}

json error_json(std::string_view code, std::string_view message, std::optional<std::size_t> offset) {
  json e{{"code", code}, {"message", message}};
  if (offset) e["offset"] = *offset;
  return json{{"error", std::move(e)}};
}

}  // namespace vidsearch
