#include "vidsearch/feature_store.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numeric>

#include "vidsearch/error.hpp"
#include "vidsearch/segmentation.hpp"
#include "vidsearch/text.hpp"

namespace vidsearch {

namespace {

constexpr std::uint32_t kNoList = 0xffffffffu;

std::uint64_t pack(Category c, std::uint32_t label_id) {
  return (static_cast<std::uint64_t>(c) << 32) | label_id;
}

LabelKey unpack(std::uint64_t key) {
  return {static_cast<Category>(key >> 32), static_cast<std::uint32_t>(key & 0xffffffffu)};
}

std::string clean_label(std::string_view label) {
  std::size_t b = 0, e = label.size();
  while (b < e && std::isspace(static_cast<unsigned char>(label[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(label[e - 1]))) --e;
  return to_lower(label.substr(b, e - b));
}

}  // namespace

// ---------------------------------------------------------------------------
// FeatureStore

std::optional<VideoOrdinal> FeatureStore::find_video(std::string_view video_id) const {
  auto it = video_ids_.find(std::string(video_id));
  if (it == video_ids_.end()) return std::nullopt;
  return it->second;
}

VideoOrdinal FeatureStore::require_video(std::string_view video_id) const {
  auto v = find_video(video_id);
  if (!v) throw_not_found("unknown video '" + std::string(video_id) + "'");
  return *v;
}

Shot FeatureStore::shot(ShotOrdinal s) const {
  const ShotRecord& r = shots_[s];
  const VideoMeta& meta = videos_[r.video];
  Shot out;
  out.video_id = meta.video_id;
  out.index = r.index;
  out.start_s = r.start_s;
  out.end_s = r.end_s;
  if (r.index < meta.keyframes.size() && !meta.keyframes[r.index].empty()) {
    out.keyframe_ref = meta.keyframes[r.index];
  }
  return out;
}

std::string FeatureStore::shot_id(ShotOrdinal s) const {
  const ShotRecord& r = shots_[s];
  return videos_[r.video].video_id + "#" + std::to_string(r.index);
}

std::optional<ShotOrdinal> FeatureStore::find_shot(std::string_view id) const {
  const auto hash = id.rfind('#');
  if (hash == std::string_view::npos || hash + 1 >= id.size()) return std::nullopt;
  auto v = find_video(id.substr(0, hash));
  if (!v) return std::nullopt;
  std::uint32_t index = 0;
  const char* first = id.data() + hash + 1;
  const char* last = id.data() + id.size();
  auto [ptr, ec] = std::from_chars(first, last, index);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  if (index >= video_shot_count(*v)) return std::nullopt;
  return first_shot(*v) + index;
}

ShotOrdinal FeatureStore::require_shot(std::string_view id) const {
  auto s = find_shot(id);
  if (!s) throw_not_found("unknown shot '" + std::string(id) + "'");
  return *s;
}

std::vector<Shot> FeatureStore::video_shots(std::string_view video_id) const {
  const VideoOrdinal v = require_video(video_id);
  std::vector<Shot> out;
  out.reserve(video_shot_count(v));
  for (ShotOrdinal s = first_shot(v); s < first_shot(v) + video_shot_count(v); ++s) {
    out.push_back(shot(s));
  }
  return out;
}

std::optional<LabelKey> FeatureStore::find_label(Category category, std::string_view label) const {
  if (category == Category::kAll) return std::nullopt;
  const LabelTable& table = labels_[static_cast<std::size_t>(category)];
  auto it = table.ids.find(std::string(label));
  if (it == table.ids.end()) return std::nullopt;
  return LabelKey{category, it->second};
}

const std::string& FeatureStore::label(LabelKey key) const {
  return labels_[static_cast<std::size_t>(key.category)].labels[key.label_id];
}

std::span<const Posting> FeatureStore::postings(LabelKey key) const {
  const LabelTable& table = labels_[static_cast<std::size_t>(key.category)];
  const std::uint32_t list = table.posting_lists[key.label_id];
  if (list == kNoList) return {};
  return posting_lists_[list];
}

std::span<const Posting> FeatureStore::postings(Category category, std::string_view label) const {
  auto key = find_label(category, label);
  if (!key) return {};
  return postings(*key);
}

std::span<const ShotFeature> FeatureStore::shot_features(ShotOrdinal s) const {
  return std::span<const ShotFeature>(shot_features_).subspan(
      shot_feature_offsets_[s], shot_feature_offsets_[s + 1] - shot_feature_offsets_[s]);
}

ShotProfile FeatureStore::shot_profile(ShotOrdinal s, std::size_t k) const {
  ShotProfile profile;
  for (const ShotFeature& f : shot_features(s)) {
    auto& list = profile.categories[static_cast<std::size_t>(f.key.category)];
    if (list.size() < k) list.push_back({f.key.category, label(f.key), f.confidence});
  }
  return profile;
}

ShotProfile FeatureStore::shot_profile(std::string_view id) const {
  return shot_profile(require_shot(id), config_.profile_k);
}

ShotProfile FeatureStore::shot_profile(std::string_view id, std::size_t k) const {
  return shot_profile(require_shot(id), k);
}

std::vector<VocabularyEntry> FeatureStore::vocabulary(std::optional<Category> category) const {
  if (category == Category::kAll) throw_invalid("vocabulary category must be a concrete category");
  if (!category) return vocabulary_;
  std::vector<VocabularyEntry> out;
  for (const auto& e : vocabulary_) {
    if (e.category == *category) out.push_back(e);
  }
  return out;
}

std::optional<Eigen::Index> FeatureStore::map_column(VideoOrdinal v) const {
  const std::int64_t c = video_map_column_[v];
  if (c < 0) return std::nullopt;
  return static_cast<Eigen::Index>(c);
}

// ---------------------------------------------------------------------------
// StoreBuilder

StoreBuilder::StoreBuilder(StoreConfig config) {
  if (!(config.interval_s > 0.0) || !std::isfinite(config.interval_s)) {
    throw_invalid("interval_s must be positive");
  }
  store_.config_ = config;
}

void StoreBuilder::reject(const RecordLocation& where, std::string reason) {
  store_.summary_.rejected.push_back({where.source, where.line, std::move(reason)});
}

bool StoreBuilder::add_video(VideoMeta video, const RecordLocation& where) {
  if (sealed_) {
    reject(where, "video record after detections were added");
    return false;
  }
  if (video.video_id.empty()) {
    reject(where, "empty video id");
    return false;
  }
  if (video.video_id.find('#') != std::string::npos) {
    reject(where, "video id must not contain '#'");
    return false;
  }
  if (!(video.duration_s > 0.0) || !std::isfinite(video.duration_s)) {
    reject(where, "duration_s must be positive for video '" + video.video_id + "'");
    return false;
  }
  auto [it, inserted] = store_.video_ids_.emplace(video.video_id, 0);
  if (!inserted) {
    reject(where, "duplicate video id '" + video.video_id + "'");
    return false;
  }
  store_.videos_.push_back(std::move(video));
  return true;
}

void StoreBuilder::seal_videos() {
  if (sealed_) return;
  sealed_ = true;
  auto& videos = store_.videos_;
  std::sort(videos.begin(), videos.end(),
            [](const VideoMeta& a, const VideoMeta& b) { return a.video_id < b.video_id; });
  store_.video_ids_.clear();
  store_.video_first_shot_.assign(videos.size() + 1, 0);
  for (VideoOrdinal v = 0; v < videos.size(); ++v) {
    store_.video_ids_.emplace(videos[v].video_id, v);
    store_.video_first_shot_[v] = static_cast<ShotOrdinal>(store_.shots_.size());
    for (const ShotInterval& si : segment_video(videos[v].duration_s, store_.config_.interval_s)) {
      store_.shots_.push_back({v, si.index, si.start_s, si.end_s});
    }
  }
  store_.video_first_shot_[videos.size()] = static_cast<ShotOrdinal>(store_.shots_.size());
  store_.video_map_column_.assign(videos.size(), -1);
}

std::uint32_t StoreBuilder::intern(Category category, std::string_view label) {
  auto& table = store_.labels_[static_cast<std::size_t>(category)];
  auto [it, inserted] = table.ids.emplace(std::string(label), static_cast<std::uint32_t>(table.labels.size()));
  if (inserted) table.labels.emplace_back(label);
  return it->second;
}

bool StoreBuilder::expand(VideoOrdinal v, Category category, std::uint32_t label_id,
                          double confidence, double start_s, double end_s) {
  const ShotOrdinal first = store_.first_shot(v);
  const std::uint32_t n = store_.video_shot_count(v);
  const double interval = store_.config_.interval_s;
  auto lo = static_cast<std::int64_t>(std::floor(std::max(start_s, 0.0) / interval));
  lo = std::clamp<std::int64_t>(lo, 0, n - 1);
  while (lo > 0 && store_.shots_[first + lo - 1].end_s > start_s) --lo;
  bool any = false;
  for (std::int64_t i = lo; i < n; ++i) {
    const ShotRecord& shot = store_.shots_[first + i];
    if (shot.start_s >= end_s) break;
    if (start_s < shot.end_s && end_s > shot.start_s) {
      raw_.push_back({pack(category, label_id), static_cast<ShotOrdinal>(first + i), confidence});
      any = true;
    }
  }
  return any;
}

namespace {

bool overlaps_any(const std::vector<ShotRecord>& shots, ShotOrdinal first, std::uint32_t n,
                  double start_s, double end_s) {
  if (n == 0) return false;
  return start_s < shots[first + n - 1].end_s && end_s > shots[first].start_s;
}

}  // namespace

bool StoreBuilder::add_detection(const Detection& d, const RecordLocation& where) {
  seal_videos();
  auto v = store_.find_video(d.video_id);
  if (!v) {
    reject(where, "detection references unknown video '" + d.video_id + "'");
    return false;
  }
  if (d.category == Category::kAll) {
    reject(where, "detection category must be concrete");
    return false;
  }
  const std::string label = clean_label(d.label);
  if (label.empty()) {
    reject(where, "empty label");
    return false;
  }
  if (!std::isfinite(d.confidence) || d.confidence < 0.0 || d.confidence > 1.0) {
    reject(where, "confidence " + std::to_string(d.confidence) + " outside [0,1]");
    return false;
  }
  if (!std::isfinite(d.start_s) || !std::isfinite(d.end_s) || !(d.start_s < d.end_s)) {
    reject(where, "detection interval must satisfy start_s < end_s");
    return false;
  }
  if (!overlaps_any(store_.shots_, store_.first_shot(*v), store_.video_shot_count(*v), d.start_s, d.end_s)) {
    reject(where, "detection interval overlaps no shot of video '" + d.video_id + "'");
    return false;
  }
  expand(*v, d.category, intern(d.category, label), d.confidence, d.start_s, d.end_s);
  ++store_.summary_.detections;
  return true;
}

bool StoreBuilder::add_text(const TextRecord& r, const RecordLocation& where) {
  seal_videos();
  auto v = store_.find_video(r.video_id);
  if (!v) {
    reject(where, "text record references unknown video '" + r.video_id + "'");
    return false;
  }
  if (!is_text_category(r.source)) {
    reject(where, "text source must be ocr or stt");
    return false;
  }
  if (!std::isfinite(r.start_s) || !std::isfinite(r.end_s) || !(r.start_s < r.end_s)) {
    reject(where, "text interval must satisfy start_s < end_s");
    return false;
  }
  if (!overlaps_any(store_.shots_, store_.first_shot(*v), store_.video_shot_count(*v), r.start_s, r.end_s)) {
    reject(where, "text interval overlaps no shot of video '" + r.video_id + "'");
    return false;
  }
  for (const std::string& token : tokenize_text(r.text)) {
    expand(*v, r.source, intern(r.source, token), 1.0, r.start_s, r.end_s);
  }
  ++store_.summary_.text_records;
  return true;
}

bool StoreBuilder::add_map_vector(const MapVectorRecord& r, const RecordLocation& where) {
  seal_videos();
  auto v = store_.find_video(r.video_id);
  if (!v) {
    reject(where, "map vector references unknown video '" + r.video_id + "'");
    return false;
  }
  if (r.vector.empty()) {
    reject(where, "empty map vector");
    return false;
  }
  if (!map_records_.empty() && map_records_.front().second.size() != r.vector.size()) {
    reject(where, "map vector dimension " + std::to_string(r.vector.size()) + " differs from " +
                      std::to_string(map_records_.front().second.size()));
    return false;
  }
  if (!std::all_of(r.vector.begin(), r.vector.end(), [](double x) { return std::isfinite(x); })) {
    reject(where, "map vector contains non-finite values");
    return false;
  }
  if (store_.video_map_column_[*v] >= 0) {
    reject(where, "duplicate map vector for video '" + r.video_id + "'");
    return false;
  }
  store_.video_map_column_[*v] = 0;
  map_records_.emplace_back(*v, r.vector);
  return true;
}

FeatureStore StoreBuilder::build() && {
  seal_videos();
  FeatureStore& s = store_;

  std::sort(raw_.begin(), raw_.end(), [](const RawPosting& a, const RawPosting& b) {
    return a.key != b.key ? a.key < b.key : a.shot < b.shot;
  });

  for (auto& table : s.labels_) table.posting_lists.assign(table.labels.size(), kNoList);
  std::vector<std::uint32_t> per_shot(s.shots_.size() + 1, 0);
  for (std::size_t i = 0; i < raw_.size();) {
    const std::uint64_t key = raw_[i].key;
    std::vector<Posting> list;
    for (; i < raw_.size() && raw_[i].key == key; ++i) {
      if (!list.empty() && list.back().shot == raw_[i].shot) {
        list.back().confidence = std::max(list.back().confidence, raw_[i].confidence);
      } else {
        list.push_back({raw_[i].shot, raw_[i].confidence});
      }
    }
    const LabelKey lk = unpack(key);
    const bool text = is_text_category(lk.category);
    (text ? s.summary_.text_postings : s.summary_.feature_postings) += list.size();
    for (const Posting& p : list) ++per_shot[p.shot];
    s.labels_[static_cast<std::size_t>(lk.category)].posting_lists[lk.label_id] =
        static_cast<std::uint32_t>(s.posting_lists_.size());
    s.posting_lists_.push_back(std::move(list));
  }
  raw_.clear();
  raw_.shrink_to_fit();

  // Per-shot feature lists (CSR).
  s.shot_feature_offsets_.assign(s.shots_.size() + 1, 0);
  for (std::size_t i = 0; i < s.shots_.size(); ++i) {
    s.shot_feature_offsets_[i + 1] = s.shot_feature_offsets_[i] + per_shot[i];
  }
  s.shot_features_.resize(s.shot_feature_offsets_.back());
  std::vector<std::uint32_t> cursor(s.shot_feature_offsets_.begin(), s.shot_feature_offsets_.end() - 1);
  for (Category c : kIndexedCategories) {
    const auto& table = s.labels_[static_cast<std::size_t>(c)];
    for (std::uint32_t id = 0; id < table.labels.size(); ++id) {
      if (table.posting_lists[id] == kNoList) continue;
      for (const Posting& p : s.posting_lists_[table.posting_lists[id]]) {
        s.shot_features_[cursor[p.shot]++] = {LabelKey{c, id}, p.confidence};
      }
    }
  }
  for (std::size_t i = 0; i < s.shots_.size(); ++i) {
    std::sort(s.shot_features_.begin() + s.shot_feature_offsets_[i],
              s.shot_features_.begin() + s.shot_feature_offsets_[i + 1],
              [&s](const ShotFeature& a, const ShotFeature& b) {
                if (a.confidence != b.confidence) return a.confidence > b.confidence;
                if (a.key.category != b.key.category) return a.key.category < b.key.category;
                return s.label(a.key) < s.label(b.key);
              });
  }

  // Vocabulary, ordered by category then label.
  for (Category c : kIndexedCategories) {
    const auto& table = s.labels_[static_cast<std::size_t>(c)];
    std::vector<std::uint32_t> ids(table.labels.size());
    std::iota(ids.begin(), ids.end(), 0u);
    std::sort(ids.begin(), ids.end(),
              [&table](std::uint32_t a, std::uint32_t b) { return table.labels[a] < table.labels[b]; });
    for (std::uint32_t id : ids) {
      if (table.posting_lists[id] == kNoList) continue;
      const auto& list = s.posting_lists_[table.posting_lists[id]];
      std::vector<Posting> top(list.begin(), list.end());
      const std::size_t keep = std::min<std::size_t>(3, top.size());
      std::partial_sort(top.begin(), top.begin() + keep, top.end(), [](const Posting& a, const Posting& b) {
        return a.confidence != b.confidence ? a.confidence > b.confidence : a.shot < b.shot;
      });
      VocabularyEntry entry{table.labels[id], c, static_cast<std::uint32_t>(list.size()), {}};
      for (std::size_t k = 0; k < keep; ++k) entry.example_shot_ids.push_back(s.shot_id(top[k].shot));
      s.vocabulary_.push_back(std::move(entry));
    }
  }

  // Map vectors, one column per vectored video in video order.
  std::sort(map_records_.begin(), map_records_.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  const Eigen::Index dim = map_records_.empty() ? 0 : static_cast<Eigen::Index>(map_records_.front().second.size());
  s.map_vectors_.resize(dim, static_cast<Eigen::Index>(map_records_.size()));
  s.map_column_video_.clear();
  for (Eigen::Index col = 0; col < static_cast<Eigen::Index>(map_records_.size()); ++col) {
    const auto& [video, values] = map_records_[col];
    s.map_vectors_.col(col) = Eigen::Map<const Eigen::VectorXd>(values.data(), dim);
    s.video_map_column_[video] = col;
    s.map_column_video_.push_back(video);
  }
  map_records_.clear();

  s.summary_.videos = s.videos_.size();
  s.summary_.shots = s.shots_.size();
  s.summary_.vocabulary_size = s.vocabulary_.size();
  s.summary_.map_vectors = s.map_column_video_.size();
  return std::move(store_);
}

}  // namespace vidsearch
