#include "vidsearch/shot_search.hpp"

#include <algorithm>
#include <unordered_map>

#include "vidsearch/error.hpp"
#include "vidsearch/term_eval.hpp"

namespace vidsearch {

RankedShot make_ranked_shot(const FeatureStore& store, ShotOrdinal ordinal, double score,
                            std::vector<LabelConfidence> matched) {
  const Shot shot = store.shot(ordinal);
  RankedShot out;
  out.shot_id = shot.shot_id();
  out.video_id = shot.video_id;
  out.index = shot.index;
  out.start_s = shot.start_s;
  out.end_s = shot.end_s;
  out.keyframe_ref = shot.keyframe_ref;
  out.score = score;
  out.matched = std::move(matched);
  return out;
}

namespace {

// Orders hits in place for ranks [offset, offset + limit) and returns that slice.
std::vector<TermHit> rank_page(std::vector<TermHit> hits, std::size_t limit, std::size_t offset) {
  auto better = [](const TermHit& a, const TermHit& b) {
    return a.score != b.score ? a.score > b.score : a.shot < b.shot;
  };
  if (offset >= hits.size()) return {};
  const std::size_t end = std::min(hits.size(), offset + limit);
  std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(end), hits.end(), better);
  return {hits.begin() + static_cast<std::ptrdiff_t>(offset), hits.begin() + static_cast<std::ptrdiff_t>(end)};
}

}  // namespace

SearchPage<RankedShot> search_shots(const FeatureStore& store, std::span<const Term> segment,
                                    std::size_t limit, std::size_t offset) {
  if (segment.empty()) throw_invalid("query segment has no terms");
  if (limit < 1) throw_invalid("limit must be at least 1");
  std::vector<TermHit> hits = evaluate_segment(store, segment);
  SearchPage<RankedShot> page;
  page.total = hits.size();
  for (const TermHit& hit : rank_page(std::move(hits), limit, offset)) {
    std::vector<LabelConfidence> matched;
    for (const Term& term : segment) {
      auto m = term_matches(store, term, hit.shot);
      matched.insert(matched.end(), m.begin(), m.end());
    }
    page.items.push_back(make_ranked_shot(store, hit.shot, hit.score, std::move(matched)));
  }
  return page;
}

SearchPage<RankedShot> shots_like(const FeatureStore& store, std::string_view shot_id,
                                  std::size_t limit, std::size_t offset) {
  if (limit < 1) throw_invalid("limit must be at least 1");
  const ShotOrdinal source = store.require_shot(shot_id);

  std::vector<Term> terms;
  for (const ShotFeature& f : store.shot_features(source)) {
    if (is_text_category(f.key.category)) continue;
    terms.push_back({f.key.category, store.label(f.key), 0.0});
    if (terms.size() == kShotsLikeTerms) break;
  }

  std::unordered_map<ShotOrdinal, double> scores;
  for (const Term& term : terms) {
    for (const Posting& p : store.postings(term.category, term.label)) {
      if (p.shot != source) scores[p.shot] += p.confidence;
    }
  }
  std::vector<TermHit> hits;
  hits.reserve(scores.size());
  for (const auto& [shot, score] : scores) hits.push_back({shot, score});

  SearchPage<RankedShot> page;
  page.total = hits.size();
  for (const TermHit& hit : rank_page(std::move(hits), limit, offset)) {
    std::vector<LabelConfidence> matched;
    for (const Term& term : terms) {
      auto m = term_matches(store, term, hit.shot);
      matched.insert(matched.end(), m.begin(), m.end());
    }
    page.items.push_back(make_ranked_shot(store, hit.shot, hit.score, std::move(matched)));
  }
  return page;
}

}  // namespace vidsearch
