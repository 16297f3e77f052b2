#include "vidsearch/map_search.hpp"

#include <cmath>

#include "vidsearch/term_eval.hpp"

namespace vidsearch {

std::string_view to_string(Matcher matcher) {
  return matcher == Matcher::kFrequency ? "frequency" : "tfidf";
}

Matcher matcher_from_string(std::string_view name) {
  if (name == "frequency") return Matcher::kFrequency;
  if (name == "tfidf") return Matcher::kTfidf;
  throw_invalid("unknown matcher '" + std::string(name) + "' (expected frequency or tfidf)");
}

SearchPage<RankedVideo> search_videos(const FeatureStore& store, std::span<const Term> segment,
                                      Matcher matcher, std::size_t limit, std::size_t offset) {
  if (segment.empty()) throw_invalid("query segment has no terms");
  if (limit < 1) throw_invalid("limit must be at least 1");

  const std::size_t n_videos = store.video_count();
  std::vector<std::vector<std::uint32_t>> counts(segment.size(), std::vector<std::uint32_t>(n_videos, 0));
  std::vector<std::uint32_t> df(segment.size(), 0);
  for (std::size_t t = 0; t < segment.size(); ++t) {
    for (const TermHit& hit : evaluate_term(store, segment[t])) {
      auto& c = counts[t][store.shot_record(hit.shot).video];
      if (c++ == 0) ++df[t];
    }
  }

  struct Scored {
    VideoOrdinal video;
    double score;
  };
  std::vector<Scored> scored;
  for (VideoOrdinal v = 0; v < n_videos; ++v) {
    bool all = true;
    for (std::size_t t = 0; t < segment.size() && all; ++t) all = counts[t][v] > 0;
    if (!all) continue;
    double score = 0.0;
    for (std::size_t t = 0; t < segment.size(); ++t) {
      if (matcher == Matcher::kFrequency) {
        score += static_cast<double>(counts[t][v]);
      } else {
        const double tf = static_cast<double>(counts[t][v]) / static_cast<double>(store.video_shot_count(v));
        score += tf * std::log(1.0 + static_cast<double>(n_videos) / static_cast<double>(df[t]));
      }
    }
    scored.push_back({v, score});
  }

  SearchPage<RankedVideo> page;
  page.total = scored.size();
  if (offset >= scored.size()) return page;
  const std::size_t end = std::min(scored.size(), offset + limit);
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(end), scored.end(),
                    [](const Scored& a, const Scored& b) {
                      return a.score != b.score ? a.score > b.score : a.video < b.video;
                    });
  for (std::size_t i = offset; i < end; ++i) {
    RankedVideo rv;
    rv.video_id = store.video(scored[i].video).video_id;
    rv.score = scored[i].score;
    for (std::size_t t = 0; t < segment.size(); ++t) {
      rv.per_term_counts.push_back({segment[t], counts[t][scored[i].video]});
    }
    page.items.push_back(std::move(rv));
  }
  return page;
}

std::vector<SimilarVideo> similar_videos(const FeatureStore& store, std::string_view video_id, std::size_t k) {
  const VideoOrdinal v = store.require_video(video_id);
  const auto column = store.map_column(v);
  if (!column) throw_not_found("video '" + std::string(video_id) + "' has no map vector");
  if (k < 1) throw_invalid("k must be at least 1");

  const Eigen::MatrixXd& vectors = store.map_vectors();
  const auto source = vectors.col(*column);
  struct Scored {
    VideoOrdinal video;
    double cosine;
  };
  std::vector<Scored> scored;
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    if (c == *column || vectors.col(c).squaredNorm() == 0.0) continue;
    scored.push_back({store.map_column_video(c), cosine(source, vectors.col(c))});
  }
  const std::size_t keep = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep), scored.end(),
                    [](const Scored& a, const Scored& b) {
                      return a.cosine != b.cosine ? a.cosine > b.cosine : a.video < b.video;
                    });
  std::vector<SimilarVideo> out;
  for (std::size_t i = 0; i < keep; ++i) {
    out.push_back({store.video(scored[i].video).video_id, scored[i].cosine});
  }
  return out;
}

}  // namespace vidsearch
