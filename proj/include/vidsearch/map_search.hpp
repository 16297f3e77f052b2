#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "vidsearch/error.hpp"
#include "vidsearch/search_types.hpp"

namespace vidsearch {

enum class Matcher { kFrequency, kTfidf };

std::string_view to_string(Matcher matcher);
// Throws kInvalidArgument for anything but "frequency" / "tfidf".
Matcher matcher_from_string(std::string_view name);

struct TermCount {
  Term term;
  std::uint32_t count = 0;  // shots of the video matching the term
};

struct RankedVideo {
  std::string video_id;
  double score = 0.0;
  std::vector<TermCount> per_term_counts;
};

// Video-level retrieval. A video qualifies when every term matches at least
// one of its shots.
//   frequency: sum over terms of the matching-shot count
//   tfidf:     sum over terms of (count / |shots|) * ln(1 + N / df)
// with N the number of videos and df the number of videos the term alone
// matches. Ranking is score descending then video_id ascending.
SearchPage<RankedVideo> search_videos(const FeatureStore& store, std::span<const Term> segment,
                                      Matcher matcher, std::size_t limit, std::size_t offset = 0);

// dot(u, v) / (|u| |v|), clamped to [-1, 1].
template <typename DerivedU, typename DerivedV>
double cosine(const Eigen::MatrixBase<DerivedU>& u, const Eigen::MatrixBase<DerivedV>& v) {
  if (u.size() != v.size()) {
    throw_invalid("dimension mismatch: " + std::to_string(u.size()) + " vs " + std::to_string(v.size()));
  }
  const double nu = u.norm();
  const double nv = v.norm();
  if (nu == 0.0 || nv == 0.0) {
    throw Error(ErrorCode::kUndefinedSimilarity, "cosine similarity is undefined for a zero vector");
  }
  return std::clamp(u.dot(v) / (nu * nv), -1.0, 1.0);
}

inline double cosine(std::span<const double> u, std::span<const double> v) {
  using ConstMap = Eigen::Map<const Eigen::VectorXd>;
  return cosine(ConstMap(u.data(), static_cast<Eigen::Index>(u.size())),
                ConstMap(v.data(), static_cast<Eigen::Index>(v.size())));
}

struct SimilarVideo {
  std::string video_id;
  double cosine = 0.0;
};

// Exact k nearest videos by map-vector cosine, self excluded, ties by
// video_id. Videos with no (or a zero) vector are skipped. Throws kNotFound
// when the video is unknown or has no vector.
std::vector<SimilarVideo> similar_videos(const FeatureStore& store, std::string_view video_id, std::size_t k);

}  // namespace vidsearch
