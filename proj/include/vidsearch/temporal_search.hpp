#pragma once

#include "vidsearch/search_types.hpp"

namespace vidsearch {

inline constexpr double kDefaultWindowS = 30.0;

struct SequenceMatch {
  std::string video_id;
  std::vector<RankedShot> hits;  // one per segment, shot indices strictly increasing
  double score = 0.0;
};

// Multi-segment search within single videos. Each segment is evaluated with
// shot-search semantics; an assignment picks one hit per segment with
// strictly increasing shot index and consecutive start gaps <= window_s.
// Per video only the best assignment is kept (highest score, then the
// lexicographically smallest index tuple). Ranking: score descending, then
// video_id. Throws kInvalidArgument for fewer than two segments or a
// non-positive window.
SearchPage<SequenceMatch> search_temporal(const FeatureStore& store, const QueryAst& ast, double window_s,
                                          std::size_t limit, std::size_t offset = 0);

}  // namespace vidsearch
