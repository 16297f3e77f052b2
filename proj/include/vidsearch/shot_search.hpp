#pragma once

#include <span>
#include <string_view>

#include "vidsearch/search_types.hpp"

namespace vidsearch {

// Conjunctive shot retrieval. Score is the sum of the matched confidences;
// ranking is score descending, then (video_id, shot index) ascending.
// Throws kInvalidArgument for an empty segment or limit < 1.
SearchPage<RankedShot> search_shots(const FeatureStore& store, std::span<const Term> segment,
                                    std::size_t limit, std::size_t offset = 0);

// Shots sharing labels with `shot_id`: the source shot's five strongest
// concept/object/event/place labels are matched disjunctively (at least one
// term), the source itself excluded. Throws kNotFound for an unknown shot.
SearchPage<RankedShot> shots_like(const FeatureStore& store, std::string_view shot_id,
                                  std::size_t limit, std::size_t offset = 0);

inline constexpr std::size_t kShotsLikeTerms = 5;

}  // namespace vidsearch
