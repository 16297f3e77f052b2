#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "vidsearch/feature_store.hpp"

namespace vidsearch {

// Case-insensitive substring match over the vocabulary. Prefix matches come
// first; within a tier entries are ordered by shot frequency descending, then
// label and category. An empty fragment returns the most frequent entries.
std::vector<VocabularyEntry> suggest(const FeatureStore& store, std::string_view fragment, std::size_t limit,
                                     std::optional<Category> category = std::nullopt);

}  // namespace vidsearch
