#include "vidsearch/autocomplete.hpp"

#include <algorithm>
#include <tuple>

#include "vidsearch/error.hpp"
#include "vidsearch/text.hpp"

namespace vidsearch {

std::vector<VocabularyEntry> suggest(const FeatureStore& store, std::string_view fragment, std::size_t limit,
                                     std::optional<Category> category) {
  if (category == Category::kAll) throw_invalid("autocomplete category must be a concrete category");
  const std::string needle = to_lower(fragment);

  struct Candidate {
    int tier;
    const VocabularyEntry* entry;
  };
  std::vector<Candidate> candidates;
  for (const VocabularyEntry& e : store.vocabulary_index()) {
    if (category && e.category != *category) continue;
    const auto pos = e.label.find(needle);
    if (pos == std::string::npos) continue;
    candidates.push_back({pos == 0 ? 0 : 1, &e});
  }
  const std::size_t keep = std::min(limit, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep), candidates.end(),
                    [](const Candidate& a, const Candidate& b) {
                      return std::make_tuple(a.tier, -static_cast<std::int64_t>(a.entry->shot_frequency),
                                             std::string_view(a.entry->label), a.entry->category) <
                             std::make_tuple(b.tier, -static_cast<std::int64_t>(b.entry->shot_frequency),
                                             std::string_view(b.entry->label), b.entry->category);
                    });
  std::vector<VocabularyEntry> out;
  out.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) out.push_back(*candidates[i].entry);
  return out;
}

}  // namespace vidsearch
