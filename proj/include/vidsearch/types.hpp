#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vidsearch {

// Feature categories as stored in the index. `kAll` is only valid inside a
// query term and is expanded over the four deep-feature categories.
enum class Category : std::uint8_t {
  kConcepts = 0,
  kObjects,
  kEvents,
  kPlaces,
  kOcr,
  kStt,
  kAll,
};

inline constexpr std::size_t kIndexedCategoryCount = 6;

inline constexpr std::array<Category, kIndexedCategoryCount> kIndexedCategories = {
    Category::kConcepts, Category::kObjects, Category::kEvents,
    Category::kPlaces,   Category::kOcr,     Category::kStt};

inline constexpr std::array<Category, 4> kFeatureCategories = {
    Category::kConcepts, Category::kObjects, Category::kEvents, Category::kPlaces};

std::string_view to_string(Category category);
// Accepts the six indexed category names (not "all").
std::optional<Category> category_from_string(std::string_view name);
inline bool is_text_category(Category c) { return c == Category::kOcr || c == Category::kStt; }

struct VideoMeta {
  std::string video_id;
  std::string title;
  std::string description;
  std::vector<std::string> tags;
  double duration_s = 0.0;
  std::vector<std::string> keyframes;  // optional, indexed by shot index
};

struct Shot {
  std::string video_id;
  std::uint32_t index = 0;
  double start_s = 0.0;
  double end_s = 0.0;
  std::optional<std::string> keyframe_ref;

  std::string shot_id() const { return video_id + "#" + std::to_string(index); }
};

struct Detection {
  std::string video_id;
  Category category = Category::kConcepts;
  std::string label;
  double confidence = 0.0;
  double start_s = 0.0;
  double end_s = 0.0;
};

struct TextRecord {
  std::string video_id;
  Category source = Category::kOcr;  // kOcr or kStt
  double start_s = 0.0;
  double end_s = 0.0;
  std::string text;
};

struct MapVectorRecord {
  std::string video_id;
  std::vector<double> vector;
};

struct LabelConfidence {
  Category category = Category::kConcepts;
  std::string label;
  double confidence = 0.0;

  bool operator==(const LabelConfidence&) const = default;
};

struct VocabularyEntry {
  std::string label;
  Category category = Category::kConcepts;
  std::uint32_t shot_frequency = 0;
  std::vector<std::string> example_shot_ids;  // highest confidence first, at most 3

  bool operator==(const VocabularyEntry&) const = default;
};

}  // namespace vidsearch
