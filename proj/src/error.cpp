#include "vidsearch/error.hpp"
#include "vidsearch/types.hpp"

namespace vidsearch {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kNotFound: return "not_found";
    case ErrorCode::kParseError: return "parse_error";
    case ErrorCode::kIoError: return "io_error";
    case ErrorCode::kUndefinedSimilarity: return "undefined_similarity";
  }
  return "unknown";
}

std::string_view to_string(Category category) {
  switch (category) {
    case Category::kConcepts: return "concepts";
    case Category::kObjects: return "objects";
    case Category::kEvents: return "events";
    case Category::kPlaces: return "places";
    case Category::kOcr: return "ocr";
    case Category::kStt: return "stt";
    case Category::kAll: return "all";
  }
  return "unknown";
}

std::optional<Category> category_from_string(std::string_view name) {
  for (Category c : kIndexedCategories) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

}  // namespace vidsearch
