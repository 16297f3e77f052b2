#pragma once

#include <random>
#include <vector>

#include "vidsearch/feature_store.hpp"
#include "vidsearch/fixture.hpp"
#include "vidsearch/query_language.hpp"

namespace testing_support {

using vidsearch::Category;
using vidsearch::Term;

// Small datasets for oracle comparisons: at most 50 videos, 100 shots per
// video and ~5,000 detections, dyadic confidences so sums are exact.
inline vidsearch::SyntheticConfig random_small_config(std::mt19937_64& rng) {
  vidsearch::SyntheticConfig cfg;
  cfg.videos = std::uniform_int_distribution<std::size_t>(1, 50)(rng);
  cfg.min_duration_s = std::uniform_real_distribution<double>(0.5, 20.0)(rng);
  cfg.max_duration_s = std::uniform_real_distribution<double>(cfg.min_duration_s, 100.0)(rng);
  cfg.interval_s = 1.0;
  const std::size_t max_shots = cfg.videos * static_cast<std::size_t>(cfg.max_duration_s + 1.0);
  cfg.detections_per_shot = std::max<std::size_t>(1, std::min<std::size_t>(4, 4000 / max_shots));
  cfg.vocabulary = {std::uniform_int_distribution<std::size_t>(2, 12)(rng),
                    std::uniform_int_distribution<std::size_t>(2, 8)(rng),
                    std::uniform_int_distribution<std::size_t>(1, 5)(rng),
                    std::uniform_int_distribution<std::size_t>(1, 6)(rng)};
  cfg.text_records_per_video = std::uniform_int_distribution<std::size_t>(0, 3)(rng);
  cfg.map_dimension = 8;
  cfg.dyadic_confidences = true;
  cfg.seed = rng();
  return cfg;
}

inline Term random_term(const vidsearch::FeatureStore& store, std::mt19937_64& rng) {
  const auto& vocab = store.vocabulary_index();
  std::uniform_int_distribution<int> pct(0, 99);
  Term t;
  if (vocab.empty() || pct(rng) < 5) {
    t = {Category::kObjects, "absent_label", 0.0};
  } else {
    const auto& e = vocab[std::uniform_int_distribution<std::size_t>(0, vocab.size() - 1)(rng)];
    t = {e.category, e.label, 0.0};
    if (!vidsearch::is_text_category(e.category) && pct(rng) < 15) t.category = Category::kAll;
  }
  if (pct(rng) < 50) t.threshold = std::uniform_int_distribution<int>(0, 64)(rng) / 64.0;
  return t;
}

inline std::vector<Term> random_segment(const vidsearch::FeatureStore& store, std::mt19937_64& rng,
                                        std::size_t max_terms = 3) {
  std::vector<Term> segment(std::uniform_int_distribution<std::size_t>(1, max_terms)(rng));
  for (Term& t : segment) t = random_term(store, rng);
  return segment;
}

}  // namespace testing_support
