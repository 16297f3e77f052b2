#pragma once

#include <span>
#include <vector>

#include "vidsearch/feature_store.hpp"
#include "vidsearch/query_language.hpp"

namespace vidsearch {

struct TermHit {
  ShotOrdinal shot = 0;
  double score = 0.0;
};

// Every shot the term matches, ascending by shot ordinal. A shot matches when
//  - feature category: it has a posting for the label with confidence >= threshold;
//  - kAll: any of the four feature categories matches; the score is the
//    largest matching confidence;
//  - ocr/stt: every token of the label matches; the score is the token sum.
std::vector<TermHit> evaluate_term(const FeatureStore& store, const Term& term);

// The postings that make `term` match `shot` (empty when it does not).
std::vector<LabelConfidence> term_matches(const FeatureStore& store, const Term& term, ShotOrdinal shot);

// Shots matching every term of the segment, ascending by shot ordinal.
// Scores are summed in term order.
std::vector<TermHit> evaluate_segment(const FeatureStore& store, std::span<const Term> segment);

}  // namespace vidsearch
