#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vidsearch/types.hpp"

namespace vidsearch {

// One search term. For ocr/stt the label is tokenized at evaluation time and
// every token must occur in the same shot; for the feature categories the
// label (quoted or not) is one vocabulary entry.
struct Term {
  Category category = Category::kConcepts;
  std::string label;
  double threshold = 0.0;

  bool operator==(const Term&) const = default;
};

using Segment = std::vector<Term>;

struct QueryAst {
  std::vector<Segment> segments;  // temporal order; terms conjunctive
  std::optional<double> window_s;

  bool operator==(const QueryAst&) const = default;
};

// Grammar:
//   query   := segment ("-->" segment)* ["--window" seconds]
//   segment := group+
//   group   := flag term ("," term)*
//   term    := (word | "quoted phrase") ["(" real ")"]
// Flags: --concepts --objects --events --places --ocr --stt --all and the
// shortcuts -c -o -e -p. Labels are lowercased. Throws Error(kParseError)
// carrying the byte offset of the offending token.
QueryAst parse_query(std::string_view query);

// Long flags, one flag per run of same-category terms, thresholds with two
// decimals when they round above zero, segments joined by " --> ".
std::string canonicalize(const QueryAst& ast);
std::string canonicalize(const Term& term);

// True when `label` can be written without quotes.
bool is_bare_label(std::string_view label);

}  // namespace vidsearch
