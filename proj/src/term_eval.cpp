#include "vidsearch/term_eval.hpp"

#include <algorithm>

#include "vidsearch/error.hpp"
#include "vidsearch/text.hpp"

namespace vidsearch {

namespace {

std::vector<TermHit> filtered(std::span<const Posting> postings, double threshold) {
  std::vector<TermHit> hits;
  hits.reserve(postings.size());
  for (const Posting& p : postings) {
    if (p.confidence >= threshold) hits.push_back({p.shot, p.confidence});
  }
  return hits;
}

const Posting* find_posting(std::span<const Posting> postings, ShotOrdinal shot) {
  auto it = std::lower_bound(postings.begin(), postings.end(), shot,
                             [](const Posting& p, ShotOrdinal s) { return p.shot < s; });
  if (it == postings.end() || it->shot != shot) return nullptr;
  return &*it;
}

}  // namespace

std::vector<TermHit> evaluate_term(const FeatureStore& store, const Term& term) {
  if (is_text_category(term.category)) {
    const std::vector<std::string> tokens = tokenize_text(term.label);
    if (tokens.empty()) return {};
    std::vector<TermHit> hits = filtered(store.postings(term.category, tokens.front()), term.threshold);
    for (std::size_t t = 1; t < tokens.size() && !hits.empty(); ++t) {
      const auto postings = store.postings(term.category, tokens[t]);
      std::vector<TermHit> next;
      auto it = postings.begin();
      for (const TermHit& h : hits) {
        it = std::lower_bound(it, postings.end(), h.shot,
                              [](const Posting& p, ShotOrdinal s) { return p.shot < s; });
        if (it == postings.end()) break;
        if (it->shot == h.shot && it->confidence >= term.threshold) {
          next.push_back({h.shot, h.score + it->confidence});
        }
      }
      hits = std::move(next);
    }
    return hits;
  }
  if (term.category == Category::kAll) {
    std::vector<TermHit> merged;
    for (Category c : kFeatureCategories) {
      std::vector<TermHit> hits = filtered(store.postings(c, term.label), term.threshold);
      std::vector<TermHit> out;
      out.reserve(merged.size() + hits.size());
      auto a = merged.begin();
      auto b = hits.begin();
      while (a != merged.end() || b != hits.end()) {
        if (b == hits.end() || (a != merged.end() && a->shot < b->shot)) {
          out.push_back(*a++);
        } else if (a == merged.end() || b->shot < a->shot) {
          out.push_back(*b++);
        } else {
          out.push_back({a->shot, std::max(a->score, b->score)});
          ++a;
          ++b;
        }
      }
      merged = std::move(out);
    }
    return merged;
  }
  return filtered(store.postings(term.category, term.label), term.threshold);
}

std::vector<LabelConfidence> term_matches(const FeatureStore& store, const Term& term, ShotOrdinal shot) {
  if (is_text_category(term.category)) {
    std::vector<LabelConfidence> out;
    const std::vector<std::string> tokens = tokenize_text(term.label);
    for (const std::string& token : tokens) {
      const Posting* p = find_posting(store.postings(term.category, token), shot);
      if (!p || p->confidence < term.threshold) return {};
      out.push_back({term.category, token, p->confidence});
    }
    return out;
  }
  if (term.category == Category::kAll) {
    std::optional<LabelConfidence> best;
    for (Category c : kFeatureCategories) {
      const Posting* p = find_posting(store.postings(c, term.label), shot);
      if (p && p->confidence >= term.threshold && (!best || p->confidence > best->confidence)) {
        best = LabelConfidence{c, term.label, p->confidence};
      }
    }
    if (!best) return {};
    return {*best};
  }
  const Posting* p = find_posting(store.postings(term.category, term.label), shot);
  if (!p || p->confidence < term.threshold) return {};
  return {{term.category, term.label, p->confidence}};
}

std::vector<TermHit> evaluate_segment(const FeatureStore& store, std::span<const Term> segment) {
  if (segment.empty()) throw_invalid("query segment has no terms");
  std::vector<std::vector<TermHit>> lists;
  lists.reserve(segment.size());
  for (const Term& term : segment) {
    lists.push_back(evaluate_term(store, term));
    if (lists.back().empty()) return {};
  }
  std::size_t shortest = 0;
  for (std::size_t t = 1; t < lists.size(); ++t) {
    if (lists[t].size() < lists[shortest].size()) shortest = t;
  }
  std::vector<std::size_t> cursor(lists.size(), 0);
  std::vector<double> scores(lists.size());
  std::vector<TermHit> out;
  for (const TermHit& candidate : lists[shortest]) {
    bool all = true;
    for (std::size_t t = 0; t < lists.size() && all; ++t) {
      const auto& list = lists[t];
      auto it = std::lower_bound(list.begin() + static_cast<std::ptrdiff_t>(cursor[t]), list.end(), candidate.shot,
                                 [](const TermHit& h, ShotOrdinal s) { return h.shot < s; });
      cursor[t] = static_cast<std::size_t>(it - list.begin());
      if (it == list.end()) return out;
      if (it->shot != candidate.shot) {
        all = false;
      } else {
        scores[t] = it->score;
      }
    }
    if (!all) continue;
    double total = 0.0;
    for (double s : scores) total += s;
    out.push_back({candidate.shot, total});
  }
  return out;
}

}  // namespace vidsearch
