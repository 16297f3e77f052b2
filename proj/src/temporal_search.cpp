#include "vidsearch/temporal_search.hpp"

#include <algorithm>
#include <cmath>

#include "vidsearch/error.hpp"
#include "vidsearch/term_eval.hpp"

namespace vidsearch {

namespace {

struct Cell {
  bool valid = false;
  double score = 0.0;
  std::vector<ShotOrdinal> path;
};

bool better(double score, const std::vector<ShotOrdinal>& path, const Cell& current) {
  if (!current.valid) return true;
  if (score != current.score) return score > current.score;
  return path < current.path;
}

struct VideoBest {
  VideoOrdinal video;
  Cell cell;
};

}  // namespace

SearchPage<SequenceMatch> search_temporal(const FeatureStore& store, const QueryAst& ast, double window_s,
                                          std::size_t limit, std::size_t offset) {
  if (ast.segments.size() < 2) throw_invalid("temporal search needs at least two segments; use shot search");
  if (!(window_s > 0.0) || !std::isfinite(window_s)) throw_invalid("window_s must be positive");
  if (limit < 1) throw_invalid("limit must be at least 1");

  const std::size_t m = ast.segments.size();
  std::vector<std::vector<TermHit>> segment_hits;
  for (const Segment& segment : ast.segments) {
    segment_hits.push_back(evaluate_segment(store, segment));
    if (segment_hits.back().empty()) return {};
  }

  auto video_range = [&](std::size_t k, VideoOrdinal v) {
    const auto& hits = segment_hits[k];
    const ShotOrdinal lo = store.first_shot(v);
    const ShotOrdinal hi = lo + store.video_shot_count(v);
    auto cmp = [](const TermHit& h, ShotOrdinal s) { return h.shot < s; };
    auto b = std::lower_bound(hits.begin(), hits.end(), lo, cmp);
    auto e = std::lower_bound(b, hits.end(), hi, cmp);
    return std::span<const TermHit>(hits).subspan(static_cast<std::size_t>(b - hits.begin()),
                                                   static_cast<std::size_t>(e - b));
  };

  std::vector<VideoBest> results;
  const auto& first_hits = segment_hits.front();
  for (std::size_t i = 0; i < first_hits.size();) {
    const VideoOrdinal v = store.shot_record(first_hits[i].shot).video;
    const ShotOrdinal video_end = store.first_shot(v) + store.video_shot_count(v);
    while (i < first_hits.size() && first_hits[i].shot < video_end) ++i;

    std::vector<std::span<const TermHit>> ranges;
    bool present = true;
    for (std::size_t k = 0; k < m && present; ++k) {
      ranges.push_back(video_range(k, v));
      present = !ranges.back().empty();
    }
    if (!present) continue;

    std::vector<Cell> layer(ranges[0].size());
    for (std::size_t j = 0; j < ranges[0].size(); ++j) {
      layer[j] = {true, ranges[0][j].score, {ranges[0][j].shot}};
    }
    for (std::size_t k = 1; k < m && !layer.empty(); ++k) {
      std::vector<Cell> next(ranges[k].size());
      bool any = false;
      for (std::size_t j = 0; j < ranges[k].size(); ++j) {
        const TermHit& hit = ranges[k][j];
        const double start = store.shot_record(hit.shot).start_s;
        for (std::size_t p = 0; p < ranges[k - 1].size(); ++p) {
          const Cell& prev = layer[p];
          const ShotOrdinal prev_shot = ranges[k - 1][p].shot;
          if (prev_shot >= hit.shot) break;
          if (!prev.valid) continue;
          if (start - store.shot_record(prev_shot).start_s > window_s) continue;
          const double score = prev.score + hit.score;
          std::vector<ShotOrdinal> path = prev.path;
          path.push_back(hit.shot);
          if (better(score, path, next[j])) next[j] = {true, score, std::move(path)};
        }
        any = any || next[j].valid;
      }
      if (!any) next.clear();
      layer = std::move(next);
    }

    Cell best;
    for (Cell& cell : layer) {
      if (cell.valid && better(cell.score, cell.path, best)) best = std::move(cell);
    }
    if (best.valid) results.push_back({v, std::move(best)});
  }

  SearchPage<SequenceMatch> page;
  page.total = results.size();
  std::sort(results.begin(), results.end(), [](const VideoBest& a, const VideoBest& b) {
    return a.cell.score != b.cell.score ? a.cell.score > b.cell.score : a.video < b.video;
  });
  const std::size_t end = std::min(results.size(), offset + limit);
  for (std::size_t r = offset; r < end; ++r) {
    SequenceMatch match;
    match.video_id = store.video(results[r].video).video_id;
    match.score = results[r].cell.score;
    for (std::size_t k = 0; k < m; ++k) {
      const ShotOrdinal shot = results[r].cell.path[k];
      const auto hits = video_range(k, results[r].video);
      auto it = std::lower_bound(hits.begin(), hits.end(), shot,
                                 [](const TermHit& h, ShotOrdinal s) { return h.shot < s; });
      std::vector<LabelConfidence> matched;
      for (const Term& term : ast.segments[k]) {
        auto part = term_matches(store, term, shot);
        matched.insert(matched.end(), part.begin(), part.end());
      }
      match.hits.push_back(make_ranked_shot(store, shot, it->score, std::move(matched)));
    }
    page.items.push_back(std::move(match));
  }
  return page;
}

}  // namespace vidsearch
