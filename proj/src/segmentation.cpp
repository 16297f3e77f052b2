#include "vidsearch/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "vidsearch/error.hpp"

namespace vidsearch {

std::uint32_t shot_count(double duration_s, double interval_s) {
  if (!(duration_s > 0.0) || !std::isfinite(duration_s)) {
    throw_invalid("duration_s must be positive, got " + std::to_string(duration_s));
  }
  if (!(interval_s > 0.0) || !std::isfinite(interval_s)) {
    throw_invalid("interval_s must be positive, got " + std::to_string(interval_s));
  }
  const double ratio = std::ceil(duration_s / interval_s);
  if (ratio > static_cast<double>(std::numeric_limits<std::uint32_t>::max() - 1)) {
    throw_invalid("too many shots for duration/interval");
  }
  auto n = static_cast<std::uint32_t>(ratio);
  if (n == 0) n = 1;
  // The division can round across an integer; pin the count so that shot
  // starts computed as index * interval stay inside [0, duration).
  while (n > 1 && static_cast<double>(n - 1) * interval_s >= duration_s) --n;
  while (static_cast<double>(n) * interval_s < duration_s) ++n;
  return n;
}

std::vector<ShotInterval> segment_video(double duration_s, double interval_s) {
  const std::uint32_t n = shot_count(duration_s, interval_s);
  std::vector<ShotInterval> shots;
  shots.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    const double start = static_cast<double>(i) * interval_s;
    const double end = std::min(static_cast<double>(i + 1) * interval_s, duration_s);
    shots.push_back({i, start, end});
  }
  return shots;
}

}  // namespace vidsearch
