#pragma once

#include <cstdint>
#include <vector>

namespace vidsearch {

struct ShotInterval {
  std::uint32_t index = 0;
  double start_s = 0.0;
  double end_s = 0.0;

  bool operator==(const ShotInterval&) const = default;
};

// Uniform fixed-length segmentation of [0, duration_s). The last shot may be
// shorter than interval_s. Throws kInvalidArgument for non-positive or
// non-finite arguments.
std::vector<ShotInterval> segment_video(double duration_s, double interval_s);

std::uint32_t shot_count(double duration_s, double interval_s);

}  // namespace vidsearch
