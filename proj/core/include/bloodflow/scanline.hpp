#pragma once

#include <cstddef>
#include <vector>

#include "bloodflow/model.hpp"

namespace bloodflow {

/// Space-time slice: column t of the result is column `column` of frame t.
/// Each pixel's deviation from its temporal mean is multiplied by `magnify`
/// and the result clamped to [0,1].
FrameBuffer scanline(const VideoSequence& video, std::size_t column, double magnify = 1.0);

struct PixelSample {
  double time_s;
  Rgb value;
};

/// Raw (unmagnified) RGB of one pixel over time.
std::vector<PixelSample> pixel_trace(const VideoSequence& video, std::size_t x, std::size_t y);

}  // namespace bloodflow
