#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "bloodflow/model.hpp"

namespace bloodflow {

/// Face bounding box in pixels. Detection happens upstream.
struct FaceRoi {
  std::size_t x = 0;
  std::size_t y = 0;
  std::size_t w = 0;
  std::size_t h = 0;

  static constexpr std::size_t kMinSide = 8;

  /// Throws RoiError unless the box lies inside `frame` and is at least 8x8.
  void validate_for(const FrameBuffer& frame) const;
  bool contains(std::size_t px, std::size_t py) const noexcept {
    return px >= x && px < x + w && py >= y && py < y + h;
  }
};

/// Statistics the skin rule thresholds on, one entry per channel.
struct SkinStatistics {
  Rgb mode;
  Rgb stddev;
};

inline constexpr std::size_t kHistogramBins = 256;

/// Histogram modes (bins aligned to the 8-bit levels k/255) and population
/// standard deviations of the roi pixels.
SkinStatistics skin_statistics(const FrameBuffer& frame, const FaceRoi& roi);

/// Adaptive rule-based skin segmentation: a roi pixel is skin when every
/// channel lies within half a standard deviation of that channel's mode.
/// Returns a binary mask; everything outside the roi is 0.
PerfusionMask segment_skin(const FrameBuffer& frame, const FaceRoi& roi);

/// 8-bit grayscale heat map to weights v/255.
PerfusionMask load_mask(std::size_t width, std::size_t height, std::span<const std::uint8_t> pixels);

/// Repeated separable box blur with edge clamping. Radius 0 is the identity.
PerfusionMask smooth_mask(const PerfusionMask& mask, double radius);

/// Rescales to unit maximum. All-zero masks throw EmptyMask.
PerfusionMask normalize_mask(const PerfusionMask& mask);

}  // namespace bloodflow
