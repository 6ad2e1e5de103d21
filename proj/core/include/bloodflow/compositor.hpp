#pragma once

#include <span>
#include <variant>

#include "bloodflow/model.hpp"

namespace bloodflow {

/// out_c = clamp01(in_c + gamma * w_c * M_xy * pulse_value) per pixel and
/// channel.
FrameBuffer augment_frame(const FrameBuffer& frame, const PerfusionMask& mask, double pulse_value,
                          double gamma, const ColorWeights& weights);

/// A still image (replicated to round(fps * duration_s) frames) or a video.
using AnimationSource = std::variant<FrameBuffer, VideoSequence>;

/// Composites the pulse onto every frame. `masks` holds one mask for all
/// frames or one per frame. The trace must already be sampled at config.fps.
VideoSequence animate(const AnimationSource& source, std::span<const PerfusionMask> masks,
                      const PulseTrace& trace, const AnimationConfig& config);

}  // namespace bloodflow
