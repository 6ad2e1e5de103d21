#include "bloodflow/compositor.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "bloodflow/error.hpp"

namespace bloodflow {

namespace {

bool same_rate(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(a, b); }

}  // namespace

FrameBuffer augment_frame(const FrameBuffer& frame, const PerfusionMask& mask, double pulse_value,
                          double gamma, const ColorWeights& weights) {
  if (!mask.matches(frame)) {
    throw Error(ErrorCode::DimensionError, "mask " + std::to_string(mask.width()) + "x" +
                                               std::to_string(mask.height()) + " vs frame " +
                                               std::to_string(frame.width()) + "x" +
                                               std::to_string(frame.height()));
  }
  if (!(mask.sum() > 0.0)) throw Error(ErrorCode::EmptyMask, "mask weights sum to zero");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw Error(ErrorCode::InputError, "gamma must be non-negative");
  }
  if (!std::isfinite(pulse_value)) throw Error(ErrorCode::NumericError, "pulse value not finite");

  const auto m = mask.weights();
  std::vector<double> planes[3];
  for (int c = 0; c < 3; ++c) {
    const auto in = frame.plane(static_cast<Channel>(c));
    const double k = gamma * weights[static_cast<Channel>(c)] * pulse_value;
    auto& out = planes[c];
    out.resize(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = clamp01(in[i] + k * m[i]);
  }
  return FrameBuffer(frame.width(), frame.height(), std::move(planes[0]), std::move(planes[1]),
                     std::move(planes[2]));
}

VideoSequence animate(const AnimationSource& source, std::span<const PerfusionMask> masks,
                      const PulseTrace& trace, const AnimationConfig& config) {
  config.validate();
  if (!same_rate(trace.sample_rate(), config.fps)) {
    throw Error(ErrorCode::SamplingError, "trace sampled at " + std::to_string(trace.sample_rate()) +
                                              " Hz but animation runs at " +
                                              std::to_string(config.fps) + " fps");
  }

  std::size_t frame_count = 0;
  if (const auto* video = std::get_if<VideoSequence>(&source)) {
    if (!same_rate(video->fps(), config.fps)) {
      throw Error(ErrorCode::SamplingError, "source video fps differs from animation fps");
    }
    frame_count = video->size();
  } else {
    frame_count = static_cast<std::size_t>(std::llround(config.fps * config.duration_s));
    if (frame_count == 0) throw Error(ErrorCode::InputError, "animation would have no frames");
  }
  if (trace.size() < frame_count) {
    throw Error(ErrorCode::TraceLengthError, "trace has " + std::to_string(trace.size()) +
                                                 " samples, need " + std::to_string(frame_count));
  }
  if (masks.size() != 1 && masks.size() != frame_count) {
    throw Error(ErrorCode::MaskCountError, std::to_string(masks.size()) + " masks for " +
                                               std::to_string(frame_count) + " frames");
  }

  const ColorWeights weights = config.weights();
  std::vector<FrameBuffer> out;
  out.reserve(frame_count);
  for (std::size_t t = 0; t < frame_count; ++t) {
    const FrameBuffer& in = std::holds_alternative<FrameBuffer>(source)
                                ? std::get<FrameBuffer>(source)
                                : std::get<VideoSequence>(source).frame(t);
    const PerfusionMask& mask = masks.size() == 1 ? masks[0] : masks[t];
    out.push_back(augment_frame(in, mask, trace[t], config.gamma, weights));
  }
  return VideoSequence(std::move(out), config.fps);
}

}  // namespace bloodflow
