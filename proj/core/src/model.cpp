#include "bloodflow/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "bloodflow/error.hpp"

namespace bloodflow {

namespace {

constexpr double kTraceTolerance = 1e-9;

void check_unit_range(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw Error(ErrorCode::NumericError,
                  std::string(what) + " sample " + std::to_string(v) + " outside [0,1]");
    }
  }
}

}  // namespace

FrameBuffer::FrameBuffer(std::size_t width, std::size_t height, std::vector<double> red,
                         std::vector<double> green, std::vector<double> blue)
    : width_(width), height_(height), planes_{std::move(red), std::move(green), std::move(blue)} {
  if (width_ == 0 || height_ == 0) {
    throw Error(ErrorCode::DimensionError, "frame must be at least 1x1");
  }
  for (const auto& p : planes_) {
    if (p.size() != width_ * height_) {
      throw Error(ErrorCode::DimensionError, "plane size does not match frame dimensions");
    }
    check_unit_range(p, "frame");
  }
}

FrameBuffer FrameBuffer::filled(std::size_t width, std::size_t height, Rgb value) {
  const auto n = width * height;
  return FrameBuffer(width, height, std::vector<double>(n, value.r),
                     std::vector<double>(n, value.g), std::vector<double>(n, value.b));
}

VideoSequence::VideoSequence(std::vector<FrameBuffer> frames, double fps)
    : frames_(std::move(frames)), fps_(fps) {
  if (frames_.empty()) throw Error(ErrorCode::InputError, "video has no frames");
  if (!(fps_ > 0.0) || !std::isfinite(fps_)) {
    throw Error(ErrorCode::InputError, "fps must be positive");
  }
  for (const auto& f : frames_) {
    if (!f.same_shape(frames_.front())) {
      throw Error(ErrorCode::DimensionError, "frames differ in size");
    }
  }
}

PerfusionMask::PerfusionMask(std::size_t width, std::size_t height, std::vector<double> weights)
    : width_(width), height_(height), weights_(std::move(weights)) {
  if (width_ == 0 || height_ == 0) {
    throw Error(ErrorCode::DimensionError, "mask must be at least 1x1");
  }
  if (weights_.size() != width_ * height_) {
    throw Error(ErrorCode::DimensionError, "mask size does not match dimensions");
  }
  check_unit_range(weights_, "mask");
}

PerfusionMask PerfusionMask::filled(std::size_t width, std::size_t height, double value) {
  return PerfusionMask(width, height, std::vector<double>(width * height, value));
}

double PerfusionMask::sum() const noexcept {
  return std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

double PerfusionMask::max() const noexcept {
  return *std::max_element(weights_.begin(), weights_.end());
}

PulseTrace::PulseTrace(std::vector<double> samples, double sample_rate, double nominal_bpm)
    : samples_(std::move(samples)), sample_rate_(sample_rate), nominal_bpm_(nominal_bpm) {
  if (samples_.size() < 2) throw Error(ErrorCode::InputError, "trace needs at least 2 samples");
  if (!(sample_rate_ > 0.0) || !std::isfinite(sample_rate_)) {
    throw Error(ErrorCode::SamplingError, "sample rate must be positive");
  }
  if (!(nominal_bpm_ > 0.0) || !std::isfinite(nominal_bpm_)) {
    throw Error(ErrorCode::InputError, "nominal bpm must be positive");
  }
  for (double v : samples_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NumericError, "trace sample is not finite");
  }
  const double mean =
      std::accumulate(samples_.begin(), samples_.end(), 0.0) / static_cast<double>(samples_.size());
  const auto [lo, hi] = std::minmax_element(samples_.begin(), samples_.end());
  if (std::abs(mean) > kTraceTolerance || std::abs((*hi - *lo) - 1.0) > kTraceTolerance) {
    throw Error(ErrorCode::InputError, "trace is not zero-mean with unit peak-to-peak");
  }
}

PulseTrace PulseTrace::normalized(std::vector<double> samples, double sample_rate,
                                  double nominal_bpm) {
  if (samples.size() < 2) throw Error(ErrorCode::InputError, "trace needs at least 2 samples");
  const double mean =
      std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(samples.size());
  const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
  const double range = *hi - *lo;
  if (!(range > 0.0) || !std::isfinite(range)) {
    throw Error(ErrorCode::InputError, "flat or non-finite trace cannot be normalized");
  }
  for (double& v : samples) v = (v - mean) / range;
  return PulseTrace(std::move(samples), sample_rate, nominal_bpm);
}

void check_bpm(double bpm) {
  if (!(bpm >= kMinBpm && bpm <= kMaxBpm)) {
    throw Error(ErrorCode::BpmRangeError,
                "bpm " + std::to_string(bpm) + " outside [30, 240]");
  }
}

void AnimationConfig::validate() const {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw Error(ErrorCode::InputError, "gamma must be non-negative");
  }
  check_bpm(bpm);
  if (!(duration_s > 0.0) || !std::isfinite(duration_s)) {
    throw Error(ErrorCode::InputError, "duration must be positive");
  }
  if (!(fps > 0.0) || !std::isfinite(fps)) throw Error(ErrorCode::InputError, "fps must be positive");
}

ColorWeights normalize_weights(double r, double g, double b) {
  for (double v : {r, g, b}) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::InvalidWeights, "weights must be finite and non-negative");
    }
  }
  const double total = r + g + b;
  if (total <= 0.0) throw Error(ErrorCode::InvalidWeights, "all weights are zero");
  return {r / total, g / total, b / total};
}

double clamp01(double v) {
  if (!std::isfinite(v)) throw Error(ErrorCode::NumericError, "cannot clamp a non-finite value");
  return std::clamp(v, 0.0, 1.0);
}

Rgb weighted_spatial_mean(const FrameBuffer& frame, const PerfusionMask& mask) {
  if (!mask.matches(frame)) {
    throw Error(ErrorCode::DimensionError, "mask and frame dimensions differ");
  }
  const auto w = mask.weights();
  double total = 0.0;
  double acc[3] = {0.0, 0.0, 0.0};
  for (int c = 0; c < 3; ++c) {
    const auto plane = frame.plane(static_cast<Channel>(c));
    for (std::size_t i = 0; i < w.size(); ++i) acc[c] += w[i] * plane[i];
  }
  for (double v : w) total += v;
  if (total <= 0.0) throw Error(ErrorCode::EmptyMask, "mask weights sum to zero");
  return {acc[0] / total, acc[1] / total, acc[2] / total};
}

}  // namespace bloodflow
