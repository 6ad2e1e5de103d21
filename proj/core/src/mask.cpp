#include "bloodflow/mask.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "bloodflow/error.hpp"

namespace bloodflow {

void FaceRoi::validate_for(const FrameBuffer& frame) const {
  if (w < kMinSide || h < kMinSide) {
    throw Error(ErrorCode::RoiError, "roi must be at least 8x8, got " + std::to_string(w) + "x" +
                                         std::to_string(h));
  }
  if (x + w > frame.width() || y + h > frame.height()) {
    throw Error(ErrorCode::RoiError, "roi extends outside the " + std::to_string(frame.width()) +
                                         "x" + std::to_string(frame.height()) + " frame");
  }
}

namespace {

std::size_t level_bin(double v) {
  return static_cast<std::size_t>(std::clamp<long long>(std::llround(v * 255.0), 0, 255));
}

double channel_mode(const FrameBuffer& frame, const FaceRoi& roi, Channel c) {
  std::array<std::size_t, kHistogramBins> hist{};
  for (std::size_t y = roi.y; y < roi.y + roi.h; ++y) {
    for (std::size_t x = roi.x; x < roi.x + roi.w; ++x) ++hist[level_bin(frame.at(c, x, y))];
  }
  // max_element returns the first maximum, i.e. the lowest-intensity bin on ties.
  const auto bin = std::max_element(hist.begin(), hist.end()) - hist.begin();
  return static_cast<double>(bin) / 255.0;
}

double channel_stddev(const FrameBuffer& frame, const FaceRoi& roi, Channel c) {
  const double n = static_cast<double>(roi.w * roi.h);
  double mean = 0.0;
  for (std::size_t y = roi.y; y < roi.y + roi.h; ++y) {
    for (std::size_t x = roi.x; x < roi.x + roi.w; ++x) mean += frame.at(c, x, y);
  }
  mean /= n;
  double var = 0.0;
  for (std::size_t y = roi.y; y < roi.y + roi.h; ++y) {
    for (std::size_t x = roi.x; x < roi.x + roi.w; ++x) {
      const double d = frame.at(c, x, y) - mean;
      var += d * d;
    }
  }
  return std::sqrt(var / n);
}

}  // namespace

SkinStatistics skin_statistics(const FrameBuffer& frame, const FaceRoi& roi) {
  roi.validate_for(frame);
  SkinStatistics s{};
  s.mode = {channel_mode(frame, roi, Channel::Red), channel_mode(frame, roi, Channel::Green),
            channel_mode(frame, roi, Channel::Blue)};
  s.stddev = {channel_stddev(frame, roi, Channel::Red), channel_stddev(frame, roi, Channel::Green),
              channel_stddev(frame, roi, Channel::Blue)};
  return s;
}

PerfusionMask segment_skin(const FrameBuffer& frame, const FaceRoi& roi) {
  const auto stats = skin_statistics(frame, roi);
  if (stats.stddev.r == 0.0 || stats.stddev.g == 0.0 || stats.stddev.b == 0.0) {
    spdlog::warn("segment_skin: roi has zero spread in at least one channel; "
                 "selecting only pixels equal to the mode");
  }
  std::vector<double> weights(frame.pixel_count(), 0.0);
  for (std::size_t y = roi.y; y < roi.y + roi.h; ++y) {
    for (std::size_t x = roi.x; x < roi.x + roi.w; ++x) {
      bool skin = true;
      for (Channel c : kChannels) {
        if (std::abs(frame.at(c, x, y) - stats.mode[c]) > 0.5 * stats.stddev[c]) {
          skin = false;
          break;
        }
      }
      if (skin) weights[y * frame.width() + x] = 1.0;
    }
  }
  return PerfusionMask(frame.width(), frame.height(), std::move(weights));
}

PerfusionMask load_mask(std::size_t width, std::size_t height, std::span<const std::uint8_t> pixels) {
  if (pixels.size() != width * height) {
    throw Error(ErrorCode::DimensionError, "mask image size does not match its dimensions");
  }
  std::vector<double> weights(pixels.size());
  std::transform(pixels.begin(), pixels.end(), weights.begin(),
                 [](std::uint8_t v) { return static_cast<double>(v) / 255.0; });
  return PerfusionMask(width, height, std::move(weights));
}

PerfusionMask smooth_mask(const PerfusionMask& mask, double radius) {
  if (!(radius >= 0.0) || !std::isfinite(radius)) {
    throw Error(ErrorCode::InputError, "smoothing radius must be non-negative");
  }
  const auto r = static_cast<std::ptrdiff_t>(std::ceil(radius));
  if (r == 0) return mask;

  const auto w = static_cast<std::ptrdiff_t>(mask.width());
  const auto h = static_cast<std::ptrdiff_t>(mask.height());
  const double norm = 1.0 / static_cast<double>(2 * r + 1);
  std::vector<double> cur(mask.weights().begin(), mask.weights().end());
  std::vector<double> tmp(cur.size());

  for (std::ptrdiff_t pass = 0; pass < r; ++pass) {
    for (std::ptrdiff_t y = 0; y < h; ++y) {
      for (std::ptrdiff_t x = 0; x < w; ++x) {
        double acc = 0.0;
        for (std::ptrdiff_t d = -r; d <= r; ++d) acc += cur[y * w + std::clamp(x + d, std::ptrdiff_t{0}, w - 1)];
        tmp[y * w + x] = acc * norm;
      }
    }
    for (std::ptrdiff_t y = 0; y < h; ++y) {
      for (std::ptrdiff_t x = 0; x < w; ++x) {
        double acc = 0.0;
        for (std::ptrdiff_t d = -r; d <= r; ++d) acc += tmp[std::clamp(y + d, std::ptrdiff_t{0}, h - 1) * w + x];
        cur[y * w + x] = acc * norm;
      }
    }
  }
  for (double& v : cur) v = std::clamp(v, 0.0, 1.0);
  return PerfusionMask(mask.width(), mask.height(), std::move(cur));
}

PerfusionMask normalize_mask(const PerfusionMask& mask) {
  const double peak = mask.max();
  if (!(peak > 0.0)) throw Error(ErrorCode::EmptyMask, "mask is all zero");
  std::vector<double> weights(mask.weights().begin(), mask.weights().end());
  for (double& v : weights) v /= peak;
  return PerfusionMask(mask.width(), mask.height(), std::move(weights));
}

}  // namespace bloodflow
