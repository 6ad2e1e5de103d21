#include "bloodflow/scanline.hpp"

#include <cmath>
#include <string>

#include "bloodflow/error.hpp"

namespace bloodflow {

FrameBuffer scanline(const VideoSequence& video, std::size_t column, double magnify) {
  if (column >= video.width()) {
    throw Error(ErrorCode::InputError, "column " + std::to_string(column) + " outside width " +
                                           std::to_string(video.width()));
  }
  if (!std::isfinite(magnify)) throw Error(ErrorCode::InputError, "magnification not finite");

  const std::size_t frames = video.size();
  const std::size_t rows = video.height();
  std::vector<double> planes[3];
  for (int c = 0; c < 3; ++c) {
    const auto ch = static_cast<Channel>(c);
    auto& out = planes[c];
    out.resize(frames * rows);
    for (std::size_t y = 0; y < rows; ++y) {
      double mean = 0.0;
      for (const auto& f : video.frames()) mean += f.at(ch, column, y);
      mean /= static_cast<double>(frames);
      for (std::size_t t = 0; t < frames; ++t) {
        const double p = video.frame(t).at(ch, column, y);
        out[y * frames + t] = clamp01(mean + magnify * (p - mean));
      }
    }
  }
  return FrameBuffer(frames, rows, std::move(planes[0]), std::move(planes[1]),
                     std::move(planes[2]));
}

std::vector<PixelSample> pixel_trace(const VideoSequence& video, std::size_t x, std::size_t y) {
  if (x >= video.width() || y >= video.height()) {
    throw Error(ErrorCode::InputError, "pixel outside the frame");
  }
  std::vector<PixelSample> out;
  out.reserve(video.size());
  for (std::size_t t = 0; t < video.size(); ++t) {
    out.push_back({static_cast<double>(t) / video.fps(), video.frame(t).pixel(x, y)});
  }
  return out;
}

}  // namespace bloodflow
