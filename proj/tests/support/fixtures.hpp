#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "bloodflow/mask.hpp"
#include "bloodflow/model.hpp"

namespace fixture {

inline double level(double v) { return std::round(std::clamp(v, 0.0, 1.0) * 255.0) / 255.0; }

/// 8-bit-representable face: a flat elliptical skin region over a dark
/// blue-gray background.
inline bloodflow::FrameBuffer synthetic_face(std::size_t w = 64, std::size_t h = 64) {
  std::vector<double> r(w * h), g(w * h), b(w * h);
  const double cx = (w - 1) / 2.0;
  const double cy = (h - 1) / 2.0;
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const double dx = (x - cx) / (0.38 * w);
      const double dy = (y - cy) / (0.46 * h);
      const auto i = y * w + x;
      if (dx * dx + dy * dy <= 1.0) {
        r[i] = level(0.72);
        g[i] = level(0.52);
        b[i] = level(0.42);
      } else {
        r[i] = level(0.16);
        g[i] = level(0.19);
        b[i] = level(0.26);
      }
    }
  }
  return bloodflow::FrameBuffer(w, h, std::move(r), std::move(g), std::move(b));
}

struct InlierOutlierImage {
  bloodflow::FrameBuffer frame;
  bloodflow::FaceRoi roi;
  std::vector<bool> outlier;  // per pixel, only meaningful inside the roi
};

/// Roi pixels drawn per channel from N(0.6, 0.01) and quantized to 8 bits;
/// 5% of them replaced by 0.9 in every channel. Pixels outside the roi are a
/// mid-gray background.
inline InlierOutlierImage inlier_outlier_image(unsigned seed = 7, std::size_t w = 80,
                                               std::size_t h = 72) {
  const bloodflow::FaceRoi roi{8, 6, 64, 60};
  std::mt19937 rng(seed);
  std::normal_distribution<double> skin(0.6, 0.01);
  std::bernoulli_distribution is_outlier(0.05);
  std::vector<double> planes[3];
  for (auto& p : planes) p.assign(w * h, level(0.3));
  std::vector<bool> outlier(w * h, false);
  for (std::size_t y = roi.y; y < roi.y + roi.h; ++y) {
    for (std::size_t x = roi.x; x < roi.x + roi.w; ++x) {
      const auto i = y * w + x;
      if (is_outlier(rng)) {
        outlier[i] = true;
        for (auto& p : planes) p[i] = level(0.9);
      } else {
        for (auto& p : planes) p[i] = level(skin(rng));
      }
    }
  }
  return {bloodflow::FrameBuffer(w, h, std::move(planes[0]), std::move(planes[1]),
                                 std::move(planes[2])),
          roi, std::move(outlier)};
}

}  // namespace fixture
