#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bloodflow {

enum class Channel { Red = 0, Green = 1, Blue = 2 };

struct Rgb {
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;

  double operator[](Channel c) const noexcept {
    switch (c) {
      case Channel::Red: return r;
      case Channel::Green: return g;
      case Channel::Blue: return b;
    }
    return 0.0;
  }
};

inline constexpr Channel kChannels[] = {Channel::Red, Channel::Green, Channel::Blue};

/// One RGB image with planar storage. Every sample is in [0,1].
class FrameBuffer {
 public:
  /// Takes ownership of three row-major planes of width*height samples each.
  /// Throws DimensionError on size mismatch and NumericError on samples
  /// outside [0,1] or non-finite.
  FrameBuffer(std::size_t width, std::size_t height, std::vector<double> red,
              std::vector<double> green, std::vector<double> blue);

  static FrameBuffer filled(std::size_t width, std::size_t height, Rgb value);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t pixel_count() const noexcept { return width_ * height_; }

  std::span<const double> plane(Channel c) const noexcept {
    return planes_[static_cast<int>(c)];
  }
  double at(Channel c, std::size_t x, std::size_t y) const noexcept {
    return planes_[static_cast<int>(c)][y * width_ + x];
  }
  Rgb pixel(std::size_t x, std::size_t y) const noexcept {
    const auto i = y * width_ + x;
    return {planes_[0][i], planes_[1][i], planes_[2][i]};
  }

  bool same_shape(const FrameBuffer& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const FrameBuffer&, const FrameBuffer&) = default;

 private:
  std::size_t width_;
  std::size_t height_;
  std::vector<double> planes_[3];
};

/// Ordered frames sharing one size, played back at `fps`.
class VideoSequence {
 public:
  VideoSequence(std::vector<FrameBuffer> frames, double fps);

  const std::vector<FrameBuffer>& frames() const noexcept { return frames_; }
  const FrameBuffer& frame(std::size_t t) const { return frames_.at(t); }
  std::size_t size() const noexcept { return frames_.size(); }
  double fps() const noexcept { return fps_; }
  double duration_s() const noexcept { return static_cast<double>(frames_.size()) / fps_; }
  std::size_t width() const noexcept { return frames_.front().width(); }
  std::size_t height() const noexcept { return frames_.front().height(); }

 private:
  std::vector<FrameBuffer> frames_;
  double fps_;
};

/// Per-pixel perfusion weight in [0,1]. Dimension agreement with a frame is
/// checked where the mask is applied.
class PerfusionMask {
 public:
  PerfusionMask(std::size_t width, std::size_t height, std::vector<double> weights);

  static PerfusionMask filled(std::size_t width, std::size_t height, double value);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::span<const double> weights() const noexcept { return weights_; }
  double at(std::size_t x, std::size_t y) const noexcept { return weights_[y * width_ + x]; }
  double sum() const noexcept;
  double max() const noexcept;

  bool matches(const FrameBuffer& frame) const noexcept {
    return width_ == frame.width() && height_ == frame.height();
  }

  friend bool operator==(const PerfusionMask&, const PerfusionMask&) = default;

 private:
  std::size_t width_;
  std::size_t height_;
  std::vector<double> weights_;
};

/// Uniformly sampled pulse waveform with zero mean and unit peak-to-peak.
class PulseTrace {
 public:
  /// Validates the invariants (|mean| <= 1e-9, peak-to-peak = 1 +- 1e-9).
  PulseTrace(std::vector<double> samples, double sample_rate, double nominal_bpm);

  /// Shifts to zero mean and rescales to unit peak-to-peak before
  /// constructing. A flat input cannot be normalized and throws InputError.
  static PulseTrace normalized(std::vector<double> samples, double sample_rate,
                               double nominal_bpm);

  std::span<const double> samples() const noexcept { return samples_; }
  double operator[](std::size_t t) const { return samples_.at(t); }
  std::size_t size() const noexcept { return samples_.size(); }
  double sample_rate() const noexcept { return sample_rate_; }
  double nominal_bpm() const noexcept { return nominal_bpm_; }
  double duration_s() const noexcept {
    return static_cast<double>(samples_.size()) / sample_rate_;
  }

 private:
  std::vector<double> samples_;
  double sample_rate_;
  double nominal_bpm_;
};

/// Per-channel strength of the injected pulse.
struct ColorWeights {
  double r;
  double g;
  double b;

  /// Hemoglobin-absorption weights, rounded to two decimals
  /// (0.39/0.70/0.60 normalized and rounded to two decimals).
  static constexpr ColorWeights physio() noexcept { return {0.23, 0.41, 0.36}; }
  /// Baseline that modulates the red channel only.
  static constexpr ColorWeights red_baseline() noexcept { return {1.0, 0.0, 0.0}; }

  double operator[](Channel c) const noexcept {
    switch (c) {
      case Channel::Red: return r;
      case Channel::Green: return g;
      case Channel::Blue: return b;
    }
    return 0.0;
  }
  double sum() const noexcept { return r + g + b; }
};

enum class WaveformMode { Physio, Sine, File };
enum class WeightMode { Physio, RedBaseline };
enum class MaskMode { File, SkinSegmentation };

inline constexpr double kMinBpm = 30.0;
inline constexpr double kMaxBpm = 240.0;
inline constexpr double kStudyGamma = 0.15;
inline constexpr double kVisualizationGamma = 0.75;

struct AnimationConfig {
  double gamma = kStudyGamma;
  double bpm = 60.0;
  double duration_s = 10.0;
  WaveformMode waveform_mode = WaveformMode::Physio;
  WeightMode weight_mode = WeightMode::Physio;
  MaskMode mask_mode = MaskMode::File;
  double fps = 30.0;

  /// Throws InputError / BpmRangeError when a field is out of its domain.
  void validate() const;
  ColorWeights weights() const noexcept {
    return weight_mode == WeightMode::Physio ? ColorWeights::physio()
                                             : ColorWeights::red_baseline();
  }
};

/// Scales a non-negative triple to sum to one. All-zero input throws
/// InvalidWeights.
ColorWeights normalize_weights(double r, double g, double b);

/// Clamps to [0,1]; non-finite input throws NumericError.
double clamp01(double v);

/// Per-channel mask-weighted mean of a frame.
Rgb weighted_spatial_mean(const FrameBuffer& frame, const PerfusionMask& mask);

void check_bpm(double bpm);

}  // namespace bloodflow
