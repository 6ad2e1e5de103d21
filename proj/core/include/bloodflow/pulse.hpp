#pragma once

#include <optional>
#include <span>
#include <vector>

#include "bloodflow/model.hpp"

namespace bloodflow {

/// Gaussian bump on the normalized cardiac phase axis.
struct Bump {
  double center;     // phase in [0,1)
  double width;      // standard deviation in phase units
  double amplitude;  // > 0
};

/// One cardiac cycle built from Gaussian bumps. The first bump is the
/// systolic peak and the second the diastolic peak; further bumps are
/// allowed.
class BeatTemplate {
 public:
  explicit BeatTemplate(std::vector<Bump> bumps);

  /// Systolic (0.18, 0.07, 1.0) and diastolic (0.46, 0.11, 0.42).
  static BeatTemplate standard();

  std::span<const Bump> bumps() const noexcept { return bumps_; }
  const Bump& systolic() const noexcept { return bumps_[0]; }
  const Bump& diastolic() const noexcept { return bumps_[1]; }

 private:
  std::vector<Bump> bumps_;
};

/// Sum of Gaussian bumps at phase u in [0,1). No wrap-around.
double beat_value(std::span<const Bump> bumps, double u);
inline double beat_value(const BeatTemplate& beat, double u) {
  return beat_value(beat.bumps(), u);
}

PulseTrace synth_physio(double bpm, double fps, double duration_s,
                        const BeatTemplate& beat = BeatTemplate::standard());

PulseTrace synth_sine(double bpm, double fps, double duration_s);

struct TraceRow {
  double time_s;
  double value;
};

/// Builds a trace from uniformly spaced (time, value) rows. When
/// `nominal_bpm` is not given it is estimated from the spectrum.
PulseTrace load_trace(std::span<const TraceRow> rows,
                      std::optional<double> nominal_bpm = std::nullopt);

std::vector<TraceRow> trace_rows(const PulseTrace& trace);

/// Resamples the phase axis by target/nominal with linear interpolation,
/// treating the trace as periodic over its length. Length and sample rate
/// are unchanged.
PulseTrace retune(const PulseTrace& trace, double target_bpm);

}  // namespace bloodflow
