#pragma once

#include <span>
#include <vector>

#include "bloodflow/model.hpp"

namespace bloodflow {

// Analysis constants for pulse recovery.
inline constexpr double kBandLowHz = 0.7;
inline constexpr double kBandHighHz = 4.0;
inline constexpr double kDetrendWindowS = 1.0;
inline constexpr double kMaxBinSpacingHz = 0.005;
inline constexpr double kSnrHalfWidthHz = 0.1;
inline constexpr double kSnrCapDb = 80.0;
inline constexpr double kMinAnalysisSeconds = 4.0;
/// In-band spectral amplitudes below this are treated as no signal.
inline constexpr double kNoPeakAmplitude = 1e-10;

struct BpmEstimate {
  double bpm;
  double peak_freq_hz;
};

struct RecoveryReport {
  double bpm_estimate;
  double snr_db;
  double peak_freq_hz;
  std::vector<double> signal;
};

/// s_t = sum over channels of w_c * mask-weighted mean of channel c.
std::vector<double> extract_signal(const VideoSequence& video, const PerfusionMask& mask,
                                   const ColorWeights& weights);

/// Subtracts a centered moving mean. The window is round(window_s * rate)
/// samples, widened by one when even so it stays centered; windows are
/// truncated at the boundaries.
std::vector<double> detrend(std::span<const double> signal, double rate, double window_s);

/// Ideal FFT bandpass: zeroes every bin outside [lo, hi].
std::vector<double> bandpass(std::span<const double> signal, double rate,
                             double lo = kBandLowHz, double hi = kBandHighHz);

/// Dominant in-band frequency of the mean-removed, zero-padded magnitude
/// spectrum with parabolic refinement.
BpmEstimate estimate_bpm(std::span<const double> signal, double rate);

/// Power within +-0.1 Hz of f_peak and 2 f_peak against the rest of the
/// analysis band, in dB, clamped to +-80 dB.
double snr_db(std::span<const double> signal, double rate, double f_peak);

/// extract -> detrend -> bandpass -> estimate_bpm -> snr.
RecoveryReport verify(const VideoSequence& video, const PerfusionMask& mask,
                      const ColorWeights& weights = ColorWeights::physio());

}  // namespace bloodflow
