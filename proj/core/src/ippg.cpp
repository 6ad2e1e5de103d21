#include "bloodflow/ippg.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>

#include "bloodflow/error.hpp"
#include "fft.hpp"

namespace bloodflow {

namespace {

constexpr double kFreqEps = 1e-9;

double bin_freq(std::size_t k, std::size_t n, double rate) {
  return static_cast<double>(k) * rate / static_cast<double>(n);
}

std::vector<double> mean_removed(std::span<const double> signal) {
  const double mean =
      std::accumulate(signal.begin(), signal.end(), 0.0) / static_cast<double>(signal.size());
  std::vector<double> out(signal.begin(), signal.end());
  for (double& v : out) v -= mean;
  return out;
}

void check_rate(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw Error(ErrorCode::SamplingError, "sample rate must be positive");
  }
}

}  // namespace

std::vector<double> extract_signal(const VideoSequence& video, const PerfusionMask& mask,
                                   const ColorWeights& weights) {
  std::vector<double> s;
  s.reserve(video.size());
  for (const auto& frame : video.frames()) {
    const Rgb m = weighted_spatial_mean(frame, mask);
    s.push_back(weights.r * m.r + weights.g * m.g + weights.b * m.b);
  }
  return s;
}

std::vector<double> detrend(std::span<const double> signal, double rate, double window_s) {
  check_rate(rate);
  if (!(window_s > 0.0)) throw Error(ErrorCode::InputError, "detrend window must be positive");
  if (signal.size() < 2) throw Error(ErrorCode::SignalLengthError, "detrend needs 2 samples");
  auto window = static_cast<std::size_t>(std::max<long long>(1, std::llround(window_s * rate)));
  if (window % 2 == 0) ++window;
  const std::size_t half = window / 2;
  const std::size_t n = signal.size();
  std::vector<double> out(n);
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t lo = t >= half ? t - half : 0;
    const std::size_t hi = std::min(n - 1, t + half);
    double acc = 0.0;
    for (std::size_t i = lo; i <= hi; ++i) acc += signal[i];
    out[t] = signal[t] - acc / static_cast<double>(hi - lo + 1);
  }
  return out;
}

std::vector<double> bandpass(std::span<const double> signal, double rate, double lo, double hi) {
  check_rate(rate);
  if (!(lo > 0.0 && lo < hi && hi < rate / 2.0)) {
    throw Error(ErrorCode::BandError, "band [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                          "] Hz invalid for rate " + std::to_string(rate) + " Hz");
  }
  if (signal.empty()) return {};
  const std::size_t n = signal.size();
  auto spectrum = detail::real_fft(signal, n);
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    const double f = bin_freq(k, n, rate);
    if (f < lo - kFreqEps || f > hi + kFreqEps) spectrum[k] = 0.0;
  }
  return detail::inverse_real_fft(spectrum, n);
}

BpmEstimate estimate_bpm(std::span<const double> signal, double rate) {
  check_rate(rate);
  if (static_cast<double>(signal.size()) < kMinAnalysisSeconds * rate - kFreqEps) {
    throw Error(ErrorCode::SignalLengthError,
                "need at least " + std::to_string(kMinAnalysisSeconds) + " s of signal");
  }
  const auto centered = mean_removed(signal);
  const auto padded = std::max(signal.size(),
                               static_cast<std::size_t>(std::ceil(rate / kMaxBinSpacingHz)));
  const auto spectrum = detail::real_fft(centered, padded);

  std::size_t best = 0;
  double best_mag = -1.0;
  for (std::size_t k = 1; k < spectrum.size(); ++k) {
    const double f = bin_freq(k, padded, rate);
    if (f < kBandLowHz - kFreqEps || f > kBandHighHz + kFreqEps) continue;
    const double mag = std::abs(spectrum[k]);
    if (mag > best_mag) {
      best_mag = mag;
      best = k;
    }
  }
  const double amplitude = 2.0 * best_mag / static_cast<double>(signal.size());
  if (best == 0 || !(amplitude > kNoPeakAmplitude)) {
    throw Error(ErrorCode::NoPeak, "no spectral peak in the analysis band");
  }

  double offset = 0.0;
  if (best + 1 < spectrum.size()) {
    const double a = std::abs(spectrum[best - 1]);
    const double b = best_mag;
    const double c = std::abs(spectrum[best + 1]);
    const double denom = a - 2.0 * b + c;
    if (denom != 0.0) offset = std::clamp(0.5 * (a - c) / denom, -0.5, 0.5);
  }
  const double peak =
      std::clamp((static_cast<double>(best) + offset) * rate / static_cast<double>(padded),
                 kBandLowHz, kBandHighHz);
  return {60.0 * peak, peak};
}

double snr_db(std::span<const double> signal, double rate, double f_peak) {
  check_rate(rate);
  if (!(f_peak >= kBandLowHz - kFreqEps && f_peak <= kBandHighHz + kFreqEps)) {
    throw Error(ErrorCode::BandError, "peak frequency outside the analysis band");
  }
  if (signal.size() < 2) throw Error(ErrorCode::SignalLengthError, "snr needs 2 samples");
  const auto spectrum = detail::real_fft(mean_removed(signal), signal.size());
  double sig = 0.0;
  double noise = 0.0;
  for (std::size_t k = 1; k < spectrum.size(); ++k) {
    const double f = bin_freq(k, signal.size(), rate);
    const double power = std::norm(spectrum[k]);
    const bool at_peak = std::abs(f - f_peak) <= kSnrHalfWidthHz + kFreqEps ||
                         std::abs(f - 2.0 * f_peak) <= kSnrHalfWidthHz + kFreqEps;
    if (at_peak) {
      sig += power;
    } else if (f >= kBandLowHz - kFreqEps && f <= kBandHighHz + kFreqEps) {
      noise += power;
    }
  }
  if (noise <= 0.0) return sig > 0.0 ? kSnrCapDb : -kSnrCapDb;
  if (sig <= 0.0) return -kSnrCapDb;
  return std::clamp(10.0 * std::log10(sig / noise), -kSnrCapDb, kSnrCapDb);
}

RecoveryReport verify(const VideoSequence& video, const PerfusionMask& mask,
                      const ColorWeights& weights) {
  if (video.duration_s() < kMinAnalysisSeconds - kFreqEps) {
    throw Error(ErrorCode::SignalLengthError, "video shorter than 4 s");
  }
  const double rate = video.fps();
  const auto raw = extract_signal(video, mask, weights);
  const auto flat = detrend(raw, rate, kDetrendWindowS);
  auto filtered = bandpass(flat, rate);
  const auto est = estimate_bpm(filtered, rate);
  const double snr = snr_db(filtered, rate, est.peak_freq_hz);
  return {est.bpm, snr, est.peak_freq_hz, std::move(filtered)};
}

}  // namespace bloodflow
