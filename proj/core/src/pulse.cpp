#include "bloodflow/pulse.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "bloodflow/error.hpp"
#include "bloodflow/ippg.hpp"

namespace bloodflow {

namespace {

constexpr double kUniformStepTolerance = 1e-6;

std::size_t sample_count(double fps, double duration_s) {
  if (!(fps > 0.0) || !std::isfinite(fps)) throw Error(ErrorCode::InputError, "fps must be positive");
  if (!(duration_s > 0.0) || !std::isfinite(duration_s)) {
    throw Error(ErrorCode::InputError, "duration must be positive");
  }
  const auto n = static_cast<std::size_t>(std::llround(fps * duration_s));
  if (n < 2) throw Error(ErrorCode::InputError, "fps * duration yields fewer than 2 samples");
  return n;
}

}  // namespace

BeatTemplate::BeatTemplate(std::vector<Bump> bumps) : bumps_(std::move(bumps)) {
  if (bumps_.size() < 2) {
    throw Error(ErrorCode::InputError, "beat template needs systolic and diastolic bumps");
  }
  for (const auto& b : bumps_) {
    if (!(b.center >= 0.0 && b.center < 1.0) || !(b.width > 0.0) || !(b.amplitude > 0.0)) {
      throw Error(ErrorCode::InputError, "bump needs center in [0,1), width > 0, amplitude > 0");
    }
  }
  if (!(systolic().amplitude > diastolic().amplitude)) {
    throw Error(ErrorCode::InputError, "systolic amplitude must exceed diastolic amplitude");
  }
  if (!(systolic().center < diastolic().center)) {
    throw Error(ErrorCode::InputError, "systolic peak must precede diastolic peak");
  }
}

BeatTemplate BeatTemplate::standard() {
  return BeatTemplate({{0.18, 0.07, 1.0}, {0.46, 0.11, 0.42}});
}

double beat_value(std::span<const Bump> bumps, double u) {
  if (!(u >= 0.0 && u < 1.0)) {
    throw Error(ErrorCode::PhaseError, "phase " + std::to_string(u) + " outside [0,1)");
  }
  double v = 0.0;
  for (const auto& b : bumps) {
    const double d = u - b.center;
    v += b.amplitude * std::exp(-(d * d) / (2.0 * b.width * b.width));
  }
  return v;
}

PulseTrace synth_physio(double bpm, double fps, double duration_s, const BeatTemplate& beat) {
  check_bpm(bpm);
  const auto n = sample_count(fps, duration_s);
  const double step = bpm / (60.0 * fps);
  std::vector<double> samples(n);
  double phase = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    double u = phase - std::floor(phase);
    if (u >= 1.0) u = 0.0;
    samples[t] = beat_value(beat, u);
    phase += step;
  }
  return PulseTrace::normalized(std::move(samples), fps, bpm);
}

PulseTrace synth_sine(double bpm, double fps, double duration_s) {
  check_bpm(bpm);
  const auto n = sample_count(fps, duration_s);
  const double freq = bpm / 60.0;
  std::vector<double> samples(n);
  for (std::size_t t = 0; t < n; ++t) {
    samples[t] = 0.5 * std::sin(2.0 * std::numbers::pi * freq * static_cast<double>(t) / fps);
  }
  // Identity when the sampling grid hits the crests; otherwise restores the
  // zero-mean / unit peak-to-peak contract.
  return PulseTrace::normalized(std::move(samples), fps, bpm);
}

PulseTrace load_trace(std::span<const TraceRow> rows, std::optional<double> nominal_bpm) {
  if (rows.size() < 2) throw Error(ErrorCode::InputError, "trace needs at least 2 rows");
  const double dt = (rows.back().time_s - rows.front().time_s) / static_cast<double>(rows.size() - 1);
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorCode::SamplingError, "timestamps must be strictly increasing");
  }
  std::vector<double> values;
  values.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0) {
      const double step = rows[i].time_s - rows[i - 1].time_s;
      if (std::abs(step - dt) > kUniformStepTolerance) {
        throw Error(ErrorCode::SamplingError,
                    "non-uniform time step at row " + std::to_string(i));
      }
    }
    values.push_back(rows[i].value);
  }
  const double rate = 1.0 / dt;
  auto provisional = PulseTrace::normalized(std::move(values), rate, 1.0);
  const double bpm =
      nominal_bpm ? *nominal_bpm : estimate_bpm(provisional.samples(), rate).bpm;
  return PulseTrace(std::vector<double>(provisional.samples().begin(), provisional.samples().end()),
                    rate, bpm);
}

std::vector<TraceRow> trace_rows(const PulseTrace& trace) {
  std::vector<TraceRow> rows;
  rows.reserve(trace.size());
  for (std::size_t i = 0; i < trace.size(); ++i) {
    rows.push_back({static_cast<double>(i) / trace.sample_rate(), trace[i]});
  }
  return rows;
}

PulseTrace retune(const PulseTrace& trace, double target_bpm) {
  check_bpm(target_bpm);
  const auto src = trace.samples();
  const auto n = src.size();
  const double factor = target_bpm / trace.nominal_bpm();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double pos = std::fmod(static_cast<double>(i) * factor, static_cast<double>(n));
    const auto i0 = static_cast<std::size_t>(pos) % n;
    const auto i1 = (i0 + 1) % n;
    const double frac = pos - std::floor(pos);
    out[i] = frac == 0.0 ? src[i0] : src[i0] + frac * (src[i1] - src[i0]);
  }
  return PulseTrace::normalized(std::move(out), trace.sample_rate(), target_bpm);
}

}  // namespace bloodflow
