// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
// failure.

#include <chrono>
#include <cmath>
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "bloodflow/compositor.hpp"
#include "bloodflow/error.hpp"
#include "bloodflow/io.hpp"
#include "bloodflow/ippg.hpp"
#include "bloodflow/mask.hpp"
#include "bloodflow/pulse.hpp"
#include "cli.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/temp_dir.hpp"

using namespace bloodflow;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

// Criterion 2 and 3 share these videos.
constexpr double kArousalBpm[] = {60.0, 90.0, 120.0};

VideoSequence arousal_video(double bpm) {
  const auto face = fixture::synthetic_face(64, 64);
  const auto ones = PerfusionMask::filled(64, 64, 1.0);
  AnimationConfig cfg;
  cfg.gamma = 0.15;
  cfg.bpm = bpm;
  cfg.fps = 30;
  cfg.duration_s = 10;
  return animate(face, std::span(&ones, 1), synth_physio(bpm, 30, 10), cfg);
}

Outcome weight_normalization() {
  Check c;
  const auto w = normalize_weights(0.39, 0.70, 0.60);
  c.expect(std::abs(w.r - 0.2308) <= 5e-4, "w_r");
  c.expect(std::abs(w.g - 0.4142) <= 5e-4, "w_g");
  c.expect(std::abs(w.b - 0.3550) <= 5e-4, "w_b");
  c.expect(std::round(w.r * 100) / 100 == 0.23 && std::round(w.g * 100) / 100 == 0.41 &&
               std::round(w.b * 100) / 100 == 0.36,
           "two-decimal rounding");
  c.detail << "weights=(" << w.r << ", " << w.g << ", " << w.b << ")";
  return {c.ok, c.detail.str()};
}

Outcome bpm_round_trip() {
  Check c;
  const auto ones = PerfusionMask::filled(64, 64, 1.0);
  double last = 0.0;
  for (double bpm : kArousalBpm) {
    const auto start = std::chrono::steady_clock::now();
    const auto report = verify(arousal_video(bpm), ones);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.expect(std::abs(report.bpm_estimate - bpm) <= 2.0, "bpm " + std::to_string(bpm));
    c.expect(report.bpm_estimate > last, "strictly increasing");
    c.expect(secs <= 10.0, "runtime");
    last = report.bpm_estimate;
    c.detail << bpm << "->" << report.bpm_estimate << " (" << secs << " s) ";
  }
  return {c.ok, c.detail.str()};
}

Outcome channel_ratios() {
  Check c;
  for (double bpm : kArousalBpm) {
    const auto video = arousal_video(bpm);
    std::vector<double> means[3];
    for (const auto& f : video.frames()) {
      for (int ch = 0; ch < 3; ++ch) means[ch].push_back(oracle::mean(f.plane(static_cast<Channel>(ch))));
    }
    const double gr = oracle::stddev(means[1]) / oracle::stddev(means[0]);
    const double br = oracle::stddev(means[2]) / oracle::stddev(means[0]);
    c.expect(std::abs(gr / (0.41 / 0.23) - 1.0) <= 0.01, "G/R at " + std::to_string(bpm));
    c.expect(std::abs(br / (0.36 / 0.23) - 1.0) <= 0.01, "B/R at " + std::to_string(bpm));
    c.detail << bpm << ": G/R=" << gr << " B/R=" << br << " ";
  }
  return {c.ok, c.detail.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int run_cli(const std::vector<std::string>& args, std::string* err = nullptr) {
  std::ostringstream out, e;
  const int code = cli::run(args, out, e);
  if (err) *err = e.str();
  return code;
}

Outcome gamma_zero_identity() {
  Check c;
  TempDir dir;
  io::write_frame(dir / "face.png", fixture::synthetic_face());
  io::write_mask(dir / "ones.png", PerfusionMask::filled(64, 64, 1.0));
  std::string err;
  const int code = run_cli({"animate", "--image", (dir / "face.png").string(), "--mask",
                            (dir / "ones.png").string(), "--gamma", "0", "--out",
                            (dir / "out").string()},
                           &err);
  c.expect(code == 0, "animate exit code: " + err);
  const auto source_bytes = slurp(dir / "face.png");
  const auto source_pixels = io::read_png(dir / "face.png", 3).pixels;
  std::size_t frames = 0, mismatched = 0;
  for (; std::filesystem::exists(dir / "out" / io::frame_filename(frames)); ++frames) {
    const auto f = dir / "out" / io::frame_filename(frames);
    if (slurp(f) != source_bytes || io::read_png(f, 3).pixels != source_pixels) ++mismatched;
  }
  c.expect(frames == 300, "frame count");
  c.expect(mismatched == 0, "byte identity");
  c.detail << frames << " frames, " << mismatched << " differ";
  return {c.ok, c.detail.str()};
}

Outcome baseline_matching() {
  Check c;
  for (double bpm : kArousalBpm) {
    const auto s = synth_sine(bpm, 30, 10);
    const auto p = synth_physio(bpm, 30, 10);
    const double pps = oracle::peak_to_peak(s.samples());
    const double ppp = oracle::peak_to_peak(p.samples());
    c.expect(std::abs(pps - ppp) <= 1e-9, "peak-to-peak at " + std::to_string(bpm));
    const double fs = oracle::dominant_frequency(s.samples(), 30, 6000);
    const double fp = oracle::dominant_frequency(p.samples(), 30, 6000);
    c.expect(fs == fp, "dominant bin at " + std::to_string(bpm));
    c.detail << bpm << ": |dp2p|=" << std::abs(pps - ppp) << " f=" << fs << "/" << fp << " ";
  }
  return {c.ok, c.detail.str()};
}

Outcome skin_rule_fidelity() {
  Check c;
  const auto img = fixture::inlier_outlier_image();
  const auto mask = segment_skin(img.frame, img.roi);
  std::vector<std::vector<double>> channels(3);
  for (std::size_t y = img.roi.y; y < img.roi.y + img.roi.h; ++y) {
    for (std::size_t x = img.roi.x; x < img.roi.x + img.roi.w; ++x) {
      const auto p = img.frame.pixel(x, y);
      channels[0].push_back(p.r);
      channels[1].push_back(p.g);
      channels[2].push_back(p.b);
    }
  }
  const auto rule = oracle::skin_rule(channels);
  std::size_t mismatches = 0, inliers = 0, inliers_kept = 0, outliers = 0, outliers_kept = 0;
  for (std::size_t y = 0; y < img.frame.height(); ++y) {
    for (std::size_t x = 0; x < img.frame.width(); ++x) {
      const auto p = img.frame.pixel(x, y);
      const bool in_roi = img.roi.contains(x, y);
      const bool expected = in_roi && oracle::skin_pixel(rule, p.r, p.g, p.b);
      const bool got = mask.at(x, y) == 1.0;
      if (got != expected) ++mismatches;
      if (!in_roi) continue;
      if (img.outlier[y * img.frame.width() + x]) {
        ++outliers;
        outliers_kept += got;
      } else {
        ++inliers;
        inliers_kept += got;
      }
    }
  }
  const double inlier_rate = static_cast<double>(inliers_kept) / static_cast<double>(inliers);
  c.expect(mismatches == 0, "rule mismatches");
  c.expect(inlier_rate >= 0.99, "inlier selection");
  c.expect(outliers > 0 && outliers_kept == 0, "outlier rejection");
  c.detail << "mismatches=" << mismatches << " inliers=" << inlier_rate * 100 << "% outliers kept="
           << outliers_kept << "/" << outliers;
  return {c.ok, c.detail.str()};
}

Outcome scanline_periodicity() {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  TempDir dir;
  const auto face = fixture::synthetic_face();
  io::write_frame(dir / "face.png", face);
  const auto skin = segment_skin(face, {8, 4, 48, 56});
  io::write_mask(dir / "skin.png", skin);
  std::string err;
  c.expect(run_cli({"animate", "--image", (dir / "face.png").string(), "--mask", (dir / "skin.png").string(),
                    "--bpm", "60", "--gamma", "0.15", "--duration", "10", "--out", (dir / "anim").string()},
                   &err) == 0,
           "animate: " + err);
  c.expect(run_cli({"scanline", "--frames", (dir / "anim").string(), "--column", "32", "--magnify", "5",
                    "--out", (dir / "scan.png").string()},
                   &err) == 0,
           "scanline: " + err);
  const auto scan = io::read_png(dir / "scan.png", 3);
  // A row through the masked skin region at the scanline column.
  std::size_t row = 32;
  c.expect(skin.at(32, row) == 1.0, "row is masked skin");
  std::vector<double> green;
  for (std::size_t t = 0; t < scan.width; ++t) green.push_back(scan.pixels[(row * scan.width + t) * 3 + 1]);
  const auto lag = oracle::first_autocorrelation_peak(green);
  const double periods = lag > 0 ? static_cast<double>(scan.width) / static_cast<double>(lag) : 0.0;
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.expect(std::abs(periods - 10.0) <= 1.0, "period count");
  c.expect(secs <= 5.0, "runtime");
  c.detail << "lag=" << lag << " periods=" << periods << " (" << secs << " s)";
  return {c.ok, c.detail.str()};
}

Outcome pulse_morphology() {
  Check c;
  // 300 samples per beat.
  const auto trace = synth_physio(60, 300, 10);
  const auto s = trace.samples();
  std::size_t cycles_ok = 0;
  for (std::size_t beat = 0; beat < 10; ++beat) {
    const auto cycle = s.subspan(beat * 300, 300);
    std::vector<std::size_t> maxima, minima;
    for (std::size_t i = 1; i + 1 < cycle.size(); ++i) {
      if (cycle[i] > cycle[i - 1] && cycle[i] >= cycle[i + 1]) maxima.push_back(i);
      if (cycle[i] < cycle[i - 1] && cycle[i] <= cycle[i + 1]) minima.push_back(i);
    }
    const bool shape = maxima.size() == 2 && cycle[maxima[0]] > cycle[maxima[1]] &&
                       std::any_of(minima.begin(), minima.end(),
                                   [&](std::size_t m) { return m > maxima[0] && m < maxima[1]; });
    cycles_ok += shape;
    if (beat == 0) {
      c.detail << "maxima=" << maxima.size();
      if (maxima.size() == 2) {
        c.detail << " systolic=" << cycle[maxima[0]] << "@" << maxima[0] / 300.0
                 << " diastolic=" << cycle[maxima[1]] << "@" << maxima[1] / 300.0;
      }
    }
  }
  c.expect(cycles_ok == 10, "two maxima with a notch in every cycle");
  c.detail << " cycles_ok=" << cycles_ok << "/10";
  return {c.ok, c.detail.str()};
}

Outcome property_suites() {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> u01(0, 1), wide(-5, 5), mid(0.3, 0.7), pulse(-0.5, 0.5);

  // Clamping range.
  for (int i = 0; i < 10000; ++i) {
    const double v = clamp01(wide(rng));
    if (v < 0.0 || v > 1.0 || clamp01(v) != v) {
      c.expect(false, "clamp range");
      break;
    }
  }

  // Locality and gamma linearity below the clamp.
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t w = 16, h = 12, n = w * h;
    std::vector<double> p[3], m(n);
    for (auto& v : p) {
      v.resize(n);
      for (double& s : v) s = mid(rng);
    }
    for (double& s : m) s = u01(rng) < 0.3 ? 0.0 : u01(rng);
    m[0] = 1.0;
    const FrameBuffer in(w, h, p[0], p[1], p[2]);
    const PerfusionMask mask(w, h, m);
    const double g = 0.15 * u01(rng), pv = pulse(rng);
    const auto a = augment_frame(in, mask, pv, g, ColorWeights::physio());
    const auto b = augment_frame(in, mask, pv, 2 * g, ColorWeights::physio());
    for (Channel ch : kChannels) {
      for (std::size_t i = 0; i < n; ++i) {
        if (m[i] == 0.0 && a.plane(ch)[i] != in.plane(ch)[i]) c.expect(false, "locality");
        const double d1 = a.plane(ch)[i] - in.plane(ch)[i];
        const double d2 = b.plane(ch)[i] - in.plane(ch)[i];
        if (std::abs(d2 - 2 * d1) > 1e-15) c.expect(false, "gamma linearity");
      }
    }
  }

  // Determinism.
  {
    const auto v1 = arousal_video(90);
    const auto v2 = arousal_video(90);
    c.expect(v1.frames() == v2.frames(), "animate determinism");
    const auto ones = PerfusionMask::filled(64, 64, 1.0);
    const auto r1 = verify(v1, ones);
    const auto r2 = verify(v2, ones);
    c.expect(r1.bpm_estimate == r2.bpm_estimate && r1.snr_db == r2.snr_db && r1.signal == r2.signal,
             "verify determinism");
  }

  // Bandpass idempotence.
  for (std::size_t n : {150u, 300u, 451u}) {
    std::vector<double> x(n);
    for (double& v : x) v = wide(rng);
    const auto once = bandpass(x, 30);
    const auto twice = bandpass(once, 30);
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(once[i] - twice[i]) > 1e-9) {
        c.expect(false, "bandpass idempotence");
        break;
      }
    }
  }

  // BPM estimate invariant to gamma scaling.
  {
    const auto face = fixture::synthetic_face();
    const auto ones = PerfusionMask::filled(64, 64, 1.0);
    const auto trace = synth_physio(84, 30, 10);
    double lo = 1e9, hi = -1e9;
    for (double g : {0.05, 0.15, 0.3, 0.5}) {
      AnimationConfig cfg;
      cfg.gamma = g;
      const auto r = verify(animate(face, std::span(&ones, 1), trace, cfg), ones);
      lo = std::min(lo, r.bpm_estimate);
      hi = std::max(hi, r.bpm_estimate);
    }
    c.expect(hi - lo <= 0.5, "bpm invariance to gamma");
    c.detail << "bpm spread over gamma=" << hi - lo << " ";
  }

  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.expect(secs <= 60.0, "runtime");
  c.detail << "(" << secs << " s)";
  return {c.ok, c.detail.str()};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"1 weight normalization reproduces 0.23/0.41/0.36", weight_normalization},
      {"2 BPM round trip at 60/90/120", bpm_round_trip},
      {"3 channel amplitude ratios", channel_ratios},
      {"4 identity at gamma=0 (CLI)", gamma_zero_identity},
      {"5 sine/physio baseline matching", baseline_matching},
      {"6 skin-segmentation rule fidelity", skin_rule_fidelity},
      {"7 scanline periodicity", scanline_periodicity},
      {"8 pulse morphology", pulse_morphology},
      {"9 property suites", property_suites},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << "criterion " << name << " | " << o.detail << '\n';
  }
  std::cout << (failed == 0 ? "ALL CRITERIA PASS" : std::to_string(failed) + " CRITERIA FAILED") << '\n';
  return failed == 0 ? 0 : 1;
}
