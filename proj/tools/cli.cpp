#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include "bloodflow/compositor.hpp"
#include "bloodflow/error.hpp"
#include "bloodflow/io.hpp"
#include "bloodflow/ippg.hpp"
#include "bloodflow/mask.hpp"
#include "bloodflow/pulse.hpp"
#include "bloodflow/scanline.hpp"

namespace bloodflow::cli {

namespace fs = std::filesystem;

namespace {

/// Carries an exit code and a message up to `run`.
struct Failure {
  int code;
  std::string message;
};

[[noreturn]] void usage(const std::string& message) { throw Failure{kExitUsage, message}; }

/// Runs `fn`, turning library errors into a Failure with the given code and
/// message prefix.
template <typename Fn>
auto stage(int code, const std::string& prefix, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NoPeak) throw Failure{kExitNoSignal, prefix + ": no signal: " + e.what()};
    throw Failure{code, prefix + ": " + e.what()};
  } catch (const fs::filesystem_error& e) {
    throw Failure{code, prefix + ": " + e.what()};
  }
}

FaceRoi parse_roi(const std::string& text) {
  std::stringstream ss(text);
  std::vector<std::size_t> parts;
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(item, &used);
      if (used != item.size() || v < 0) throw std::invalid_argument(item);
      parts.push_back(static_cast<std::size_t>(v));
    } catch (const std::logic_error&) {
      usage("--roi: expected x,y,w,h with non-negative integers, got '" + text + "'");
    }
  }
  if (parts.size() != 4) usage("--roi: expected x,y,w,h, got '" + text + "'");
  return {parts[0], parts[1], parts[2], parts[3]};
}

/// fps from the manifest and/or the flag; they must agree when both exist.
double resolve_fps(const std::optional<io::Manifest>& manifest, const CLI::Option* flag,
                   double flag_value) {
  const bool given = flag->count() > 0;
  if (manifest && given && std::abs(manifest->fps - flag_value) > 1e-9 * manifest->fps) {
    usage("--fps " + std::to_string(flag_value) + " disagrees with manifest fps " +
          std::to_string(manifest->fps));
  }
  if (given) {
    if (!(flag_value > 0.0)) usage("--fps: must be positive");
    return flag_value;
  }
  if (manifest) return manifest->fps;
  usage("--fps is required when the frame directory has no manifest");
}

std::vector<FrameBuffer> load_frames(const fs::path& dir,
                                     const std::optional<io::Manifest>& manifest) {
  auto frames = stage(kExitUsage, "--frames", [&] { return io::read_frame_directory(dir); });
  if (manifest && manifest->frame_count != frames.size()) {
    usage("--frames: manifest lists " + std::to_string(manifest->frame_count) + " frames, found " +
          std::to_string(frames.size()));
  }
  return frames;
}

// pulse ---------------------------------------------------------------------

struct PulseArgs {
  double bpm = 60.0;
  double fps = 30.0;
  double duration = 10.0;
  std::string waveform = "physio";
  std::string out;
};

void add_pulse(CLI::App& app, PulseArgs& a) {
  auto* cmd = app.add_subcommand("pulse", "Synthesize a pulse trace CSV");
  cmd->add_option("--bpm", a.bpm, "Heart rate in beats per minute [30, 240]")->capture_default_str();
  cmd->add_option("--fps", a.fps, "Sample rate in Hz")->capture_default_str();
  cmd->add_option("--duration", a.duration, "Length in seconds")->capture_default_str();
  cmd->add_option("--waveform", a.waveform, "physio | sine")
      ->check(CLI::IsMember({"physio", "sine"}))
      ->capture_default_str();
  cmd->add_option("--out", a.out, "Output CSV path")->required();
}

int cmd_pulse(const PulseArgs& a, std::ostream& out) {
  stage(kExitUsage, "--bpm", [&] { check_bpm(a.bpm); });
  if (!(a.fps > 0.0)) usage("--fps: must be positive");
  if (!(a.duration > 0.0)) usage("--duration: must be positive");
  const auto trace = stage(kExitUsage, "pulse", [&] {
    return a.waveform == "sine" ? synth_sine(a.bpm, a.fps, a.duration)
                                : synth_physio(a.bpm, a.fps, a.duration);
  });
  stage(kExitProcessing, "write", [&] { io::write_trace(a.out, trace); });
  out << "wrote " << trace.size() << " samples to " << a.out << '\n';
  return kExitOk;
}

// mask ----------------------------------------------------------------------

struct MaskArgs {
  std::string input;
  std::string roi;
  std::string load;
  double smooth = 0.0;
  std::string out;
};

void add_mask(CLI::App& app, MaskArgs& a) {
  auto* cmd = app.add_subcommand("mask", "Segment skin or ingest a perfusion heat map");
  cmd->add_option("--input", a.input, "RGB image to segment (with --roi)");
  auto* roi = cmd->add_option("--roi", a.roi, "Face box x,y,w,h");
  auto* load = cmd->add_option("--load", a.load, "Grayscale heat map to ingest");
  roi->excludes(load);
  cmd->add_option("--smooth", a.smooth, "Box-blur radius in pixels")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--out", a.out, "Output grayscale PNG")->required();
}

int cmd_mask(const MaskArgs& a, std::ostream& out) {
  if (a.roi.empty() == a.load.empty()) usage("exactly one of --roi or --load is required");
  PerfusionMask mask = PerfusionMask::filled(1, 1, 0.0);
  if (!a.roi.empty()) {
    if (a.input.empty()) usage("--input is required with --roi");
    const auto roi = parse_roi(a.roi);
    const auto frame = stage(kExitUsage, "--input", [&] { return io::read_frame(a.input); });
    stage(kExitUsage, "--roi", [&] { roi.validate_for(frame); });
    mask = stage(kExitProcessing, "segment", [&] { return segment_skin(frame, roi); });
  } else {
    const auto heat = stage(kExitUsage, "--load", [&] { return io::read_mask(a.load); });
    mask = stage(kExitProcessing, "normalize", [&] { return normalize_mask(heat); });
  }
  mask = stage(kExitProcessing, "smooth", [&] { return smooth_mask(mask, a.smooth); });
  stage(kExitProcessing, "write", [&] { io::write_mask(a.out, mask); });
  out << "wrote " << mask.width() << "x" << mask.height() << " mask to " << a.out << '\n';
  return kExitOk;
}

// animate -------------------------------------------------------------------

struct AnimateArgs {
  std::string image;
  std::string frames;
  std::string mask;
  std::string mask_dir;
  std::string roi;
  std::string pulse;
  double bpm = 60.0;
  std::string waveform = "physio";
  double gamma = kStudyGamma;
  std::string weights = "physio";
  double fps = 30.0;
  double duration = 10.0;
  std::string out;
  CLI::Option* bpm_opt = nullptr;
  CLI::Option* fps_opt = nullptr;
  CLI::Option* waveform_opt = nullptr;
};

void add_animate(CLI::App& app, AnimateArgs& a) {
  auto* cmd = app.add_subcommand("animate", "Composite a pulse onto an image or frame directory");
  auto* image = cmd->add_option("--image", a.image, "Still RGB image (static avatar)");
  auto* frames = cmd->add_option("--frames", a.frames, "Directory of frame_NNNNNN.png");
  image->excludes(frames);
  auto* mask = cmd->add_option("--mask", a.mask, "Grayscale perfusion mask for all frames");
  auto* mask_dir = cmd->add_option("--mask-dir", a.mask_dir, "Directory with one mask per frame");
  auto* roi = cmd->add_option("--roi", a.roi, "Segment skin inside x,y,w,h instead of a mask file");
  mask->excludes(mask_dir)->excludes(roi);
  mask_dir->excludes(roi);
  auto* pulse = cmd->add_option("--pulse", a.pulse, "Pulse trace CSV (t,value)");
  a.bpm_opt = cmd->add_option("--bpm", a.bpm, "Synthesized heart rate, or retune target with --pulse")
                  ->capture_default_str();
  a.waveform_opt = cmd->add_option("--waveform", a.waveform, "physio | sine when synthesizing")
                       ->check(CLI::IsMember({"physio", "sine"}))
                       ->capture_default_str();
  a.waveform_opt->excludes(pulse);
  cmd->add_option("--gamma", a.gamma, "Pulse strength (0.15 study, 0.75 visualization)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--weights", a.weights, "physio | red")
      ->check(CLI::IsMember({"physio", "red"}))
      ->capture_default_str();
  a.fps_opt = cmd->add_option("--fps", a.fps, "Frame rate in Hz")->capture_default_str();
  cmd->add_option("--duration", a.duration, "Seconds of output for a still image")
      ->capture_default_str();
  cmd->add_option("--out", a.out, "Output frame directory")->required();
}

int cmd_animate(const AnimateArgs& a, std::ostream& out) {
  if (a.image.empty() == a.frames.empty()) usage("exactly one of --image or --frames is required");
  if (a.mask.empty() && a.mask_dir.empty() && a.roi.empty()) {
    usage("one of --mask, --mask-dir or --roi is required");
  }

  AnimationConfig config;
  config.gamma = a.gamma;
  config.weight_mode = a.weights == "red" ? WeightMode::RedBaseline : WeightMode::Physio;
  config.mask_mode = a.roi.empty() ? MaskMode::File : MaskMode::SkinSegmentation;

  std::optional<AnimationSource> source;
  std::size_t frame_count = 0;
  if (!a.image.empty()) {
    if (!(a.fps > 0.0)) usage("--fps: must be positive");
    if (!(a.duration > 0.0)) usage("--duration: must be positive");
    config.fps = a.fps;
    config.duration_s = a.duration;
    source.emplace(stage(kExitUsage, "--image", [&] { return io::read_frame(a.image); }));
    frame_count = static_cast<std::size_t>(std::llround(config.fps * config.duration_s));
    if (frame_count < 2) usage("--duration: fewer than 2 frames at this fps");
  } else {
    const auto manifest = stage(kExitUsage, "--frames", [&] { return io::read_manifest(a.frames); });
    config.fps = resolve_fps(manifest, a.fps_opt, a.fps);
    auto frames = load_frames(a.frames, manifest);
    frame_count = frames.size();
    config.duration_s = static_cast<double>(frame_count) / config.fps;
    source.emplace(VideoSequence(std::move(frames), config.fps));
  }
  const FrameBuffer& first = std::holds_alternative<FrameBuffer>(*source)
                                 ? std::get<FrameBuffer>(*source)
                                 : std::get<VideoSequence>(*source).frame(0);

  std::vector<PerfusionMask> masks;
  if (!a.mask.empty()) {
    masks.push_back(stage(kExitUsage, "--mask", [&] { return io::read_mask(a.mask); }));
  } else if (!a.mask_dir.empty()) {
    masks = stage(kExitUsage, "--mask-dir", [&] { return io::read_mask_directory(a.mask_dir); });
  } else {
    const auto roi = parse_roi(a.roi);
    stage(kExitUsage, "--roi", [&] { roi.validate_for(first); });
    stage(kExitProcessing, "segment", [&] {
      if (const auto* video = std::get_if<VideoSequence>(&*source)) {
        for (const auto& f : video->frames()) masks.push_back(segment_skin(f, roi));
      } else {
        masks.push_back(segment_skin(first, roi));
      }
    });
  }

  std::optional<PulseTrace> trace;
  if (!a.pulse.empty()) {
    trace.emplace(stage(kExitUsage, "--pulse", [&] { return load_trace(io::read_trace_rows(a.pulse)); }));
    config.waveform_mode = WaveformMode::File;
    if (a.bpm_opt->count() > 0) {
      trace.emplace(stage(kExitUsage, "--bpm", [&] { return retune(*trace, a.bpm); }));
    }
    config.bpm = trace->nominal_bpm();
  } else {
    stage(kExitUsage, "--bpm", [&] { check_bpm(a.bpm); });
    config.bpm = a.bpm;
    config.waveform_mode = a.waveform == "sine" ? WaveformMode::Sine : WaveformMode::Physio;
    const double seconds = static_cast<double>(frame_count) / config.fps;
    trace.emplace(stage(kExitUsage, "pulse", [&] {
      return config.waveform_mode == WaveformMode::Sine ? synth_sine(a.bpm, config.fps, seconds)
                                                        : synth_physio(a.bpm, config.fps, seconds);
    }));
  }

  const auto video =
      stage(kExitProcessing, "animate", [&] { return animate(*source, masks, *trace, config); });

  stage(kExitProcessing, "write", [&] {
    io::write_frame_directory(a.out, video.frames());
    io::write_manifest(a.out, {config.fps, video.width(), video.height(), video.size(), config.gamma,
                               config.bpm, io::to_string(config.waveform_mode),
                               io::to_string(config.weight_mode)});
  });
  out << "wrote " << video.size() << " frames to " << a.out << '\n';
  return kExitOk;
}

// verify --------------------------------------------------------------------

struct VerifyArgs {
  std::string frames;
  std::string mask;
  double fps = 30.0;
  std::string weights = "physio";
  std::string out;
  CLI::Option* fps_opt = nullptr;
};

void add_verify(CLI::App& app, VerifyArgs& a) {
  auto* cmd = app.add_subcommand("verify", "Recover the pulse rate from a frame directory");
  cmd->add_option("--frames", a.frames, "Directory of frame_NNNNNN.png")->required();
  cmd->add_option("--mask", a.mask, "Grayscale pooling mask (default: whole frame)");
  a.fps_opt = cmd->add_option("--fps", a.fps, "Frame rate; must match the manifest if present");
  cmd->add_option("--weights", a.weights, "Color projection: physio | red")
      ->check(CLI::IsMember({"physio", "red"}))
      ->capture_default_str();
  cmd->add_option("--out", a.out, "Report path (default: stdout)");
}

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  const auto manifest = stage(kExitUsage, "--frames", [&] { return io::read_manifest(a.frames); });
  const double fps = resolve_fps(manifest, a.fps_opt, a.fps);
  auto frames = load_frames(a.frames, manifest);
  const auto mask = a.mask.empty()
                        ? PerfusionMask::filled(frames.front().width(), frames.front().height(), 1.0)
                        : stage(kExitUsage, "--mask", [&] { return io::read_mask(a.mask); });
  const VideoSequence video(std::move(frames), fps);
  const auto weights = a.weights == "red" ? ColorWeights::red_baseline() : ColorWeights::physio();
  const auto report = stage(kExitProcessing, "verify", [&] { return verify(video, mask, weights); });
  if (a.out.empty()) {
    out << io::format_report(report);
  } else {
    stage(kExitProcessing, "write", [&] { io::write_report(a.out, report); });
    out << "wrote report to " << a.out << '\n';
  }
  return kExitOk;
}

// scanline ------------------------------------------------------------------

struct ScanlineArgs {
  std::string frames;
  std::size_t column = 0;
  double magnify = 1.0;
  std::string out;
  std::string trace_out;
  std::optional<std::size_t> row;
  double fps = 30.0;
  CLI::Option* fps_opt = nullptr;
};

void add_scanline(CLI::App& app, ScanlineArgs& a) {
  auto* cmd = app.add_subcommand("scanline", "Space-time slice of one pixel column");
  cmd->add_option("--frames", a.frames, "Directory of frame_NNNNNN.png")->required();
  cmd->add_option("--column", a.column, "Pixel column X")->required();
  cmd->add_option("--magnify", a.magnify, "Temporal deviation gain")->capture_default_str();
  cmd->add_option("--out", a.out, "Output PNG (width = frames, height = frame height)")->required();
  cmd->add_option("--trace-out", a.trace_out, "CSV of one pixel's t,r,g,b");
  cmd->add_option("--row", a.row, "Row of the --trace-out pixel (default: middle)");
  a.fps_opt = cmd->add_option("--fps", a.fps, "Frame rate; must match the manifest if present");
}

int cmd_scanline(const ScanlineArgs& a, std::ostream& out) {
  const auto manifest = stage(kExitUsage, "--frames", [&] { return io::read_manifest(a.frames); });
  const double fps = manifest || a.fps_opt->count() > 0 ? resolve_fps(manifest, a.fps_opt, a.fps)
                                                         : a.fps;
  auto frames = load_frames(a.frames, manifest);
  if (a.column >= frames.front().width()) {
    usage("--column " + std::to_string(a.column) + " outside width " +
          std::to_string(frames.front().width()));
  }
  const std::size_t row = a.row.value_or(frames.front().height() / 2);
  if (row >= frames.front().height()) usage("--row outside the frame");
  const VideoSequence video(std::move(frames), fps);
  const auto slice = stage(kExitProcessing, "scanline", [&] { return scanline(video, a.column, a.magnify); });
  stage(kExitProcessing, "write", [&] {
    io::write_frame(a.out, slice);
    if (!a.trace_out.empty()) {
      std::ofstream csv(a.trace_out);
      if (!csv) throw Error(ErrorCode::IoError, "cannot write " + a.trace_out);
      csv << "t,r,g,b\n";
      char buf[128];
      for (const auto& s : pixel_trace(video, a.column, row)) {
        std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g,%.9g\n", s.time_s, s.value.r, s.value.g,
                      s.value.b);
        csv << buf;
      }
    }
  });
  out << "wrote " << slice.width() << "x" << slice.height() << " scanline to " << a.out << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Animate subtle blood flow on faces and recover the injected pulse", "bloodflow"};
  app.require_subcommand(1);

  PulseArgs pulse;
  MaskArgs mask;
  AnimateArgs animate_args;
  VerifyArgs verify_args;
  ScanlineArgs scanline_args;
  add_pulse(app, pulse);
  add_mask(app, mask);
  add_animate(app, animate_args);
  add_verify(app, verify_args);
  add_scanline(app, scanline_args);

  std::vector<const char*> argv{"bloodflow"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (app.got_subcommand("pulse")) return cmd_pulse(pulse, out);
    if (app.got_subcommand("mask")) return cmd_mask(mask, out);
    if (app.got_subcommand("animate")) return cmd_animate(animate_args, out);
    if (app.got_subcommand("verify")) return cmd_verify(verify_args, out);
    if (app.got_subcommand("scanline")) return cmd_scanline(scanline_args, out);
  } catch (const Failure& f) {
    err << f.message << '\n';
    return f.code;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kExitProcessing;
  }
  return kExitUsage;
}

}  // namespace bloodflow::cli
