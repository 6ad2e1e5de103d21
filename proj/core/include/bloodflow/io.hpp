#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bloodflow/ippg.hpp"
#include "bloodflow/model.hpp"
#include "bloodflow/pulse.hpp"

namespace bloodflow::io {

/// Interleaved 8-bit raster with 1 (gray) or 3 (RGB) channels.
struct Image8 {
  std::size_t width = 0;
  std::size_t height = 0;
  int channels = 3;
  std::vector<std::uint8_t> pixels;
};

/// Reads a PNG, converting palette/gray/alpha/16-bit inputs to `channels`
/// 8-bit channels (1 or 3).
Image8 read_png(const std::filesystem::path& path, int channels);
void write_png(const std::filesystem::path& path, const Image8& image);

/// v/255 on the way in, round(v*255) on the way out.
FrameBuffer to_frame(const Image8& image);
Image8 to_image(const FrameBuffer& frame);
PerfusionMask to_mask(const Image8& gray);
Image8 to_gray_image(const PerfusionMask& mask);

FrameBuffer read_frame(const std::filesystem::path& path);
void write_frame(const std::filesystem::path& path, const FrameBuffer& frame);
PerfusionMask read_mask(const std::filesystem::path& path);
void write_mask(const std::filesystem::path& path, const PerfusionMask& mask);

/// `frame_000000.png` style names.
std::string frame_filename(std::size_t index);

/// Frames named frame_NNNNNN.png with contiguous indices from 0.
std::vector<FrameBuffer> read_frame_directory(const std::filesystem::path& dir);
/// Writes every frame (creating `dir`) and returns the file count.
std::size_t write_frame_directory(const std::filesystem::path& dir,
                                  const std::vector<FrameBuffer>& frames);
std::vector<PerfusionMask> read_mask_directory(const std::filesystem::path& dir);

struct Manifest {
  double fps = 30.0;
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t frame_count = 0;
  double gamma = 0.0;
  double bpm = 0.0;
  std::string waveform_mode;
  std::string weight_mode;
};

inline constexpr const char* kManifestName = "manifest.json";

void write_manifest(const std::filesystem::path& dir, const Manifest& manifest);
/// nullopt when the directory has no manifest.
std::optional<Manifest> read_manifest(const std::filesystem::path& dir);

/// CSV with header `t,value`, 17 significant digits.
void write_trace(const std::filesystem::path& path, const PulseTrace& trace);
std::vector<TraceRow> read_trace_rows(const std::filesystem::path& path);

/// Lines `bpm=`, `snr_db=`, `peak_freq_hz=`.
std::string format_report(const RecoveryReport& report);
void write_report(const std::filesystem::path& path, const RecoveryReport& report);

std::string to_string(WaveformMode mode);
std::string to_string(WeightMode mode);

}  // namespace bloodflow::io
