#include "bloodflow/io.hpp"

#include <png.h>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <regex>
#include <sstream>

#include "bloodflow/error.hpp"
#include "bloodflow/mask.hpp"

namespace bloodflow::io {

namespace fs = std::filesystem;

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using File = std::unique_ptr<std::FILE, FileCloser>;

File open_file(const fs::path& path, const char* mode) {
  File f(std::fopen(path.c_str(), mode));
  if (!f) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return f;
}

[[noreturn]] void png_error_handler(png_structp png, png_const_charp msg) {
  auto* what = static_cast<std::string*>(png_get_error_ptr(png));
  *what = msg;
  png_longjmp(png, 1);
}

void png_warning_handler(png_structp, png_const_charp) {}

std::uint8_t quantize(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

}  // namespace

Image8 read_png(const fs::path& path, int channels) {
  if (channels != 1 && channels != 3) throw Error(ErrorCode::InputError, "channels must be 1 or 3");
  auto file = open_file(path, "rb");
  std::string error;
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, &error, png_error_handler, png_warning_handler);
  if (png == nullptr) throw Error(ErrorCode::IoError, "png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  Image8 image;
  std::vector<png_bytep> rows;

  // No C++ objects with non-trivial destructors may be created between here
  // and the end of the protected region.
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorCode::IoError, path.string() + ": " + error);
  }
  png_init_io(png, file.get());
  png_read_info(png, info);

  const auto color = png_get_color_type(png, info);
  if (png_get_bit_depth(png, info) == 16) png_set_strip_16(png);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
  }
  png_set_strip_alpha(png);
  const bool source_gray = (color & PNG_COLOR_MASK_COLOR) == 0;
  if (channels == 3 && source_gray) png_set_gray_to_rgb(png);
  if (channels == 1 && !source_gray) png_set_rgb_to_gray_fixed(png, 1, -1, -1);
  png_read_update_info(png, info);

  image.width = png_get_image_width(png, info);
  image.height = png_get_image_height(png, info);
  image.channels = channels;
  image.pixels.resize(image.width * image.height * static_cast<std::size_t>(channels));
  rows.resize(image.height);
  for (std::size_t y = 0; y < image.height; ++y) {
    rows[y] = image.pixels.data() + y * image.width * static_cast<std::size_t>(channels);
  }
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return image;
}

void write_png(const fs::path& path, const Image8& image) {
  if (image.channels != 1 && image.channels != 3) {
    throw Error(ErrorCode::InputError, "channels must be 1 or 3");
  }
  if (image.pixels.size() != image.width * image.height * static_cast<std::size_t>(image.channels)) {
    throw Error(ErrorCode::DimensionError, "image buffer size mismatch");
  }
  auto file = open_file(path, "wb");
  std::string error;
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, &error, png_error_handler, png_warning_handler);
  if (png == nullptr) throw Error(ErrorCode::IoError, "png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  std::vector<png_const_bytep> rows(image.height);
  for (std::size_t y = 0; y < image.height; ++y) {
    rows[y] = image.pixels.data() + y * image.width * static_cast<std::size_t>(image.channels);
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::IoError, path.string() + ": " + error);
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width),
               static_cast<png_uint_32>(image.height), 8,
               image.channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, const_cast<png_bytepp>(rows.data()));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

FrameBuffer to_frame(const Image8& image) {
  if (image.channels != 3) throw Error(ErrorCode::InputError, "expected an RGB image");
  const std::size_t n = image.width * image.height;
  std::vector<double> r(n), g(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = image.pixels[3 * i] / 255.0;
    g[i] = image.pixels[3 * i + 1] / 255.0;
    b[i] = image.pixels[3 * i + 2] / 255.0;
  }
  return FrameBuffer(image.width, image.height, std::move(r), std::move(g), std::move(b));
}

Image8 to_image(const FrameBuffer& frame) {
  Image8 image{frame.width(), frame.height(), 3, {}};
  image.pixels.resize(frame.pixel_count() * 3);
  const auto r = frame.plane(Channel::Red);
  const auto g = frame.plane(Channel::Green);
  const auto b = frame.plane(Channel::Blue);
  for (std::size_t i = 0; i < frame.pixel_count(); ++i) {
    image.pixels[3 * i] = quantize(r[i]);
    image.pixels[3 * i + 1] = quantize(g[i]);
    image.pixels[3 * i + 2] = quantize(b[i]);
  }
  return image;
}

PerfusionMask to_mask(const Image8& gray) {
  if (gray.channels != 1) throw Error(ErrorCode::InputError, "expected a grayscale image");
  return load_mask(gray.width, gray.height, gray.pixels);
}

Image8 to_gray_image(const PerfusionMask& mask) {
  Image8 image{mask.width(), mask.height(), 1, {}};
  image.pixels.reserve(mask.weights().size());
  for (double v : mask.weights()) image.pixels.push_back(quantize(v));
  return image;
}

FrameBuffer read_frame(const fs::path& path) { return to_frame(read_png(path, 3)); }
void write_frame(const fs::path& path, const FrameBuffer& frame) { write_png(path, to_image(frame)); }
PerfusionMask read_mask(const fs::path& path) { return to_mask(read_png(path, 1)); }
void write_mask(const fs::path& path, const PerfusionMask& mask) {
  write_png(path, to_gray_image(mask));
}

std::string frame_filename(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%06zu.png", index);
  return buf;
}

namespace {

std::vector<fs::path> indexed_frame_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error(ErrorCode::IoError, dir.string() + " is not a directory");
  static const std::regex pattern(R"(frame_(\d{6})\.png)");
  std::vector<std::pair<std::size_t, fs::path>> found;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::smatch m;
    const auto name = entry.path().filename().string();
    if (std::regex_match(name, m, pattern)) found.emplace_back(std::stoul(m[1].str()), entry.path());
  }
  std::sort(found.begin(), found.end());
  std::vector<fs::path> files;
  for (std::size_t i = 0; i < found.size(); ++i) {
    if (found[i].first != i) {
      throw Error(ErrorCode::InputError, "missing " + frame_filename(i) + " in " + dir.string());
    }
    files.push_back(found[i].second);
  }
  if (files.empty()) throw Error(ErrorCode::InputError, "no frame_NNNNNN.png files in " + dir.string());
  return files;
}

}  // namespace

std::vector<FrameBuffer> read_frame_directory(const fs::path& dir) {
  std::vector<FrameBuffer> frames;
  for (const auto& p : indexed_frame_files(dir)) {
    frames.push_back(read_frame(p));
    if (!frames.back().same_shape(frames.front())) {
      throw Error(ErrorCode::DimensionError, p.string() + " differs in size from frame 0");
    }
  }
  return frames;
}

std::size_t write_frame_directory(const fs::path& dir, const std::vector<FrameBuffer>& frames) {
  fs::create_directories(dir);
  for (std::size_t i = 0; i < frames.size(); ++i) write_frame(dir / frame_filename(i), frames[i]);
  return frames.size();
}

std::vector<PerfusionMask> read_mask_directory(const fs::path& dir) {
  std::vector<PerfusionMask> masks;
  for (const auto& p : indexed_frame_files(dir)) masks.push_back(read_mask(p));
  return masks;
}

void write_manifest(const fs::path& dir, const Manifest& m) {
  const nlohmann::ordered_json j = {
      {"fps", m.fps},           {"width", m.width},
      {"height", m.height},     {"frame_count", m.frame_count},
      {"gamma", m.gamma},       {"bpm", m.bpm},
      {"waveform_mode", m.waveform_mode}, {"weight_mode", m.weight_mode},
  };
  std::ofstream out(dir / kManifestName);
  if (!out) throw Error(ErrorCode::IoError, "cannot write manifest in " + dir.string());
  out << j.dump(2) << '\n';
}

std::optional<Manifest> read_manifest(const fs::path& dir) {
  const auto path = dir / kManifestName;
  if (!fs::exists(path)) return std::nullopt;
  std::ifstream in(path);
  try {
    const auto j = nlohmann::json::parse(in);
    Manifest m;
    m.fps = j.at("fps").get<double>();
    m.width = j.at("width").get<std::size_t>();
    m.height = j.at("height").get<std::size_t>();
    m.frame_count = j.at("frame_count").get<std::size_t>();
    m.gamma = j.value("gamma", 0.0);
    m.bpm = j.value("bpm", 0.0);
    m.waveform_mode = j.value("waveform_mode", "");
    m.weight_mode = j.value("weight_mode", "");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::IoError, path.string() + ": " + e.what());
  }
}

void write_trace(const fs::path& path, const PulseTrace& trace) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << "t,value\n";
  char buf[64];
  for (const auto& row : trace_rows(trace)) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", row.time_s, row.value);
    out << buf;
  }
}

std::vector<TraceRow> read_trace_rows(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("t,value", 0) != 0) {
    throw Error(ErrorCode::InputError, path.string() + ": missing `t,value` header");
  }
  std::vector<TraceRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto comma = line.find(',');
    try {
      if (comma == std::string::npos) throw std::invalid_argument("no comma");
      rows.push_back({std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::InputError,
                  path.string() + ":" + std::to_string(lineno) + ": malformed row");
    }
  }
  return rows;
}

std::string format_report(const RecoveryReport& report) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "bpm=%.6f\nsnr_db=%.6f\npeak_freq_hz=%.6f\n", report.bpm_estimate,
                report.snr_db, report.peak_freq_hz);
  return buf;
}

void write_report(const fs::path& path, const RecoveryReport& report) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << format_report(report);
}

std::string to_string(WaveformMode mode) {
  switch (mode) {
    case WaveformMode::Physio: return "physio";
    case WaveformMode::Sine: return "sine";
    case WaveformMode::File: return "file";
  }
  return "unknown";
}

std::string to_string(WeightMode mode) {
  return mode == WeightMode::Physio ? "physio" : "red";
}

}  // namespace bloodflow::io
