// Copyright 2026 The sonosynth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "sonosynth/grid.hpp"
#include "sonosynth/phantom.hpp"
#include "sonosynth/pipeline.hpp"
#include "sonosynth/rf.hpp"

namespace sonosynth {

namespace fs = std::filesystem;

inline constexpr int kSidecarFormatVersion = 1;

/// Contents of the structured-text sidecar stored next to every raw array.
struct ArrayHeader {
  std::string dtype;   // "float32" or "uint8"
  std::size_t rows = 0;  // for line_major: samples per line
  std::size_t cols = 0;  // for line_major: line count
  std::string layout = "row_major";  // or "line_major" (column-major by line)
  std::map<std::string, std::string> attributes;  // flat dotted keys

  friend bool operator==(const ArrayHeader&, const ArrayHeader&) = default;
};

/// "<dir>/<id>.envelope.f32" -> "<dir>/<id>.envelope.json"
fs::path sidecar_path(const fs::path& data_path);

/// Raw little-endian payload plus sidecar. Both are written to temporary
/// names and renamed into place. Throws IoError.
void write_f32(const fs::path& path, std::span<const float> values, const ArrayHeader& header);
void write_u8(const fs::path& path, std::span<const std::uint8_t> values, const ArrayHeader& header);

ArrayHeader read_header(const fs::path& data_path);
std::vector<float> read_f32(const fs::path& path, ArrayHeader* header = nullptr);
std::vector<std::uint8_t> read_u8(const fs::path& path, ArrayHeader* header = nullptr);

/// Writes text to path via a temporary file and rename.
void write_text_file(const fs::path& path, const std::string& text);
std::string read_text_file(const fs::path& path);

std::string format_double(double value);
double parse_double(const std::string& text);

// Typed wrappers.
void save_image(const fs::path& path, const Image& image, std::map<std::string, std::string> attributes = {});
Image load_image(const fs::path& path, ArrayHeader* header = nullptr);

void save_network_input(const fs::path& path, const NetworkInput& input);
NetworkInput load_network_input(const fs::path& path);

void save_line_frame(const fs::path& path, const LineFrame& frame, std::map<std::string, std::string> attributes = {});
LineFrame load_line_frame(const fs::path& path, ArrayHeader* header = nullptr);

void save_rf_frame(const fs::path& path, const RfFrame& frame);
RfFrame load_rf_frame(const fs::path& path);

void save_mask(const fs::path& path, const ClassMask& mask);
/// Throws ValidationError naming the file and first offending pixel when a
/// label falls outside {0, 1, 2}.
ClassMask load_mask(const fs::path& path);

/// Flat-key echo of a transducer configuration and its inverse.
std::map<std::string, std::string> transducer_attributes(const TransducerConfig& config);
TransducerConfig transducer_from_attributes(const std::map<std::string, std::string>& attributes);

// PNG export for inspection: 8-bit grayscale, linear mapping.
using Gray8 = Grid<std::uint8_t>;
/// [lo, hi] -> [0, 255], clamped. With lo == hi the range is taken from the data.
Gray8 to_gray8(const Image& image, double lo = 0.0, double hi = 1.0);
/// 0 -> black, hyperechoic -> white, anechoic -> mid grey.
Gray8 mask_to_gray8(const Grid<std::uint8_t>& labels);
void write_png(const fs::path& path, const Gray8& image);
Gray8 read_png(const fs::path& path);

}  // namespace sonosynth
