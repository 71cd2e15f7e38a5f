// Copyright 2026 The sonosynth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sonosynth/grid.hpp"
#include "sonosynth/rf.hpp"

namespace sonosynth {

enum class Modality { envelope, bmode };

const char* to_string(Modality m);
Modality modality_from_string(const std::string& name);

/// Magnitude of the analytic signal, per line. Non-negative.
struct EnvelopeImage : LineFrame {};

/// Log-compressed envelope in [0, 1].
struct BmodeImage : LineFrame {
  double dynamic_range_db = 50.0;
};

inline constexpr std::size_t kResizedSize = 512;
inline constexpr std::size_t kMirrorPad = 30;
inline constexpr std::size_t kNetworkInputSize = kResizedSize + 2 * kMirrorPad;  // 572
inline constexpr std::size_t kMaskSize = 388;

struct NetworkInput {
  Image samples;  // 572 x 572, values in [0, 1]
  Modality provenance = Modality::envelope;
  std::string source_id;
};

struct PipelineConfig {
  double dynamic_range_db = 50.0;

  void validate() const;
};

/// Analytic-signal magnitude of one line: FFT, zero the negative
/// frequencies, double the positive ones, inverse FFT, take |.|.
/// Throws ValidationError for lines shorter than 2 samples.
std::vector<double> analytic_magnitude(std::span<const double> line);

EnvelopeImage detect_envelope(const LineFrame& rf);

/// B = clamp(20 log10(env / max), -DR, 0) / DR + 1. An all-zero envelope
/// maps to all zeros.
BmodeImage log_compress(const EnvelopeImage& env, double dynamic_range_db);
/// Same mapping applied to a row-major image.
Image log_compress(const Image& env, double dynamic_range_db);

/// Bilinear resampling with the corner samples of source and destination
/// aligned, so linear ramps are reproduced exactly. Throws ValidationError
/// when either source dimension is below 2.
Image resize_bilinear(const Image& src, std::size_t rows, std::size_t cols);
Image resize_to_512(const Image& src);

/// Nearest-neighbour resampling for label rasters, same corner alignment.
Grid<std::uint8_t> resize_nearest(const Grid<std::uint8_t>& src, std::size_t rows, std::size_t cols);

/// Reflection padding about the border pixel: padded index -d reads source
/// index d. Requires pad < each source dimension.
Image mirror_pad(const Image& src, std::size_t pad);

/// 512 x 512 -> 572 x 572. Throws ValidationError on any other input shape.
Image mirror_pad_to_network(const Image& src);

/// (x - min) / (max - min); a constant image maps to all zeros.
Image normalize_unit(const Image& src);

/// resize -> normalize -> mirror, in that order.
NetworkInput prepare_network_input(const Image& image, Modality provenance, std::string source_id);

struct ImageChainOutput {
  EnvelopeImage envelope;
  BmodeImage bmode;
  NetworkInput envelope_input;
  NetworkInput bmode_input;
};

/// RF -> envelope -> B-mode -> both network inputs.
ImageChainOutput run_image_chain(const RfFrame& rf, const PipelineConfig& config, const std::string& source_id);

}  // namespace sonosynth
