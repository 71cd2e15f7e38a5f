// Copyright 2026 The sonosynth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sonosynth/grid.hpp"
#include "sonosynth/phantom.hpp"

namespace sonosynth {

/// Virtual linear-array geometry and pulse parameters.
struct TransducerConfig {
  int num_lines = 50;
  double axial_start_mm = 30.0;
  double axial_end_mm = 90.0;
  double lateral_min_mm = -20.0;
  double lateral_max_mm = 20.0;
  double sound_speed_m_per_s = 1540.0;
  double center_frequency_hz = 3.5e6;
  double sampling_frequency_hz = 100e6;
  double fractional_bandwidth = 0.6;  // -6 dB, relative to the center frequency
  double lateral_beam_sigma_mm = 1.0;
  double elevation_beam_sigma_mm = 8.0;
  // Scatterers farther than this many beam sigmas from a line are skipped.
  double beam_cutoff_sigmas = 4.0;

  void validate() const;

  /// Lateral position of scan line `line`; lines span the lateral range end to end.
  double line_lateral_mm(std::size_t line) const;
  /// Depth increment between consecutive RF samples (two-way travel).
  double sample_step_mm() const;
  /// Samples covering [axial_start, axial_end): round(2 (end - start) / c * fs).
  std::size_t window_samples() const;

  friend bool operator==(const TransducerConfig&, const TransducerConfig&) = default;
};

/// Sampled pulse-echo waveform: Gaussian envelope times a cosine at f0.
struct Pulse {
  std::vector<double> samples;
  std::size_t center = 0;  // index of t = 0
  double sampling_frequency_hz = 0.0;
  double envelope_sigma_s = 0.0;

  std::size_t half_length() const { return center; }
};

/// -6 dB fractional bandwidth B maps to a spectral Gaussian with
/// sigma_f = B f0 / (2 sqrt(2 ln 2)); the time envelope sigma is 1 / (2 pi sigma_f).
/// Truncated at +-5 envelope sigmas.
Pulse pulse_waveform(const TransducerConfig& config);

/// Per-line sample stack shared by the RF, envelope and B-mode stages.
/// Storage is line-major: sample i of line l sits at l * num_samples + i.
struct LineFrame {
  std::size_t num_samples = 0;
  std::size_t num_lines = 0;
  std::vector<float> samples;
  AxisMap axial;    // depth of sample i
  AxisMap lateral;  // lateral position of line l
  std::size_t window_samples = 0;  // leading samples inside the imaging window

  LineFrame() = default;
  LineFrame(std::size_t samples_per_line, std::size_t lines)
      : num_samples(samples_per_line), num_lines(lines), samples(samples_per_line * lines, 0.0f) {}

  std::span<float> line(std::size_t l) { return {samples.data() + l * num_samples, num_samples}; }
  std::span<const float> line(std::size_t l) const { return {samples.data() + l * num_samples, num_samples}; }
  float at(std::size_t sample, std::size_t l) const { return samples[l * num_samples + sample]; }

  /// Row-major image (rows = depth, cols = lines) of the first window_samples rows.
  Image window_image() const;

  friend bool operator==(const LineFrame&, const LineFrame&) = default;
};

/// Beamformed RF. Sample 0 is at axial_start; the tail carries one pulse
/// half-length of padding so echoes from the far edge are complete.
struct RfFrame : LineFrame {
  TransducerConfig config;
};

/// Each line at x_L sums, over scatterers s,
///   a_s * w_lat(x_s - x_L) * w_elev(y_s) * p(t - 2 z_s / c)
/// with Gaussian beam weights. Pulse values at fractional delays come from a
/// 64x oversampled table with linear interpolation. Lines are independent and
/// are distributed over `threads` workers; each line accumulates sequentially.
RfFrame synthesize_rf(const ScattererField& field, const TransducerConfig& config, unsigned threads = 1);

}  // namespace sonosynth
