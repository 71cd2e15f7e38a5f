// Copyright 2026 The sonosynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "sonosynth/rf.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "sonosynth/errors.hpp"
#include "sonosynth/parallel.hpp"

namespace sonosynth {

namespace {

constexpr double kPulseTruncationSigmas = 5.0;
constexpr int kPulseOversampling = 64;

void require(bool ok, const char* what) {
  if (!ok) throw ConfigError(std::string("transducer config: ") + what);
}

}  // namespace

void TransducerConfig::validate() const {
  require(num_lines >= 1, "num_lines must be >= 1");
  require(axial_start_mm < axial_end_mm, "axial_start must be below axial_end");
  require(lateral_min_mm <= lateral_max_mm, "lateral_min must not exceed lateral_max");
  require(num_lines == 1 || lateral_min_mm < lateral_max_mm, "several lines need a non-empty lateral span");
  require(sound_speed_m_per_s > 0.0, "sound speed must be positive");
  require(center_frequency_hz > 0.0, "center frequency must be positive");
  require(sampling_frequency_hz > 2.0 * center_frequency_hz, "sampling frequency must exceed twice the center frequency");
  require(fractional_bandwidth > 0.0 && fractional_bandwidth < 2.0, "fractional bandwidth must be in (0, 2)");
  require(lateral_beam_sigma_mm > 0.0 && elevation_beam_sigma_mm > 0.0, "beam sigmas must be positive");
  require(beam_cutoff_sigmas > 0.0, "beam cutoff must be positive");
}

double TransducerConfig::line_lateral_mm(std::size_t line) const {
  if (num_lines == 1) return 0.5 * (lateral_min_mm + lateral_max_mm);
  return lateral_min_mm + static_cast<double>(line) * (lateral_max_mm - lateral_min_mm) / (num_lines - 1);
}

double TransducerConfig::sample_step_mm() const {
  return 1e3 * sound_speed_m_per_s / (2.0 * sampling_frequency_hz);
}

std::size_t TransducerConfig::window_samples() const {
  const double seconds = 2.0 * (axial_end_mm - axial_start_mm) * 1e-3 / sound_speed_m_per_s;
  return static_cast<std::size_t>(std::llround(seconds * sampling_frequency_hz));
}

Pulse pulse_waveform(const TransducerConfig& config) {
  config.validate();
  const double f0 = config.center_frequency_hz;
  const double fs = config.sampling_frequency_hz;
  const double sigma_f = config.fractional_bandwidth * f0 / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
  const double sigma_t = 1.0 / (2.0 * std::numbers::pi * sigma_f);
  const auto half = static_cast<std::size_t>(std::ceil(kPulseTruncationSigmas * sigma_t * fs));

  Pulse pulse;
  pulse.center = half;
  pulse.sampling_frequency_hz = fs;
  pulse.envelope_sigma_s = sigma_t;
  pulse.samples.resize(2 * half + 1);
  for (std::size_t i = 0; i < pulse.samples.size(); ++i) {
    const double t = (static_cast<double>(i) - static_cast<double>(half)) / fs;
    pulse.samples[i] = std::exp(-t * t / (2.0 * sigma_t * sigma_t)) * std::cos(2.0 * std::numbers::pi * f0 * t);
  }
  return pulse;
}

Image LineFrame::window_image() const {
  const std::size_t rows = std::min(window_samples, num_samples);
  Image out(rows, num_lines);
  for (std::size_t l = 0; l < num_lines; ++l) {
    const auto src = line(l);
    for (std::size_t r = 0; r < rows; ++r) out(r, l) = src[r];
  }
  return out;
}

RfFrame synthesize_rf(const ScattererField& field, const TransducerConfig& config, unsigned threads) {
  config.validate();
  if (field.positions.size() != field.amplitudes.size()) {
    throw ValidationError("scatterer field: positions and amplitudes differ in length");
  }

  const Pulse pulse = pulse_waveform(config);
  const double fs = config.sampling_frequency_hz;
  const double half = static_cast<double>(pulse.half_length());

  // Pulse on a fine grid covering [-half, half] samples, plus one guard entry.
  const auto table_len = static_cast<std::size_t>(2 * pulse.half_length() * kPulseOversampling + 2);
  std::vector<double> table(table_len);
  {
    const double f0 = config.center_frequency_hz;
    const double st = pulse.envelope_sigma_s;
    for (std::size_t j = 0; j < table_len; ++j) {
      const double t = (static_cast<double>(j) / kPulseOversampling - half) / fs;
      table[j] = std::exp(-t * t / (2.0 * st * st)) * std::cos(2.0 * std::numbers::pi * f0 * t);
    }
    table.back() = 0.0;
  }

  const std::size_t window = config.window_samples();
  const std::size_t num_samples = window + pulse.half_length();
  const auto num_lines = static_cast<std::size_t>(config.num_lines);

  RfFrame frame;
  static_cast<LineFrame&>(frame) = LineFrame(num_samples, num_lines);
  frame.config = config;
  frame.window_samples = window;
  frame.axial = {config.axial_start_mm, config.sample_step_mm()};
  frame.lateral = {config.line_lateral_mm(0), num_lines > 1 ? config.line_lateral_mm(1) - config.line_lateral_mm(0) : 0.0};
  if (field.empty()) return frame;

  // Scatterers sorted by lateral position so each line visits only its beam.
  const std::size_t n = field.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return field.positions[a].lateral_mm < field.positions[b].lateral_mm;
  });
  std::vector<double> lat(n), elev_weight(n), delay(n);
  const double step_mm = config.sample_step_mm();
  const double elev_cut = config.beam_cutoff_sigmas * config.elevation_beam_sigma_mm;
  const double inv_2se2 = 1.0 / (2.0 * config.elevation_beam_sigma_mm * config.elevation_beam_sigma_mm);
  for (std::size_t i = 0; i < n; ++i) {
    const Point3& p = field.positions[order[i]];
    lat[i] = p.lateral_mm;
    elev_weight[i] = std::abs(p.elevation_mm) > elev_cut
                         ? 0.0
                         : field.amplitudes[order[i]] * std::exp(-p.elevation_mm * p.elevation_mm * inv_2se2);
    delay[i] = (p.axial_mm - config.axial_start_mm) / step_mm;
  }

  const double lat_cut = config.beam_cutoff_sigmas * config.lateral_beam_sigma_mm;
  const double inv_2sl2 = 1.0 / (2.0 * config.lateral_beam_sigma_mm * config.lateral_beam_sigma_mm);
  const auto last_sample = static_cast<long long>(num_samples) - 1;

  parallel_for(num_lines, threads, [&](std::size_t l) {
    const double x_line = config.line_lateral_mm(l);
    const auto first = std::lower_bound(lat.begin(), lat.end(), x_line - lat_cut) - lat.begin();
    const auto last = std::upper_bound(lat.begin(), lat.end(), x_line + lat_cut) - lat.begin();

    std::vector<double> acc(num_samples, 0.0);
    for (auto i = static_cast<std::size_t>(first); i < static_cast<std::size_t>(last); ++i) {
      if (elev_weight[i] == 0.0) continue;
      const double dx = lat[i] - x_line;
      const double w = elev_weight[i] * std::exp(-dx * dx * inv_2sl2);
      const double tau = delay[i];
      const long long lo = std::max<long long>(0, static_cast<long long>(std::ceil(tau - half)));
      const long long hi = std::min<long long>(last_sample, static_cast<long long>(std::floor(tau + half)));
      for (long long s = lo; s <= hi; ++s) {
        const double pos = (static_cast<double>(s) - tau + half) * kPulseOversampling;
        const auto j = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(j);
        acc[static_cast<std::size_t>(s)] += w * (table[j] + (table[j + 1] - table[j]) * frac);
      }
    }
    auto out = frame.line(l);
    for (std::size_t s = 0; s < num_samples; ++s) out[s] = static_cast<float>(acc[s]);
  });
  return frame;
}

}  // namespace sonosynth
