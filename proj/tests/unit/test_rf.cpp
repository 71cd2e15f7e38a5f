// Copyright 2026 The sonosynth Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"
#include "sonosynth/errors.hpp"
#include "sonosynth/rf.hpp"

using namespace sonosynth;

namespace {

ScattererField single(double lateral, double axial, double elevation = 0.0, double amp = 1.0) {
  ScattererField f;
  f.positions.push_back({lateral, elevation, axial});
  f.amplitudes.push_back(amp);
  return f;
}

std::size_t argmax_abs(std::span<const float> v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[best])) best = i;
  return best;
}

float peak_abs(std::span<const float> v) { return std::abs(v[argmax_abs(v)]); }

// Magnitude of the DTFT of the pulse at frequency f (Hz).
double dtft_mag(const Pulse& p, double f) {
  std::complex<double> acc = 0.0;
  for (std::size_t n = 0; n < p.samples.size(); ++n) {
    double t = (static_cast<double>(n) - static_cast<double>(p.center)) / p.sampling_frequency_hz;
    acc += p.samples[n] * std::polar(1.0, -2.0 * std::numbers::pi * f * t);
  }
  return std::abs(acc);
}

}  // namespace

TEST_CASE("window geometry") {
  TransducerConfig t;
  CHECK(t.window_samples() == 7792);
  CHECK(t.line_lateral_mm(0) == doctest::Approx(-20.0));
  CHECK(t.line_lateral_mm(49) == doctest::Approx(20.0));
  CHECK(t.sample_step_mm() == doctest::Approx(1540.0 / 2.0 / 100e6 * 1e3));
  t.num_lines = 0;
  CHECK_THROWS_AS(t.validate(), ConfigError);
  t = {};
  t.fractional_bandwidth = 0.0;
  CHECK_THROWS_AS(t.validate(), ConfigError);
}

TEST_CASE("pulse spectrum peaks at f0 with the configured -6 dB bandwidth") {
  TransducerConfig t;
  auto p = pulse_waveform(t);
  const double step = 5e3;
  double best_f = 0, best = 0;
  std::vector<std::pair<double, double>> spectrum;
  for (double f = 0.5e6; f <= 7e6; f += step) {
    double m = dtft_mag(p, f);
    spectrum.emplace_back(f, m);
    if (m > best) {
      best = m;
      best_f = f;
    }
  }
  CHECK(std::abs(best_f - 3.5e6) <= step);
  double lo = 0, hi = 0;
  for (auto [f, m] : spectrum) {
    if (m >= 0.5 * best) {
      if (lo == 0) lo = f;
      hi = f;
    }
  }
  double fb = (hi - lo) / 3.5e6;
  CHECK(fb >= 0.588);
  CHECK(fb <= 0.612);
}

TEST_CASE("pulse is truncated at five envelope sigmas") {
  TransducerConfig t;
  auto p = pulse_waveform(t);
  double sigma_f = 0.6 * 3.5e6 / (2.0 * std::sqrt(2.0 * std::log(2.0)));
  CHECK(p.envelope_sigma_s == doctest::Approx(1.0 / (2.0 * std::numbers::pi * sigma_f)));
  double half = 5.0 * p.envelope_sigma_s * 100e6;
  CHECK(std::abs(static_cast<double>(p.half_length()) - half) <= 1.0);
  CHECK(p.samples.size() == 2 * p.center + 1);
  CHECK(p.samples[p.center] == doctest::Approx(1.0));
}

TEST_CASE("time of flight puts the echo at 2z/c") {
  TransducerConfig t;
  auto rf = synthesize_rf(single(t.line_lateral_mm(25), 60.0), t);
  CHECK(rf.num_lines == 50);
  CHECK(rf.window_samples == 7792);
  CHECK(rf.num_samples > rf.window_samples);
  long expected = std::lround(2.0 * 0.030 / 1540.0 * 100e6);  // 3896
  long got = static_cast<long>(argmax_abs(rf.line(25)));
  CHECK(std::abs(got - expected) <= 2);
}

TEST_CASE("lateral and elevation beam weights are Gaussian") {
  TransducerConfig t;
  float on = peak_abs(synthesize_rf(single(t.line_lateral_mm(25), 60.0), t).line(25));
  float lat = peak_abs(synthesize_rf(single(t.line_lateral_mm(25) + 1.0, 60.0), t).line(25));
  float ele = peak_abs(synthesize_rf(single(t.line_lateral_mm(25), 60.0, 4.0), t).line(25));
  CHECK(lat / on == doctest::Approx(std::exp(-0.5)).epsilon(1e-3));
  CHECK(ele / on == doctest::Approx(std::exp(-0.5 * 0.25)).epsilon(1e-3));
  float far = peak_abs(synthesize_rf(single(t.line_lateral_mm(25) + 4.5, 60.0), t).line(25));
  CHECK(far == 0.0f);
}

TEST_CASE("synthesis is linear in the scatterer field") {
  TransducerConfig t;
  auto a = single(-3.0, 45.0, 0.5, 0.7);
  auto b = single(2.0, 71.2, -1.0, -1.3);
  auto ab = a;
  ab.append(b);
  auto ra = synthesize_rf(a, t);
  auto rb = synthesize_rf(b, t);
  auto rab = synthesize_rf(ab, t);
  double err = 0;
  for (std::size_t i = 0; i < rab.samples.size(); ++i)
    err = std::max(err, std::abs(double(rab.samples[i]) - ra.samples[i] - rb.samples[i]));
  CHECK(err < 1e-6);

  auto twice = a;
  twice.amplitudes[0] *= 2.0;
  auto r2 = synthesize_rf(twice, t);
  for (std::size_t i = 0; i < r2.samples.size(); i += 97) CHECK(r2.samples[i] == doctest::Approx(2.0 * ra.samples[i]));
}

TEST_CASE("deeper scatterer shifts the line by whole samples") {
  TransducerConfig t;
  double x = t.line_lateral_mm(10);
  auto r0 = synthesize_rf(single(x, 50.0), t);
  auto r1 = synthesize_rf(single(x, 50.0 + 10 * t.sample_step_mm()), t);
  auto l0 = r0.line(10);
  auto l1 = r1.line(10);
  double err = 0;
  for (std::size_t i = 0; i + 10 < l0.size(); ++i) err = std::max(err, double(std::abs(l1[i + 10] - l0[i])));
  CHECK(err < 1e-4);
}

TEST_CASE("thread count does not change the output") {
  TransducerConfig t;
  PhantomSpec spec;
  spec.extent.elevation_thickness_mm = 1.0;
  spec.seed = 2;
  auto field = place_scatterers(spec);
  CHECK(synthesize_rf(field, t, 1) == synthesize_rf(field, t, 3));
}

TEST_CASE("empty field gives a zero frame") {
  TransducerConfig t;
  auto rf = synthesize_rf(ScattererField{}, t);
  CHECK(std::all_of(rf.samples.begin(), rf.samples.end(), [](float v) { return v == 0.0f; }));
}
