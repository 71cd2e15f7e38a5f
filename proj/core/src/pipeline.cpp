// Copyright 2026 The sonosynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "sonosynth/pipeline.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <mutex>
#include <string>

#include "sonosynth/errors.hpp"

namespace sonosynth {

namespace {

// FFTW planning is not thread-safe; execution on distinct buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <typename T>
FftwBuffer<T> fftw_buffer(std::size_t n) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * n));
  if (!p) throw std::bad_alloc();
  return FftwBuffer<T>(p);
}

struct PlanDeleter {
  void operator()(fftw_plan p) const {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(p);
  }
};
using Plan = std::unique_ptr<std::remove_pointer_t<fftw_plan>, PlanDeleter>;

/// Forward r2c and inverse c2c plans for one line length, with their buffers.
class AnalyticSignal {
 public:
  explicit AnalyticSignal(std::size_t n)
      : n_(n), real_(fftw_buffer<double>(n)), spectrum_(fftw_buffer<fftw_complex>(n)), analytic_(fftw_buffer<fftw_complex>(n)) {
    std::lock_guard lock(planner_mutex());
    const int len = static_cast<int>(n);
    forward_.reset(fftw_plan_dft_r2c_1d(len, real_.get(), spectrum_.get(), FFTW_ESTIMATE));
    inverse_.reset(fftw_plan_dft_1d(len, spectrum_.get(), analytic_.get(), FFTW_BACKWARD, FFTW_ESTIMATE));
  }

  template <typename In, typename Out>
  void magnitude(std::span<const In> line, std::span<Out> out) {
    for (std::size_t i = 0; i < n_; ++i) real_[i] = static_cast<double>(line[i]);
    fftw_execute(forward_.get());
    // r2c fills bins [0, n/2]. Keep DC (and Nyquist for even n), double the
    // positive frequencies, zero the rest.
    const std::size_t positive_end = (n_ + 1) / 2;  // exclusive
    for (std::size_t k = 1; k < positive_end; ++k) {
      spectrum_[k][0] *= 2.0;
      spectrum_[k][1] *= 2.0;
    }
    const std::size_t zero_from = n_ / 2 + 1;
    for (std::size_t k = zero_from; k < n_; ++k) {
      spectrum_[k][0] = 0.0;
      spectrum_[k][1] = 0.0;
    }
    fftw_execute(inverse_.get());
    const double scale = 1.0 / static_cast<double>(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      out[i] = static_cast<Out>(std::hypot(analytic_[i][0], analytic_[i][1]) * scale);
    }
  }

 private:
  std::size_t n_;
  FftwBuffer<double> real_;
  FftwBuffer<fftw_complex> spectrum_;
  FftwBuffer<fftw_complex> analytic_;
  Plan forward_;
  Plan inverse_;
};

float max_value(std::span<const float> v) {
  float m = 0.0f;
  for (float x : v) m = std::max(m, x);
  return m;
}

}  // namespace

const char* to_string(Modality m) { return m == Modality::envelope ? "envelope" : "bmode"; }

Modality modality_from_string(const std::string& name) {
  if (name == "envelope") return Modality::envelope;
  if (name == "bmode" || name == "b-mode") return Modality::bmode;
  throw ConfigError("unknown modality '" + name + "' (expected envelope or bmode)");
}

void PipelineConfig::validate() const {
  if (!(dynamic_range_db > 0.0) || !std::isfinite(dynamic_range_db)) {
    throw ConfigError("pipeline config: dynamic_range_db must be positive");
  }
}

std::vector<double> analytic_magnitude(std::span<const double> line) {
  if (line.size() < 2) throw ValidationError("envelope detection needs at least 2 samples per line");
  std::vector<double> out(line.size());
  AnalyticSignal(line.size()).magnitude(line, std::span<double>(out));
  return out;
}

EnvelopeImage detect_envelope(const LineFrame& rf) {
  if (rf.num_samples < 2) throw ValidationError("envelope detection needs at least 2 samples per line");
  EnvelopeImage env;
  static_cast<LineFrame&>(env) = rf;
  AnalyticSignal transform(rf.num_samples);
  for (std::size_t l = 0; l < rf.num_lines; ++l) {
    transform.magnitude(rf.line(l), env.line(l));
  }
  return env;
}

namespace {

void compress_in_place(std::span<float> values, double dynamic_range_db) {
  if (!(dynamic_range_db > 0.0)) throw ConfigError("dynamic range must be positive");
  const float peak = max_value(values);
  if (!(peak > 0.0f)) {
    std::fill(values.begin(), values.end(), 0.0f);
    return;
  }
  const double inv_peak = 1.0 / peak;
  for (float& v : values) {
    const double ratio = static_cast<double>(v) * inv_peak;
    const double db = ratio > 0.0 ? 20.0 * std::log10(ratio) : -std::numeric_limits<double>::infinity();
    v = static_cast<float>(std::clamp(db, -dynamic_range_db, 0.0) / dynamic_range_db + 1.0);
  }
}

}  // namespace

BmodeImage log_compress(const EnvelopeImage& env, double dynamic_range_db) {
  BmodeImage out;
  static_cast<LineFrame&>(out) = env;
  out.dynamic_range_db = dynamic_range_db;
  compress_in_place(out.samples, dynamic_range_db);
  return out;
}

Image log_compress(const Image& env, double dynamic_range_db) {
  Image out = env;
  compress_in_place(out.storage(), dynamic_range_db);
  return out;
}

Image resize_bilinear(const Image& src, std::size_t rows, std::size_t cols) {
  if (src.rows() < 2 || src.cols() < 2) {
    throw ValidationError("resize: source must be at least 2x2, got " + std::to_string(src.rows()) + "x" +
                          std::to_string(src.cols()));
  }
  if (rows == 0 || cols == 0) throw ValidationError("resize: target dimensions must be positive");
  if (rows == src.rows() && cols == src.cols()) return src;

  const double ry = rows > 1 ? static_cast<double>(src.rows() - 1) / static_cast<double>(rows - 1) : 0.0;
  const double rx = cols > 1 ? static_cast<double>(src.cols() - 1) / static_cast<double>(cols - 1) : 0.0;

  std::vector<std::size_t> x0(cols);
  std::vector<double> fx(cols);
  for (std::size_t c = 0; c < cols; ++c) {
    const double x = static_cast<double>(c) * rx;
    x0[c] = std::min(static_cast<std::size_t>(x), src.cols() - 2);
    fx[c] = x - static_cast<double>(x0[c]);
  }

  Image out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const double y = static_cast<double>(r) * ry;
    const std::size_t y0 = std::min(static_cast<std::size_t>(y), src.rows() - 2);
    const double fy = y - static_cast<double>(y0);
    const auto top = src.row(y0);
    const auto bottom = src.row(y0 + 1);
    for (std::size_t c = 0; c < cols; ++c) {
      const double a = top[x0[c]] + (top[x0[c] + 1] - top[x0[c]]) * fx[c];
      const double b = bottom[x0[c]] + (bottom[x0[c] + 1] - bottom[x0[c]]) * fx[c];
      out(r, c) = static_cast<float>(a + (b - a) * fy);
    }
  }
  return out;
}

Image resize_to_512(const Image& src) { return resize_bilinear(src, kResizedSize, kResizedSize); }

Grid<std::uint8_t> resize_nearest(const Grid<std::uint8_t>& src, std::size_t rows, std::size_t cols) {
  if (src.empty()) throw ValidationError("resize: empty label raster");
  if (rows == 0 || cols == 0) throw ValidationError("resize: target dimensions must be positive");
  if (rows == src.rows() && cols == src.cols()) return src;
  auto nearest = [](std::size_t i, std::size_t n_dst, std::size_t n_src) -> std::size_t {
    if (n_dst == 1 || n_src == 1) return 0;
    const double pos = static_cast<double>(i) * static_cast<double>(n_src - 1) / static_cast<double>(n_dst - 1);
    return std::min(static_cast<std::size_t>(std::floor(pos + 0.5)), n_src - 1);
  };
  Grid<std::uint8_t> out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t sr = nearest(r, rows, src.rows());
    for (std::size_t c = 0; c < cols; ++c) out(r, c) = src(sr, nearest(c, cols, src.cols()));
  }
  return out;
}

Image mirror_pad(const Image& src, std::size_t pad) {
  if (pad >= src.rows() || pad >= src.cols()) {
    throw ValidationError("mirror_pad: pad of " + std::to_string(pad) + " needs a source larger than " + std::to_string(pad) +
                          " in both dimensions");
  }
  const auto rows = static_cast<long long>(src.rows());
  const auto cols = static_cast<long long>(src.cols());
  const auto p = static_cast<long long>(pad);
  auto reflect = [](long long i, long long n) {
    if (i < 0) return -i;
    if (i >= n) return 2 * (n - 1) - i;
    return i;
  };
  Image out(src.rows() + 2 * pad, src.cols() + 2 * pad);
  for (long long r = -p; r < rows + p; ++r) {
    const auto sr = static_cast<std::size_t>(reflect(r, rows));
    for (long long c = -p; c < cols + p; ++c) {
      out(static_cast<std::size_t>(r + p), static_cast<std::size_t>(c + p)) = src(sr, static_cast<std::size_t>(reflect(c, cols)));
    }
  }
  return out;
}

Image mirror_pad_to_network(const Image& src) {
  if (src.rows() != kResizedSize || src.cols() != kResizedSize) {
    throw ValidationError("mirror_pad: expected a 512x512 image, got " + std::to_string(src.rows()) + "x" +
                          std::to_string(src.cols()));
  }
  return mirror_pad(src, kMirrorPad);
}

Image normalize_unit(const Image& src) {
  Image out = src;
  if (src.empty()) return out;
  const auto [lo_it, hi_it] = std::minmax_element(src.values().begin(), src.values().end());
  const double lo = *lo_it;
  const double range = static_cast<double>(*hi_it) - lo;
  if (!(range > 0.0)) {
    std::fill(out.storage().begin(), out.storage().end(), 0.0f);
    return out;
  }
  for (float& v : out.storage()) {
    v = static_cast<float>(std::clamp((static_cast<double>(v) - lo) / range, 0.0, 1.0));
  }
  return out;
}

NetworkInput prepare_network_input(const Image& image, Modality provenance, std::string source_id) {
  NetworkInput input;
  input.samples = mirror_pad_to_network(normalize_unit(resize_to_512(image)));
  input.provenance = provenance;
  input.source_id = std::move(source_id);
  return input;
}

ImageChainOutput run_image_chain(const RfFrame& rf, const PipelineConfig& config, const std::string& source_id) {
  config.validate();
  ImageChainOutput out;
  out.envelope = detect_envelope(rf);
  out.bmode = log_compress(out.envelope, config.dynamic_range_db);
  out.envelope_input = prepare_network_input(out.envelope.window_image(), Modality::envelope, source_id);
  out.bmode_input = prepare_network_input(out.bmode.window_image(), Modality::bmode, source_id);
  return out;
}

}  // namespace sonosynth
