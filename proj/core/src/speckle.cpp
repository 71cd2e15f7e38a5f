// Copyright 2026 The sonosynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "sonosynth/speckle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sonosynth/errors.hpp"

namespace sonosynth {

EnvelopeMoments envelope_moments(std::span<const double> samples) {
  EnvelopeMoments m;
  m.count = samples.size();
  if (samples.empty()) return m;
  double sum = 0.0;
  for (double x : samples) sum += x;
  m.mean = sum / static_cast<double>(samples.size());
  double ss = 0.0;
  for (double x : samples) ss += (x - m.mean) * (x - m.mean);
  m.stddev = std::sqrt(ss / static_cast<double>(samples.size()));
  m.snr = m.stddev > 0.0 ? m.mean / m.stddev : 0.0;
  return m;
}

double rayleigh_snr() { return std::sqrt(std::numbers::pi / (4.0 - std::numbers::pi)); }

double kolmogorov_survival(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 1.18) {
    // P(K <= x) = sqrt(2 pi) / x * sum_k exp(-(2k-1)^2 pi^2 / (8 x^2))
    const double w = std::numbers::pi * std::numbers::pi / (8.0 * x * x);
    double cdf = 0.0;
    for (int k = 1; k <= 8; ++k) {
      const double j = 2.0 * k - 1.0;
      cdf += std::exp(-j * j * w);
    }
    cdf *= std::sqrt(2.0 * std::numbers::pi) / x;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

RayleighFit rayleigh_ks_test(std::span<const double> samples) {
  if (samples.empty()) throw ValidationError("Rayleigh fit needs at least one sample");
  RayleighFit fit;
  fit.count = samples.size();
  double sum_sq = 0.0;
  for (double x : samples) sum_sq += x * x;
  fit.sigma = std::sqrt(sum_sq / (2.0 * static_cast<double>(samples.size())));
  if (!(fit.sigma > 0.0)) throw ValidationError("Rayleigh fit: all samples are zero");

  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  const double inv_2s2 = 1.0 / (2.0 * fit.sigma * fit.sigma);
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double cdf = 1.0 - std::exp(-sorted[i] * sorted[i] * inv_2s2);
    d = std::max({d, static_cast<double>(i + 1) / n - cdf, cdf - static_cast<double>(i) / n});
  }
  fit.ks_statistic = d;
  const double sqrt_n = std::sqrt(n);
  // Stephens' small-sample correction.
  fit.p_value = kolmogorov_survival((sqrt_n + 0.12 + 0.11 / sqrt_n) * d);
  return fit;
}

std::vector<double> collect_region(const LineFrame& frame, const RegionSelection& region) {
  if (region.end_line > frame.num_lines || region.end_sample > frame.num_samples || region.line_stride == 0 ||
      region.sample_stride == 0) {
    throw ValidationError("region selection exceeds the frame");
  }
  std::vector<double> out;
  for (std::size_t l = region.first_line; l < region.end_line; l += region.line_stride) {
    const auto line = frame.line(l);
    for (std::size_t s = region.first_sample; s < region.end_sample; s += region.sample_stride) out.push_back(line[s]);
  }
  return out;
}

}  // namespace sonosynth
