// Copyright 2026 The sonosynth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sonosynth/rf.hpp"

namespace sonosynth {

struct EnvelopeMoments {
  double mean = 0.0;
  double stddev = 0.0;  // population
  double snr = 0.0;     // mean / stddev; 1.913 for a Rayleigh variate
  std::size_t count = 0;
};

EnvelopeMoments envelope_moments(std::span<const double> samples);

/// sqrt(pi / (4 - pi)), the mean-to-std ratio of any Rayleigh distribution.
double rayleigh_snr();

struct RayleighFit {
  double sigma = 0.0;  // maximum-likelihood scale, sqrt(sum x^2 / 2n)
  double ks_statistic = 0.0;
  double p_value = 0.0;
  std::size_t count = 0;
};

/// One-sample Kolmogorov-Smirnov test against a Rayleigh law with
/// ML-estimated scale. Estimating the scale makes the test conservative.
RayleighFit rayleigh_ks_test(std::span<const double> samples);

/// Asymptotic Kolmogorov survival function P(K > x).
double kolmogorov_survival(double x);

/// Selection of envelope samples from a rectangular window of a frame.
struct RegionSelection {
  std::size_t first_line = 0;
  std::size_t end_line = 0;  // exclusive
  std::size_t first_sample = 0;
  std::size_t end_sample = 0;  // exclusive
  std::size_t line_stride = 1;
  std::size_t sample_stride = 1;
};

std::vector<double> collect_region(const LineFrame& frame, const RegionSelection& region);

}  // namespace sonosynth
