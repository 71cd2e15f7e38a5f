// Copyright 2026 The sonosynth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "sonosynth/dataset.hpp"

namespace testing_support {

// Shallow window and thin slab so a dataset builds in well under a second.
inline sonosynth::DatasetConfig small_dataset_config(std::size_t n, std::uint64_t seed) {
  sonosynth::DatasetConfig c;
  c.n_images = n;
  c.seed = seed;
  c.threads = 2;
  c.transducer.num_lines = 16;
  c.transducer.axial_start_mm = 30.0;
  c.transducer.axial_end_mm = 42.0;
  c.transducer.lateral_min_mm = -8.0;
  c.transducer.lateral_max_mm = 8.0;
  c.transducer.elevation_beam_sigma_mm = 1.0;
  c.phantom.extent = {-8.0, 8.0, 30.0, 42.0, 2.0};
  c.phantom.placement_lateral_min_mm = -6.0;
  c.phantom.placement_lateral_max_mm = 6.0;
  c.phantom.placement_axial_min_mm = 32.0;
  c.phantom.placement_axial_max_mm = 40.0;
  c.phantom.lesion_count_max = 2;
  c.phantom.ellipse_major_min_mm = 2.0;
  c.phantom.ellipse_major_max_mm = 3.0;
  c.phantom.ellipse_minor_min_mm = 1.0;
  c.phantom.ellipse_minor_max_mm = 2.0;
  c.mask_size = 64;
  return c;
}

}  // namespace testing_support
