// Copyright 2026 The sonosynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "sonosynth/errors.hpp"

namespace sonosynth {

PlacementError::PlacementError(std::size_t lesion_index, std::size_t attempts)
    : ConfigError("lesion placement failed: lesion " + std::to_string(lesion_index) + " found no non-overlapping center in " +
                  std::to_string(attempts) + " attempts; reduce the lesion count or sizes"),
      lesion_index_(lesion_index) {}

}  // namespace sonosynth
