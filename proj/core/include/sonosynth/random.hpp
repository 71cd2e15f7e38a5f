// Copyright 2026 The sonosynth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>

namespace sonosynth {

using Rng = std::mt19937_64;

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Seed for item `index` of a batch generated from `base`:
/// mix64(mix64(base) ^ mix64(index + 0x9e3779b97f4a7c15)). Stream ids keep
/// different consumers of the same item seed (lesions vs scatterers) apart.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index, std::uint64_t stream = 0);

}  // namespace sonosynth
