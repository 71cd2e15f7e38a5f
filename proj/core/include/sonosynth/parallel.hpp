// Copyright 2026 The sonosynth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>

namespace sonosynth {

/// Worker count from SONOSYNTH_THREADS, else hardware concurrency (min 1).
unsigned default_thread_count();

/// Runs body(i) for i in [0, n) on up to `threads` workers. Items are handed
/// out dynamically; callers must make each body(i) independent of the others.
/// The first exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace sonosynth
