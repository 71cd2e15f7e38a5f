// Copyright 2026 The sonosynth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace sonosynth {

// Failure categories. The CLI maps each to a stable exit code.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Lesion rejection sampling ran out of attempts.
class PlacementError : public ConfigError {
 public:
  PlacementError(std::size_t lesion_index, std::size_t attempts);

  std::size_t lesion_index() const { return lesion_index_; }

 private:
  std::size_t lesion_index_;
};

}  // namespace sonosynth
