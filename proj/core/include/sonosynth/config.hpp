// Copyright 2026 The sonosynth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <vector>

#include "sonosynth/dataset.hpp"

namespace sonosynth {

/// Flat dotted-key configuration, e.g. "transducer.center_frequency_hz".
using ConfigMap = std::map<std::string, std::string>;

struct ConfigKey {
  std::string name;
  std::string description;
};

/// Every accepted key, in documentation order.
const std::vector<ConfigKey>& config_keys();
bool is_config_key(const std::string& name);

ConfigMap to_config_map(const DatasetConfig& config);
/// Unknown keys and unparsable values throw ConfigError. Missing keys keep
/// their defaults.
DatasetConfig dataset_config_from_map(const ConfigMap& values);

/// "key = value" lines; '#' starts a comment. Throws ConfigError with the
/// line number on malformed lines or unknown keys.
ConfigMap parse_config_text(const std::string& text);
std::string config_to_text(const ConfigMap& values);

/// Applies one "key=value" override on top of `values`.
void apply_override(ConfigMap& values, const std::string& assignment);

}  // namespace sonosynth
