// Copyright 2026 The sonosynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "sonosynth/config.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <sstream>

#include "sonosynth/errors.hpp"
#include "sonosynth/raw_io.hpp"

namespace sonosynth {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename Int>
Int parse_integer(const std::string& key, const std::string& text) {
  Int value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("config key " + key + ": '" + text + "' is not a valid integer");
  }
  return value;
}

double parse_real(const std::string& key, const std::string& text) {
  try {
    return parse_double(text);
  } catch (const ConfigError&) {
    throw ConfigError("config key " + key + ": '" + text + "' is not a number");
  }
}

bool parse_flag(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError("config key " + key + ": '" + text + "' is not a boolean");
}

struct Field {
  ConfigKey key;
  std::function<std::string(const DatasetConfig&)> get;
  std::function<void(DatasetConfig&, const std::string&)> set;
};

template <typename Access>
Field real(std::string name, std::string desc, Access access) {
  return {{name, std::move(desc)},
          [access](const DatasetConfig& c) { return format_double(access(c)); },
          [access, name](DatasetConfig& c, const std::string& v) { access(c) = parse_real(name, v); }};
}

template <typename Int, typename Access>
Field integer(std::string name, std::string desc, Access access) {
  return {{name, std::move(desc)},
          [access](const DatasetConfig& c) { return std::to_string(access(c)); },
          [access, name](DatasetConfig& c, const std::string& v) { access(c) = parse_integer<Int>(name, v); }};
}

template <typename Access>
Field flag(std::string name, std::string desc, Access access) {
  return {{name, std::move(desc)},
          [access](const DatasetConfig& c) { return std::string(access(c) ? "true" : "false"); },
          [access, name](DatasetConfig& c, const std::string& v) { access(c) = parse_flag(name, v); }};
}

#define SONOSYNTH_MEMBER(expr) [](auto& c) -> auto& { return c.expr; }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      integer<std::size_t>("dataset.n_images", "number of simulated images", SONOSYNTH_MEMBER(n_images)),
      integer<std::uint64_t>("dataset.seed", "dataset seed; per-image seeds derive from it", SONOSYNTH_MEMBER(seed)),
      real("dataset.split_train", "training fraction", SONOSYNTH_MEMBER(split.train)),
      real("dataset.split_val", "validation fraction", SONOSYNTH_MEMBER(split.val)),
      real("dataset.split_test", "test fraction", SONOSYNTH_MEMBER(split.test)),
      flag("dataset.keep_rf", "also store the RF frame of every image", SONOSYNTH_MEMBER(keep_rf)),
      integer<int>("dataset.max_phantom_redraws", "redraws allowed when lesion placement fails",
                   SONOSYNTH_MEMBER(max_phantom_redraws)),
      integer<std::size_t>("mask.size", "ground-truth mask width and height in pixels", SONOSYNTH_MEMBER(mask_size)),

      real("phantom.extent.lateral_min_mm", "phantom lateral start", SONOSYNTH_MEMBER(phantom.extent.lateral_min_mm)),
      real("phantom.extent.lateral_max_mm", "phantom lateral end", SONOSYNTH_MEMBER(phantom.extent.lateral_max_mm)),
      real("phantom.extent.axial_min_mm", "phantom start depth", SONOSYNTH_MEMBER(phantom.extent.axial_min_mm)),
      real("phantom.extent.axial_max_mm", "phantom end depth", SONOSYNTH_MEMBER(phantom.extent.axial_max_mm)),
      real("phantom.extent.elevation_thickness_mm", "elevation slab thickness",
           SONOSYNTH_MEMBER(phantom.extent.elevation_thickness_mm)),
      real("phantom.placement.lateral_min_mm", "lesion center lateral lower bound",
           SONOSYNTH_MEMBER(phantom.placement_lateral_min_mm)),
      real("phantom.placement.lateral_max_mm", "lesion center lateral upper bound",
           SONOSYNTH_MEMBER(phantom.placement_lateral_max_mm)),
      real("phantom.placement.axial_min_mm", "lesion center depth lower bound", SONOSYNTH_MEMBER(phantom.placement_axial_min_mm)),
      real("phantom.placement.axial_max_mm", "lesion center depth upper bound", SONOSYNTH_MEMBER(phantom.placement_axial_max_mm)),
      integer<int>("phantom.lesion_count_min", "fewest lesions per image", SONOSYNTH_MEMBER(phantom.lesion_count_min)),
      integer<int>("phantom.lesion_count_max", "most lesions per image", SONOSYNTH_MEMBER(phantom.lesion_count_max)),
      real("phantom.circle_probability", "probability that a lesion is a circle", SONOSYNTH_MEMBER(phantom.circle_probability)),
      real("phantom.hyperechoic_probability", "probability that a lesion is hyperechoic",
           SONOSYNTH_MEMBER(phantom.hyperechoic_probability)),
      real("phantom.circle_radius_min_mm", "smallest circle radius", SONOSYNTH_MEMBER(phantom.circle_radius_min_mm)),
      real("phantom.circle_radius_max_mm", "largest circle radius", SONOSYNTH_MEMBER(phantom.circle_radius_max_mm)),
      real("phantom.ellipse_major_min_mm", "smallest ellipse semi-major axis", SONOSYNTH_MEMBER(phantom.ellipse_major_min_mm)),
      real("phantom.ellipse_major_max_mm", "largest ellipse semi-major axis", SONOSYNTH_MEMBER(phantom.ellipse_major_max_mm)),
      real("phantom.ellipse_minor_min_mm", "smallest ellipse semi-minor axis", SONOSYNTH_MEMBER(phantom.ellipse_minor_min_mm)),
      real("phantom.ellipse_minor_max_mm", "largest ellipse semi-minor axis", SONOSYNTH_MEMBER(phantom.ellipse_minor_max_mm)),
      integer<int>("phantom.min_k", "smallest hyperechoic amplitude multiplier", SONOSYNTH_MEMBER(phantom.min_k)),
      integer<int>("phantom.max_k", "largest hyperechoic amplitude multiplier", SONOSYNTH_MEMBER(phantom.max_k)),
      real("phantom.scatterer_density_per_mm3", "mean scatterers per cubic millimeter",
           SONOSYNTH_MEMBER(phantom.scatterer_density_per_mm3)),
      integer<int>("phantom.max_placement_attempts", "center draws per lesion before placement fails",
                   SONOSYNTH_MEMBER(phantom.max_placement_attempts)),

      integer<int>("transducer.num_lines", "number of RF lines", SONOSYNTH_MEMBER(transducer.num_lines)),
      real("transducer.axial_start_mm", "start depth of the recorded window", SONOSYNTH_MEMBER(transducer.axial_start_mm)),
      real("transducer.axial_end_mm", "end depth of the recorded window", SONOSYNTH_MEMBER(transducer.axial_end_mm)),
      real("transducer.lateral_min_mm", "lateral position of the first line", SONOSYNTH_MEMBER(transducer.lateral_min_mm)),
      real("transducer.lateral_max_mm", "lateral position of the last line", SONOSYNTH_MEMBER(transducer.lateral_max_mm)),
      real("transducer.sound_speed_m_per_s", "speed of sound", SONOSYNTH_MEMBER(transducer.sound_speed_m_per_s)),
      real("transducer.center_frequency_hz", "pulse center frequency", SONOSYNTH_MEMBER(transducer.center_frequency_hz)),
      real("transducer.sampling_frequency_hz", "RF sampling frequency", SONOSYNTH_MEMBER(transducer.sampling_frequency_hz)),
      real("transducer.fractional_bandwidth", "-6 dB pulse bandwidth over center frequency",
           SONOSYNTH_MEMBER(transducer.fractional_bandwidth)),
      real("transducer.lateral_beam_sigma_mm", "Gaussian lateral beam sigma", SONOSYNTH_MEMBER(transducer.lateral_beam_sigma_mm)),
      real("transducer.elevation_beam_sigma_mm", "Gaussian elevation beam sigma",
           SONOSYNTH_MEMBER(transducer.elevation_beam_sigma_mm)),
      real("transducer.beam_cutoff_sigmas", "beam weights beyond this many sigmas are skipped",
           SONOSYNTH_MEMBER(transducer.beam_cutoff_sigmas)),

      real("pipeline.dynamic_range_db", "B-mode display dynamic range", SONOSYNTH_MEMBER(pipeline.dynamic_range_db)),
      integer<unsigned>("run.threads", "worker threads, 0 = SONOSYNTH_THREADS or all cores", SONOSYNTH_MEMBER(threads)),
  };
  return table;
}

#undef SONOSYNTH_MEMBER

const Field* find_field(const std::string& name) {
  for (const auto& f : fields())
    if (f.key.name == name) return &f;
  return nullptr;
}

}  // namespace

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> out;
    for (const auto& f : fields()) out.push_back(f.key);
    return out;
  }();
  return keys;
}

bool is_config_key(const std::string& name) { return find_field(name) != nullptr; }

ConfigMap to_config_map(const DatasetConfig& config) {
  ConfigMap out;
  for (const auto& f : fields()) out[f.key.name] = f.get(config);
  return out;
}

DatasetConfig dataset_config_from_map(const ConfigMap& values) {
  DatasetConfig config;
  for (const auto& [key, value] : values) {
    const Field* f = find_field(key);
    if (!f) throw ConfigError("unknown config key '" + key + "'");
    f->set(config, value);
  }
  return config;
}

ConfigMap parse_config_text(const std::string& text) {
  ConfigMap out;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(number) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!is_config_key(key)) throw ConfigError("config line " + std::to_string(number) + ": unknown key '" + key + "'");
    out[key] = value;
  }
  return out;
}

std::string config_to_text(const ConfigMap& values) {
  std::string out;
  for (const auto& [k, v] : values) out += k + " = " + v + "\n";
  return out;
}

void apply_override(ConfigMap& values, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' is not of the form key=value");
  const std::string key = trim(assignment.substr(0, eq));
  if (!is_config_key(key)) throw ConfigError("unknown config key '" + key + "' in override");
  values[key] = trim(assignment.substr(eq + 1));
}

}  // namespace sonosynth
