// Copyright 2026 The sonosynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "sonosynth/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <numeric>
#include <set>

#include "json.hpp"
#include "sonosynth/config.hpp"
#include "sonosynth/errors.hpp"
#include "sonosynth/parallel.hpp"
#include "sonosynth/random.hpp"
#include "sonosynth/raw_io.hpp"

namespace sonosynth {

using nlohmann::ordered_json;

namespace {

enum : std::uint64_t { kSplitStream = 3, kRedrawStream = 4 };

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Guards floor() against products like 0.15 * 700 = 104.99999999999999.
std::size_t floor_count(double x) { return static_cast<std::size_t>(std::floor(x + 1e-9)); }

std::string relative(Split split, const std::string& file) { return std::string(to_string(split)) + "/" + file; }

}  // namespace

const char* to_string(Split split) {
  switch (split) {
    case Split::train: return "train";
    case Split::val: return "val";
    case Split::test: return "test";
  }
  return "?";
}

Split split_from_string(const std::string& name) {
  if (name == "train") return Split::train;
  if (name == "val") return Split::val;
  if (name == "test") return Split::test;
  throw ValidationError("unknown split '" + name + "'");
}

void SplitFractions::validate() const {
  if (train < 0.0 || val < 0.0 || test < 0.0) throw ConfigError("split fractions must be non-negative");
  if (std::abs(train + val + test - 1.0) > 1e-9) {
    throw ConfigError("split fractions must sum to 1 (got " + format_double(train + val + test) + ")");
  }
}

SplitCounts split_counts(std::size_t n_images, const SplitFractions& fractions) {
  fractions.validate();
  SplitCounts c;
  c.train = std::min(n_images, floor_count(static_cast<double>(n_images) * fractions.train));
  c.val = std::min(n_images - c.train, floor_count(static_cast<double>(n_images) * fractions.val));
  c.test = n_images - c.train - c.val;
  return c;
}

std::vector<Split> assign_splits(std::size_t n_images, const SplitFractions& fractions, std::uint64_t seed) {
  const SplitCounts counts = split_counts(n_images, fractions);
  std::vector<std::size_t> order(n_images);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(derive_seed(seed, 0, kSplitStream));
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Split> splits(n_images, Split::test);
  for (std::size_t i = 0; i < counts.train; ++i) splits[order[i]] = Split::train;
  for (std::size_t i = counts.train; i < counts.train + counts.val; ++i) splits[order[i]] = Split::val;
  return splits;
}

void DatasetConfig::validate() const {
  if (n_images < 1) throw ConfigError("dataset: n_images must be >= 1");
  split.validate();
  phantom.validate();
  transducer.validate();
  pipeline.validate();
  if (mask_size < 1) throw ConfigError("dataset: mask_size must be >= 1");
  if (max_phantom_redraws < 0) throw ConfigError("dataset: max_phantom_redraws must be >= 0");
  const auto& e = phantom.extent;
  if (e.lateral_min_mm != transducer.lateral_min_mm || e.lateral_max_mm != transducer.lateral_max_mm ||
      e.axial_min_mm != transducer.axial_start_mm || e.axial_max_mm != transducer.axial_end_mm) {
    throw ConfigError("dataset: phantom extent and transducer imaging window must coincide so masks align with images");
  }
}

SplitCounts DatasetManifest::counts() const {
  SplitCounts c;
  for (const auto& e : entries) {
    switch (e.split) {
      case Split::train: ++c.train; break;
      case Split::val: ++c.val; break;
      case Split::test: ++c.test; break;
    }
  }
  return c;
}

const ManifestEntry* DatasetManifest::find(const std::string& id) const {
  for (const auto& e : entries)
    if (e.id == id) return &e;
  return nullptr;
}

std::vector<const ManifestEntry*> DatasetManifest::entries_in(Split split) const {
  std::vector<const ManifestEntry*> out;
  for (const auto& e : entries)
    if (e.split == split) out.push_back(&e);
  return out;
}

std::string image_id(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "img%05zu", index);
  return buf;
}

std::uint64_t image_seed(std::uint64_t dataset_seed, std::size_t index) { return derive_seed(dataset_seed, index); }

DatasetManifest build_dataset(const fs::path& root, const DatasetConfig& config) {
  config.validate();

  DatasetManifest manifest;
  manifest.creation_seed = config.seed;
  manifest.split = config.split;
  manifest.source = "simulated";
  manifest.config = to_config_map(config);
  manifest.config.erase("run.threads");
  manifest.dataset_id = "sim-" + hex64(fnv1a(config_to_text(manifest.config)));

  const std::size_t n = config.n_images;
  const auto splits = assign_splits(n, config.split, config.seed);
  manifest.entries.resize(n);

  std::vector<std::vector<fs::path>> written(n);
  std::mutex dir_mutex;

  const unsigned threads = config.threads == 0 ? default_thread_count() : config.threads;
  const bool images_in_parallel = n >= threads;
  const unsigned line_threads = images_in_parallel ? 1u : threads;

  auto generate = [&](std::size_t i) {
    ManifestEntry& entry = manifest.entries[i];
    entry.id = image_id(i);
    entry.split = splits[i];
    const fs::path dir = root / to_string(entry.split);
    {
      std::lock_guard lock(dir_mutex);
      std::error_code ec;
      fs::create_directories(dir, ec);
      if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    }

    const std::uint64_t base_seed = image_seed(config.seed, i);
    PhantomSpec spec;
    for (int attempt = 0;; ++attempt) {
      const std::uint64_t seed = attempt == 0 ? base_seed : derive_seed(base_seed, static_cast<std::uint64_t>(attempt), kRedrawStream);
      try {
        spec = sample_phantom_spec(seed, config.phantom);
        break;
      } catch (const PlacementError&) {
        if (attempt >= config.max_phantom_redraws) throw;
      }
    }
    entry.phantom_seed = spec.seed;
    entry.lesion_count = spec.lesions.size();

    const ScattererField field = place_scatterers(spec);
    const RfFrame rf = synthesize_rf(field, config.transducer, line_threads);
    const ImageChainOutput chain = run_image_chain(rf, config.pipeline, entry.id);
    const ClassMask mask = rasterize_mask(spec, config.mask_size, config.mask_size);

    auto record = [&](const std::string& stage, const std::string& file, bool has_header) {
      const fs::path path = dir / file;
      written[i].push_back(path);
      entry.files[stage] = relative(entry.split, file);
      if (has_header) {
        written[i].push_back(sidecar_path(path));
        entry.files[stage + ".header"] = relative(entry.split, sidecar_path(path).filename().string());
      }
      return path;
    };

    write_text_file(record("phantom", entry.id + ".phantom.json", false), phantom_to_text(spec));
    save_network_input(record("envelope", entry.id + ".envelope.f32", true), chain.envelope_input);
    save_network_input(record("bmode", entry.id + ".bmode.f32", true), chain.bmode_input);
    save_mask(record("mask", entry.id + ".mask.u8", true), mask);
    if (config.keep_rf) save_rf_frame(record("rf", entry.id + ".rf.f32", true), rf);
  };

  try {
    parallel_for(n, images_in_parallel ? threads : 1u, generate);
    write_manifest(root, manifest);
  } catch (...) {
    std::error_code ec;
    for (const auto& files : written) {
      for (const auto& f : files) {
        fs::remove(f, ec);
        fs::path partial = f;
        partial += ".partial";
        fs::remove(partial, ec);
      }
    }
    throw;
  }
  return manifest;
}

std::string manifest_to_text(const DatasetManifest& m) {
  ordered_json doc;
  doc["format_version"] = m.format_version;
  doc["dataset_id"] = m.dataset_id;
  doc["source"] = m.source;
  doc["creation_seed"] = std::to_string(m.creation_seed);
  doc["split_fractions"] = {{"train", m.split.train}, {"val", m.split.val}, {"test", m.split.test}};
  const SplitCounts c = m.counts();
  doc["counts"] = {{"train", c.train}, {"val", c.val}, {"test", c.test}};
  ordered_json cfg = ordered_json::object();
  for (const auto& [k, v] : m.config) cfg[k] = v;
  doc["config"] = std::move(cfg);
  auto images = ordered_json::array();
  for (const auto& e : m.entries) {
    ordered_json j;
    j["id"] = e.id;
    j["split"] = to_string(e.split);
    if (m.source == "simulated") {
      j["phantom_seed"] = std::to_string(e.phantom_seed);
      j["lesion_count"] = e.lesion_count;
    }
    if (!e.modality.empty()) j["modality"] = e.modality;
    if (!e.note.empty()) j["note"] = e.note;
    ordered_json files = ordered_json::object();
    for (const auto& [k, v] : e.files) files[k] = v;
    j["files"] = std::move(files);
    images.push_back(std::move(j));
  }
  doc["images"] = std::move(images);
  return doc.dump(2) + "\n";
}

DatasetManifest manifest_from_text(const std::string& text) {
  try {
    const auto doc = ordered_json::parse(text);
    DatasetManifest m;
    m.format_version = doc.at("format_version").get<int>();
    if (m.format_version != kManifestFormatVersion) {
      throw ValidationError("manifest: unsupported format_version " + std::to_string(m.format_version));
    }
    m.dataset_id = doc.at("dataset_id").get<std::string>();
    m.source = doc.at("source").get<std::string>();
    m.creation_seed = std::stoull(doc.at("creation_seed").get<std::string>());
    const auto& f = doc.at("split_fractions");
    m.split = {f.at("train").get<double>(), f.at("val").get<double>(), f.at("test").get<double>()};
    for (const auto& [k, v] : doc.at("config").items()) m.config[k] = v.get<std::string>();
    for (const auto& j : doc.at("images")) {
      ManifestEntry e;
      e.id = j.at("id").get<std::string>();
      e.split = split_from_string(j.at("split").get<std::string>());
      if (j.contains("phantom_seed")) e.phantom_seed = std::stoull(j.at("phantom_seed").get<std::string>());
      if (j.contains("lesion_count")) e.lesion_count = j.at("lesion_count").get<std::size_t>();
      if (j.contains("modality")) e.modality = j.at("modality").get<std::string>();
      if (j.contains("note")) e.note = j.at("note").get<std::string>();
      for (const auto& [k, v] : j.at("files").items()) e.files[k] = v.get<std::string>();
      m.entries.push_back(std::move(e));
    }
    return m;
  } catch (const nlohmann::json::exception& ex) {
    throw ValidationError(std::string("manifest: malformed: ") + ex.what());
  } catch (const std::logic_error& ex) {
    throw ValidationError(std::string("manifest: bad value: ") + ex.what());
  }
}

void write_manifest(const fs::path& root, const DatasetManifest& manifest) {
  write_text_file(root / kManifestFileName, manifest_to_text(manifest));
}

DatasetManifest read_manifest(const fs::path& root) {
  const fs::path path = root / kManifestFileName;
  if (!fs::exists(path)) throw IoError("no manifest at " + path.string());
  return manifest_from_text(read_text_file(path));
}

ValidationReport validate_dataset(const fs::path& root) {
  ValidationReport report;
  auto problem = [&report](std::string msg) { report.problems.push_back(std::move(msg)); };

  DatasetManifest m;
  try {
    m = read_manifest(root);
  } catch (const std::exception& ex) {
    problem(ex.what());
    return report;
  }

  std::set<std::string> ids;
  for (const auto& e : m.entries) {
    if (!ids.insert(e.id).second) problem("duplicate image id " + e.id);
  }
  if (m.source == "simulated") {
    try {
      const SplitCounts expected = split_counts(m.entries.size(), m.split);
      if (m.counts() != expected) {
        const SplitCounts got = m.counts();
        problem("split counts " + std::to_string(got.train) + "/" + std::to_string(got.val) + "/" + std::to_string(got.test) +
                " do not match fractions (expected " + std::to_string(expected.train) + "/" + std::to_string(expected.val) +
                "/" + std::to_string(expected.test) + ")");
      }
    } catch (const std::exception& ex) {
      problem(ex.what());
    }
  }

  std::map<std::string, int> referenced;
  for (const auto& e : m.entries) {
    for (const auto& [stage, rel] : e.files) {
      ++referenced[rel];
      const fs::path path = root / rel;
      if (!fs::exists(path)) {
        problem(e.id + ": missing " + stage + " file " + rel);
        continue;
      }
      try {
        if (stage == "envelope" || stage == "bmode") {
          const NetworkInput input = load_network_input(path);
          if (input.samples.rows() != kNetworkInputSize || input.samples.cols() != kNetworkInputSize) {
            problem(e.id + ": " + stage + " input is " + std::to_string(input.samples.rows()) + "x" +
                    std::to_string(input.samples.cols()) + ", expected 572x572");
          }
          for (float v : input.samples.values()) {
            if (!(v >= 0.0f && v <= 1.0f)) {
              problem(e.id + ": " + stage + " input has values outside [0,1]");
              break;
            }
          }
        } else if (stage == "mask") {
          const ClassMask mask = load_mask(path);
          const auto expected = m.config.count("mask.size") ? std::stoull(m.config.at("mask.size")) : kMaskSize;
          if (mask.width() != expected || mask.height() != expected) {
            problem(e.id + ": mask is " + std::to_string(mask.height()) + "x" + std::to_string(mask.width()) + ", expected " +
                    std::to_string(expected) + "x" + std::to_string(expected));
          }
        }
      } catch (const std::exception& ex) {
        problem(e.id + ": " + ex.what());
      }
    }
  }
  for (const auto& [rel, count] : referenced) {
    if (count > 1) problem("file " + rel + " is referenced " + std::to_string(count) + " times");
  }

  std::error_code ec;
  for (auto it = fs::recursive_directory_iterator(root, ec); it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (ec) break;
    if (!it->is_regular_file()) continue;
    const std::string rel = fs::relative(it->path(), root).generic_string();
    if (rel == kManifestFileName) continue;
    if (!referenced.count(rel)) problem("unreferenced file " + rel);
  }
  return report;
}

}  // namespace sonosynth
