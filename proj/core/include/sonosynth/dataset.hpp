// Copyright 2026 The sonosynth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "sonosynth/phantom.hpp"
#include "sonosynth/pipeline.hpp"
#include "sonosynth/rf.hpp"

namespace sonosynth {

namespace fs = std::filesystem;

inline constexpr int kManifestFormatVersion = 1;
inline constexpr const char* kManifestFileName = "manifest.json";

enum class Split { train, val, test };
const char* to_string(Split split);
Split split_from_string(const std::string& name);

struct SplitFractions {
  double train = 0.60;
  double val = 0.15;
  double test = 0.25;

  /// Throws ConfigError unless all are >= 0 and they sum to 1 within 1e-9.
  void validate() const;
};

struct SplitCounts {
  std::size_t train = 0;
  std::size_t val = 0;
  std::size_t test = 0;

  friend bool operator==(const SplitCounts&, const SplitCounts&) = default;
};

/// floor(n * train), floor(n * val), remainder to test.
SplitCounts split_counts(std::size_t n_images, const SplitFractions& fractions);

/// Seeded permutation of [0, n) dealt out train first, then val, then test.
std::vector<Split> assign_splits(std::size_t n_images, const SplitFractions& fractions, std::uint64_t seed);

struct DatasetConfig {
  std::size_t n_images = 700;
  SplitFractions split;
  std::uint64_t seed = 0;
  PhantomConfig phantom;
  TransducerConfig transducer;
  PipelineConfig pipeline;
  std::size_t mask_size = kMaskSize;
  bool keep_rf = false;
  // A phantom whose lesions cannot be placed is redrawn from a derived seed
  // at most this many times before the build fails.
  int max_phantom_redraws = 16;
  unsigned threads = 0;  // 0 = default_thread_count()

  void validate() const;
};

/// Files written for one image, relative to the dataset root, keyed by
/// stage ("envelope", "bmode", "mask", "phantom", "rf"). Sidecars are
/// listed under "<stage>.header".
struct ManifestEntry {
  std::string id;
  Split split = Split::train;
  std::map<std::string, std::string> files;
  std::uint64_t phantom_seed = 0;
  std::size_t lesion_count = 0;
  std::string modality;  // external sets only
  std::string note;      // external sets only

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct DatasetManifest {
  int format_version = kManifestFormatVersion;
  std::string dataset_id;
  std::string source = "simulated";  // or "external"
  std::uint64_t creation_seed = 0;
  SplitFractions split;
  std::vector<ManifestEntry> entries;
  std::map<std::string, std::string> config;  // echo of every generation parameter

  SplitCounts counts() const;
  const ManifestEntry* find(const std::string& id) const;
  std::vector<const ManifestEntry*> entries_in(Split split) const;
};

std::string image_id(std::size_t index);

/// Per-image seed: derive_seed(dataset seed, index).
std::uint64_t image_seed(std::uint64_t dataset_seed, std::size_t index);

/// Phantom -> RF -> envelope -> B-mode -> network inputs + mask for every
/// image, written under root/<split>/. Images are generated in parallel; the
/// manifest is written last. On failure every file created so far is removed
/// and the error is rethrown.
DatasetManifest build_dataset(const fs::path& root, const DatasetConfig& config);

std::string manifest_to_text(const DatasetManifest& manifest);
DatasetManifest manifest_from_text(const std::string& text);
void write_manifest(const fs::path& root, const DatasetManifest& manifest);
DatasetManifest read_manifest(const fs::path& root);

struct ValidationReport {
  std::vector<std::string> problems;
  bool ok() const { return problems.empty(); }
};

/// Checks ids, split coverage and counts, referenced files, unreferenced
/// files, array shapes and value ranges, and mask labels.
ValidationReport validate_dataset(const fs::path& root);

}  // namespace sonosynth
