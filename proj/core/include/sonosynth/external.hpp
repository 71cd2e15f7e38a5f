// Copyright 2026 The sonosynth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sonosynth/dataset.hpp"
#include "sonosynth/phantom.hpp"
#include "sonosynth/pipeline.hpp"

namespace sonosynth {

namespace fs = std::filesystem;

/// An externally acquired image with a manually drawn 3-class mask. Image
/// files are raw float32 with sidecar or 8-bit PNG; masks are raw u8 with
/// sidecar or PNG whose gray values are the labels themselves.
struct ExternalRecord {
  std::string id;
  Modality modality = Modality::envelope;
  fs::path image;
  fs::path mask;
  std::string note;
};

struct IngestOptions {
  // For envelope records, also log-compress to produce a B-mode input.
  bool derive_bmode = false;
  double dynamic_range_db = 50.0;
  std::size_t mask_size = kMaskSize;
};

struct IngestedImage {
  std::string id;
  Modality modality = Modality::envelope;
  NetworkInput input;
  std::optional<NetworkInput> derived_bmode;
  ClassMask mask;  // mask_size x mask_size
  std::string note;
};

/// Record list file: JSON array of {id, modality, image, mask, note}; paths
/// are resolved against the list file's directory.
std::vector<ExternalRecord> load_external_records(const fs::path& list_file);

/// Same resize / normalize / mirror chain as simulated data; masks are
/// resized nearest-neighbour. Throws ValidationError on labels outside
/// {0, 1, 2} (naming file and pixel) or a mask whose shape matches neither
/// the image nor the output mask size.
std::vector<IngestedImage> ingest_external(const std::vector<ExternalRecord>& records, const IngestOptions& options);

/// Writes an ingested set as a test-only dataset with source "external".
DatasetManifest write_external_set(const fs::path& root, const std::vector<IngestedImage>& images);

}  // namespace sonosynth
