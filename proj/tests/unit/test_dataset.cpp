// Copyright 2026 The sonosynth Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <fstream>

#include "../support/small_config.hpp"
#include "../support/temp_dir.hpp"
#include "doctest.h"
#include "sonosynth/dataset.hpp"
#include "sonosynth/errors.hpp"
#include "sonosynth/raw_io.hpp"

using namespace sonosynth;
using testing_support::small_dataset_config;
using testing_support::TempDir;

TEST_CASE("split counts floor train and val") {
  CHECK(split_counts(700, {}) == SplitCounts{420, 105, 175});
  CHECK(split_counts(20, {}) == SplitCounts{12, 3, 5});
  CHECK(split_counts(1, {}) == SplitCounts{0, 0, 1});
  CHECK(split_counts(10, {0.3, 0.3, 0.4}) == SplitCounts{3, 3, 4});
  for (std::size_t n = 1; n < 300; ++n) {
    auto c = split_counts(n, {});
    CHECK(c.train + c.val + c.test == n);
  }
}

TEST_CASE("split assignment is a seeded permutation") {
  auto a = assign_splits(700, {}, 42);
  CHECK(a == assign_splits(700, {}, 42));
  CHECK(a != assign_splits(700, {}, 43));
  CHECK(std::count(a.begin(), a.end(), Split::train) == 420);
  CHECK(std::count(a.begin(), a.end(), Split::val) == 105);
  CHECK(std::count(a.begin(), a.end(), Split::test) == 175);
}

TEST_CASE("small dataset builds, validates and is reproducible") {
  TempDir a("ds"), b("ds");
  auto cfg = small_dataset_config(6, 99);
  auto m = build_dataset(a.path(), cfg);
  CHECK(m.entries.size() == 6);
  CHECK(m.counts() == split_counts(6, cfg.split));
  CHECK(validate_dataset(a.path()).ok());

  auto back = read_manifest(a.path());
  CHECK(back.entries == m.entries);
  CHECK(back.dataset_id == m.dataset_id);

  for (const auto& e : m.entries) {
    auto in = load_network_input(a.path() / e.files.at("envelope"));
    CHECK(in.samples.rows() == 572);
    auto mask = load_mask(a.path() / e.files.at("mask"));
    CHECK(mask.width() == 64);
    CHECK(e.lesion_count >= 1);
  }

  cfg.threads = 1;
  auto m2 = build_dataset(b.path(), cfg);
  CHECK(m2.dataset_id == m.dataset_id);
  for (const auto& e : m.entries)
    for (const auto& [stage, rel] : e.files) CHECK(read_text_file(a.path() / rel) == read_text_file(b.path() / rel));
  CHECK(read_text_file(a.path() / kManifestFileName) == read_text_file(b.path() / kManifestFileName));
}

TEST_CASE("validation catches tampering") {
  TempDir dir("ds");
  auto m = build_dataset(dir.path(), small_dataset_config(3, 1));
  const auto& e = m.entries.front();
  fs::remove(dir.path() / e.files.at("bmode"));
  std::ofstream(dir.path() / "train" / "stray.bin") << "x";
  auto report = validate_dataset(dir.path());
  CHECK_FALSE(report.ok());
  auto mentions = [&](const std::string& s) {
    return std::any_of(report.problems.begin(), report.problems.end(),
                       [&](const std::string& p) { return p.find(s) != std::string::npos; });
  };
  CHECK(mentions(e.files.at("bmode")));
  CHECK(mentions("stray.bin"));
}

TEST_CASE("mismatched phantom and transducer windows are rejected") {
  auto cfg = small_dataset_config(2, 1);
  cfg.transducer.axial_end_mm = 50.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = small_dataset_config(0, 1);
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("manifest text round trip") {
  DatasetManifest m;
  m.dataset_id = "sim-x";
  m.creation_seed = 18446744073709551615ULL;
  ManifestEntry e;
  e.id = image_id(3);
  e.split = Split::val;
  e.files["mask"] = "val/img00003.mask.u8";
  e.phantom_seed = 77;
  e.lesion_count = 2;
  m.entries.push_back(e);
  m.config["dataset.seed"] = "1";
  auto back = manifest_from_text(manifest_to_text(m));
  CHECK(back.entries == m.entries);
  CHECK(back.creation_seed == m.creation_seed);
  CHECK(back.config == m.config);
  CHECK(image_id(3) == "img00003");
  CHECK_THROWS_AS(manifest_from_text("[]"), ValidationError);
}
