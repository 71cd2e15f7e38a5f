// Copyright 2026 The sonosynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"
#include "sonosynth/config.hpp"
#include "sonosynth/errors.hpp"

using namespace sonosynth;

TEST_CASE("defaults round trip through the flat map") {
  DatasetConfig d;
  auto m = to_config_map(d);
  CHECK(m.size() == config_keys().size());
  for (const auto& key : config_keys()) CHECK(m.count(key.name) == 1);
  auto back = dataset_config_from_map(m);
  CHECK(to_config_map(back) == m);
  CHECK(parse_config_text(config_to_text(m)) == m);
}

TEST_CASE("config text with comments and overrides") {
  auto m = parse_config_text(
      "# sweep\n"
      "dataset.n_images = 40\n"
      "\n"
      "transducer.center_frequency_hz = 5e6   # higher f0\n");
  apply_override(m, "dataset.n_images=12");
  auto c = dataset_config_from_map(m);
  CHECK(c.n_images == 12);
  CHECK(c.transducer.center_frequency_hz == 5e6);
  CHECK(c.transducer.num_lines == 50);
}

TEST_CASE("unknown keys and bad values are config errors") {
  try {
    parse_config_text("dataset.n_images = 3\nphantom.wobble = 1\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config_text("no equals sign\n"), ConfigError);
  ConfigMap m;
  CHECK_THROWS_AS(apply_override(m, "nokey"), ConfigError);
  CHECK_THROWS_AS(apply_override(m, "bogus.key=1"), ConfigError);
  m["dataset.n_images"] = "twelve";
  CHECK_THROWS_AS(dataset_config_from_map(m), ConfigError);
  m["dataset.n_images"] = "-3";
  CHECK_THROWS_AS(dataset_config_from_map(m), ConfigError);
}

TEST_CASE("split fractions must sum to one") {
  ConfigMap m;
  m["dataset.split_train"] = "0.7";
  auto c = dataset_config_from_map(m);
  CHECK_THROWS_AS(c.validate(), ConfigError);
  CHECK(is_config_key("run.threads"));
  CHECK_FALSE(is_config_key("run.speed"));
}
