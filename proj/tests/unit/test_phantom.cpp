// Copyright 2026 The sonosynth Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>
#include <set>

#include "doctest.h"
#include "sonosynth/errors.hpp"
#include "sonosynth/phantom.hpp"
#include "sonosynth/random.hpp"

using namespace sonosynth;

namespace {

Lesion circle(double x, double z, double r, Echogenicity e = Echogenicity::anechoic, int k = 1) {
  Lesion l;
  l.shape = LesionShape::circle;
  l.center_lateral_mm = x;
  l.center_axial_mm = z;
  l.radius_mm = r;
  l.echogenicity = e;
  l.k = k;
  return l;
}

}  // namespace

TEST_CASE("derive_seed separates indices and streams") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(derive_seed(7, i));
  CHECK(seen.size() == 1000);
  CHECK(derive_seed(7, 3, 1) != derive_seed(7, 3, 2));
  CHECK(derive_seed(7, 3, 1) == derive_seed(7, 3, 1));
  CHECK(derive_seed(7, 3) != derive_seed(8, 3));
}

TEST_CASE("ellipse membership uses the rotated frame") {
  Lesion e;
  e.shape = LesionShape::ellipse;
  e.center_lateral_mm = 0.0;
  e.center_axial_mm = 60.0;
  e.semi_major_mm = 6.0;
  e.semi_minor_mm = 2.0;
  e.orientation_rad = std::numbers::pi / 2;  // major axis along depth
  CHECK(e.contains(0.0, 65.5));
  CHECK_FALSE(e.contains(5.5, 60.0));
  CHECK(e.contains(1.9, 60.0));
  CHECK(e.bounding_radius_mm() == doctest::Approx(6.0));
  CHECK(e.area_mm2() == doctest::Approx(std::numbers::pi * 12.0));
}

TEST_CASE("sampled specs respect the configured ranges") {
  PhantomConfig cfg;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    PhantomSpec spec;
    try {
      spec = sample_phantom_spec(seed, cfg);
    } catch (const PlacementError&) {
      continue;
    }
    REQUIRE(spec.lesions.size() >= 1);
    REQUIRE(spec.lesions.size() <= 6);
    for (std::size_t i = 0; i < spec.lesions.size(); ++i) {
      const Lesion& a = spec.lesions[i];
      CHECK(a.center_lateral_mm >= -20.0);
      CHECK(a.center_lateral_mm <= 20.0);
      CHECK(a.center_axial_mm >= 30.0);
      CHECK(a.center_axial_mm <= 90.0);
      if (a.shape == LesionShape::circle) {
        CHECK(a.radius_mm >= 1.0);
        CHECK(a.radius_mm <= 3.0);
      } else {
        CHECK(a.semi_major_mm >= 5.0);
        CHECK(a.semi_major_mm <= 9.0);
        CHECK(a.semi_minor_mm <= a.semi_major_mm);
      }
      if (a.echogenicity == Echogenicity::hyperechoic) {
        CHECK(a.k >= 1);
        CHECK(a.k <= 10);
      }
      for (std::size_t j = i + 1; j < spec.lesions.size(); ++j) {
        const Lesion& b = spec.lesions[j];
        double d = std::hypot(a.center_lateral_mm - b.center_lateral_mm, a.center_axial_mm - b.center_axial_mm);
        CHECK(d >= a.bounding_radius_mm() + b.bounding_radius_mm());
      }
    }
  }
}

TEST_CASE("zero lesions gives an all-background mask") {
  PhantomConfig cfg;
  cfg.lesion_count_min = 0;
  cfg.lesion_count_max = 0;
  auto spec = sample_phantom_spec(4, cfg);
  CHECK(spec.lesions.empty());
  auto mask = rasterize_mask(spec);
  for (auto v : mask.labels.values()) CHECK(v == 0);
}

TEST_CASE("same seed gives the same spec and scatterers") {
  PhantomConfig cfg;
  cfg.extent.elevation_thickness_mm = 2.0;
  auto a = sample_phantom_spec(11, cfg);
  auto b = sample_phantom_spec(11, cfg);
  CHECK(a == b);
  CHECK(place_scatterers(a) == place_scatterers(b));
  CHECK_FALSE(sample_phantom_spec(12, cfg) == a);
}

TEST_CASE("impossible placement raises PlacementError with the lesion index") {
  PhantomConfig cfg;
  cfg.placement_lateral_min_mm = -1.0;
  cfg.placement_lateral_max_mm = 1.0;
  cfg.placement_axial_min_mm = 59.0;
  cfg.placement_axial_max_mm = 61.0;
  cfg.lesion_count_min = 6;
  cfg.lesion_count_max = 6;
  cfg.circle_probability = 1.0;
  cfg.max_placement_attempts = 50;
  try {
    sample_phantom_spec(1, cfg);
    FAIL("expected PlacementError");
  } catch (const PlacementError& e) {
    CHECK(e.lesion_index() >= 1);
    CHECK(e.lesion_index() < 6);
  }
}

TEST_CASE("config validation rejects inverted ranges") {
  PhantomConfig cfg;
  cfg.circle_radius_min_mm = 4.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.lesion_count_min = 4;
  cfg.lesion_count_max = 3;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.extent.elevation_thickness_mm = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("scatterer count is Poisson around density times volume") {
  PhantomSpec spec;
  spec.extent.elevation_thickness_mm = 5.0;
  const double expected = 4.0 * 40.0 * 5.0 * 60.0;  // 48000
  double sum = 0.0;
  const int runs = 100;
  for (int s = 0; s < runs; ++s) {
    spec.seed = static_cast<std::uint64_t>(s);
    double n = static_cast<double>(place_scatterers(spec).size());
    CHECK(std::abs(n - expected) < 5.0 * std::sqrt(expected));
    sum += n;
  }
  CHECK(std::abs(sum / runs - expected) < 0.01 * expected);
}

TEST_CASE("scatterers fill the extent uniformly") {
  PhantomSpec spec;
  spec.extent.elevation_thickness_mm = 5.0;
  spec.seed = 3;
  auto field = place_scatterers(spec);
  double lat = 0, ax = 0, el = 0;
  for (const auto& p : field.positions) {
    REQUIRE(p.lateral_mm >= -20.0);
    REQUIRE(p.lateral_mm <= 20.0);
    REQUIRE(p.axial_mm >= 30.0);
    REQUIRE(p.axial_mm <= 90.0);
    REQUIRE(std::abs(p.elevation_mm) <= 2.5);
    lat += p.lateral_mm;
    ax += p.axial_mm;
    el += p.elevation_mm;
  }
  double n = static_cast<double>(field.size());
  CHECK(std::abs(lat / n) < 0.1);
  CHECK(ax / n == doctest::Approx(60.0).epsilon(0.005));
  CHECK(std::abs(el / n) < 0.05);
}

TEST_CASE("hyperechoic amplitude scales by k, anechoic is empty") {
  PhantomSpec spec;
  spec.extent.elevation_thickness_mm = 5.0;
  spec.scatterer_density_per_mm3 = 20.0;
  spec.seed = 5;
  spec.lesions.push_back(circle(-10.0, 60.0, 8.0, Echogenicity::hyperechoic, 10));
  spec.lesions.push_back(circle(10.0, 60.0, 5.0, Echogenicity::anechoic));
  auto field = place_scatterers(spec);
  double in2 = 0, out2 = 0;
  std::size_t nin = 0, nout = 0;
  for (std::size_t i = 0; i < field.size(); ++i) {
    const auto& p = field.positions[i];
    double a = field.amplitudes[i];
    if (spec.lesions[1].contains(p.lateral_mm, p.axial_mm)) {
      CHECK(a == 0.0);
    } else if (spec.lesions[0].contains(p.lateral_mm, p.axial_mm)) {
      in2 += a * a;
      ++nin;
    } else {
      out2 += a * a;
      ++nout;
    }
  }
  REQUIRE(nin > 10000);
  double ratio = std::sqrt((in2 / nin) / (out2 / nout));
  CHECK(ratio == doctest::Approx(10.0).epsilon(0.05));
}

TEST_CASE("rasterized circle area matches pi r^2") {
  for (double r : {2.0, 3.0, 5.0}) {
    PhantomSpec spec;
    spec.lesions.push_back(circle(1.3, 58.0, r));
    auto mask = rasterize_mask(spec);
    REQUIRE(mask.width() == 388);
    REQUIRE(mask.height() == 388);
    std::size_t count = 0;
    for (auto v : mask.labels.values()) count += v == 2;
    double px = mask.lateral.step_mm * mask.axial.step_mm;
    CHECK(count * px == doctest::Approx(std::numbers::pi * r * r).epsilon(0.02));
  }
}

TEST_CASE("mask axes span the extent edge to edge") {
  PhantomSpec spec;
  auto mask = rasterize_mask(spec);
  CHECK(mask.lateral.at(0) == doctest::Approx(-20.0));
  CHECK(mask.lateral.at(387) == doctest::Approx(20.0));
  CHECK(mask.axial.at(0) == doctest::Approx(30.0));
  CHECK(mask.axial.at(387) == doctest::Approx(90.0));
  for (auto v : mask.labels.values()) CHECK(v == 0);
}

TEST_CASE("phantom text round trip") {
  PhantomConfig cfg;
  auto spec = sample_phantom_spec(0xfeedfacecafebeefULL, cfg);
  auto back = phantom_from_text(phantom_to_text(spec));
  CHECK(back == spec);
  CHECK_THROWS_AS(phantom_from_text("{not json"), ValidationError);
}
