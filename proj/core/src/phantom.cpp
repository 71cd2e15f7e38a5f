// Copyright 2026 The sonosynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "sonosynth/phantom.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "sonosynth/errors.hpp"
#include "sonosynth/random.hpp"

namespace sonosynth {

namespace {

enum : std::uint64_t { kLesionStream = 1, kScattererStream = 2 };

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

void require_range(double lo, double hi, const char* name) {
  require(std::isfinite(lo) && std::isfinite(hi) && lo <= hi,
          std::string("phantom config: ") + name + " range is empty or not finite");
}

}  // namespace

void RegionExtent::validate() const {
  require(lateral_min_mm < lateral_max_mm, "region extent: lateral_min must be below lateral_max");
  require(axial_min_mm < axial_max_mm, "region extent: axial_min must be below axial_max");
  require(elevation_thickness_mm > 0.0, "region extent: elevation thickness must be positive");
}

bool Lesion::contains(double lateral_mm, double axial_mm) const {
  const double dx = lateral_mm - center_lateral_mm;
  const double dz = axial_mm - center_axial_mm;
  if (shape == LesionShape::circle) return dx * dx + dz * dz <= radius_mm * radius_mm;
  const double c = std::cos(orientation_rad);
  const double s = std::sin(orientation_rad);
  const double u = (dx * c + dz * s) / semi_major_mm;
  const double v = (-dx * s + dz * c) / semi_minor_mm;
  return u * u + v * v <= 1.0;
}

double Lesion::bounding_radius_mm() const {
  return shape == LesionShape::circle ? radius_mm : semi_major_mm;
}

double Lesion::area_mm2() const {
  return shape == LesionShape::circle ? std::numbers::pi * radius_mm * radius_mm
                                      : std::numbers::pi * semi_major_mm * semi_minor_mm;
}

ClassLabel Lesion::label() const {
  return echogenicity == Echogenicity::hyperechoic ? ClassLabel::hyperechoic : ClassLabel::anechoic;
}

ClassLabel PhantomSpec::label_at(double lateral_mm, double axial_mm) const {
  for (const auto& lesion : lesions) {
    if (lesion.contains(lateral_mm, axial_mm)) return lesion.label();
  }
  return ClassLabel::background;
}

void PhantomConfig::validate() const {
  extent.validate();
  require_range(placement_lateral_min_mm, placement_lateral_max_mm, "placement lateral");
  require_range(placement_axial_min_mm, placement_axial_max_mm, "placement axial");
  require(lesion_count_min >= 0 && lesion_count_min <= lesion_count_max, "phantom config: lesion count range is invalid");
  require(circle_probability >= 0.0 && circle_probability <= 1.0, "phantom config: circle_probability must be in [0, 1]");
  require(hyperechoic_probability >= 0.0 && hyperechoic_probability <= 1.0,
          "phantom config: hyperechoic_probability must be in [0, 1]");
  require_range(circle_radius_min_mm, circle_radius_max_mm, "circle radius");
  require_range(ellipse_major_min_mm, ellipse_major_max_mm, "ellipse semi-major");
  require_range(ellipse_minor_min_mm, ellipse_minor_max_mm, "ellipse semi-minor");
  require(circle_radius_min_mm > 0.0 && ellipse_minor_min_mm > 0.0, "phantom config: lesion sizes must be positive");
  require(ellipse_minor_max_mm <= ellipse_major_min_mm, "phantom config: ellipse semi-minor range must not exceed semi-major range");
  require(min_k >= 1 && min_k <= max_k, "phantom config: k range must satisfy 1 <= min_k <= max_k");
  require(scatterer_density_per_mm3 > 0.0 && std::isfinite(scatterer_density_per_mm3),
          "phantom config: scatterer density must be positive");
  require(max_placement_attempts >= 1, "phantom config: max_placement_attempts must be >= 1");
}

PhantomSpec sample_phantom_spec(std::uint64_t seed, const PhantomConfig& config) {
  config.validate();

  Rng rng(derive_seed(seed, 0, kLesionStream));
  auto uniform = [&rng](double lo, double hi) { return lo == hi ? lo : std::uniform_real_distribution<double>(lo, hi)(rng); };
  auto bernoulli = [&rng](double p) { return std::bernoulli_distribution(p)(rng); };

  PhantomSpec spec;
  spec.extent = config.extent;
  spec.scatterer_density_per_mm3 = config.scatterer_density_per_mm3;
  spec.seed = seed;

  const int count = std::uniform_int_distribution<int>(config.lesion_count_min, config.lesion_count_max)(rng);
  spec.lesions.reserve(static_cast<std::size_t>(count));

  for (int i = 0; i < count; ++i) {
    Lesion lesion;
    if (bernoulli(config.circle_probability)) {
      lesion.shape = LesionShape::circle;
      lesion.radius_mm = uniform(config.circle_radius_min_mm, config.circle_radius_max_mm);
    } else {
      lesion.shape = LesionShape::ellipse;
      lesion.semi_major_mm = uniform(config.ellipse_major_min_mm, config.ellipse_major_max_mm);
      lesion.semi_minor_mm = uniform(config.ellipse_minor_min_mm, config.ellipse_minor_max_mm);
      lesion.orientation_rad = uniform(0.0, std::numbers::pi);
    }
    if (bernoulli(config.hyperechoic_probability)) {
      lesion.echogenicity = Echogenicity::hyperechoic;
      lesion.k = std::uniform_int_distribution<int>(config.min_k, config.max_k)(rng);
    } else {
      lesion.echogenicity = Echogenicity::anechoic;
      lesion.k = 0;
    }

    bool placed = false;
    for (int attempt = 0; attempt < config.max_placement_attempts && !placed; ++attempt) {
      lesion.center_lateral_mm = uniform(config.placement_lateral_min_mm, config.placement_lateral_max_mm);
      lesion.center_axial_mm = uniform(config.placement_axial_min_mm, config.placement_axial_max_mm);
      placed = true;
      for (const auto& other : spec.lesions) {
        const double min_gap = lesion.bounding_radius_mm() + other.bounding_radius_mm();
        if (std::hypot(lesion.center_lateral_mm - other.center_lateral_mm, lesion.center_axial_mm - other.center_axial_mm) <
            min_gap) {
          placed = false;
          break;
        }
      }
    }
    if (!placed) throw PlacementError(static_cast<std::size_t>(i), static_cast<std::size_t>(config.max_placement_attempts));
    spec.lesions.push_back(lesion);
  }
  return spec;
}

void ScattererField::append(const ScattererField& other) {
  positions.insert(positions.end(), other.positions.begin(), other.positions.end());
  amplitudes.insert(amplitudes.end(), other.amplitudes.begin(), other.amplitudes.end());
}

ScattererField place_scatterers(const PhantomSpec& spec) {
  spec.extent.validate();
  if (!(spec.scatterer_density_per_mm3 > 0.0)) throw ConfigError("scatterer density must be positive");

  const RegionExtent& e = spec.extent;
  Rng rng(derive_seed(spec.seed, 0, kScattererStream));
  const double expected = spec.scatterer_density_per_mm3 * e.volume_mm3();
  const auto count = static_cast<std::size_t>(std::poisson_distribution<long long>(expected)(rng));

  std::uniform_real_distribution<double> lateral(e.lateral_min_mm, e.lateral_max_mm);
  std::uniform_real_distribution<double> elevation(-0.5 * e.elevation_thickness_mm, 0.5 * e.elevation_thickness_mm);
  std::uniform_real_distribution<double> axial(e.axial_min_mm, e.axial_max_mm);
  std::normal_distribution<double> base(0.0, 1.0);

  ScattererField field;
  field.positions.reserve(count);
  field.amplitudes.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Point3 p;
    p.lateral_mm = lateral(rng);
    p.elevation_mm = elevation(rng);
    p.axial_mm = axial(rng);
    double amplitude = base(rng);
    for (const auto& lesion : spec.lesions) {
      if (lesion.contains(p.lateral_mm, p.axial_mm)) {
        amplitude = lesion.echogenicity == Echogenicity::hyperechoic ? amplitude * lesion.k : 0.0;
        break;
      }
    }
    field.positions.push_back(p);
    field.amplitudes.push_back(amplitude);
  }
  return field;
}

ClassMask rasterize_mask(const PhantomSpec& spec, std::size_t width, std::size_t height) {
  if (width == 0 || height == 0) throw ConfigError("mask dimensions must be positive");
  ClassMask mask;
  mask.labels = Grid<std::uint8_t>(height, width, 0);
  mask.lateral = AxisMap::spanning(spec.extent.lateral_min_mm, spec.extent.lateral_max_mm, width);
  mask.axial = AxisMap::spanning(spec.extent.axial_min_mm, spec.extent.axial_max_mm, height);
  if (spec.lesions.empty()) return mask;

  for (std::size_t r = 0; r < height; ++r) {
    const double z = mask.axial.at(static_cast<double>(r));
    for (std::size_t c = 0; c < width; ++c) {
      mask.labels(r, c) = static_cast<std::uint8_t>(spec.label_at(mask.lateral.at(static_cast<double>(c)), z));
    }
  }
  return mask;
}

const char* to_string(LesionShape shape) { return shape == LesionShape::circle ? "circle" : "ellipse"; }

const char* to_string(Echogenicity echo) {
  return echo == Echogenicity::hyperechoic ? "hyperechoic" : "anechoic";
}

}  // namespace sonosynth
