// Copyright 2026 The sonosynth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sonosynth/grid.hpp"

namespace sonosynth {

/// Axis-aligned imaging volume in millimeters. Elevation is centered on 0.
struct RegionExtent {
  double lateral_min_mm = -20.0;
  double lateral_max_mm = 20.0;
  double axial_min_mm = 30.0;
  double axial_max_mm = 90.0;
  double elevation_thickness_mm = 20.0;

  double lateral_span() const { return lateral_max_mm - lateral_min_mm; }
  double axial_span() const { return axial_max_mm - axial_min_mm; }
  double volume_mm3() const { return lateral_span() * axial_span() * elevation_thickness_mm; }

  /// Throws ConfigError unless min < max on every axis and thickness > 0.
  void validate() const;

  friend bool operator==(const RegionExtent&, const RegionExtent&) = default;
};

enum class ClassLabel : std::uint8_t { background = 0, hyperechoic = 1, anechoic = 2 };
inline constexpr int kNumClasses = 3;

enum class LesionShape { circle, ellipse };
enum class Echogenicity { hyperechoic, anechoic };

struct Lesion {
  LesionShape shape = LesionShape::circle;
  double center_lateral_mm = 0.0;
  double center_axial_mm = 0.0;
  double radius_mm = 0.0;  // circle only
  double semi_major_mm = 0.0;  // ellipse only
  double semi_minor_mm = 0.0;  // ellipse only
  double orientation_rad = 0.0;  // ellipse only; major axis angle from the lateral axis
  Echogenicity echogenicity = Echogenicity::anechoic;
  int k = 1;  // amplitude multiplier, hyperechoic only

  /// Membership of a (lateral, axial) point. Ellipses use the rotated implicit equation.
  bool contains(double lateral_mm, double axial_mm) const;
  /// Radius of the smallest centered circle enclosing the lesion.
  double bounding_radius_mm() const;
  double area_mm2() const;
  ClassLabel label() const;

  friend bool operator==(const Lesion&, const Lesion&) = default;
};

struct PhantomSpec {
  RegionExtent extent;
  std::vector<Lesion> lesions;
  double scatterer_density_per_mm3 = 4.0;
  std::uint64_t seed = 0;

  /// Label of the lesion containing the point, background if none.
  ClassLabel label_at(double lateral_mm, double axial_mm) const;

  friend bool operator==(const PhantomSpec&, const PhantomSpec&) = default;
};

/// Ranges that sample_phantom_spec draws from. Defaults follow the
/// 40 x 60 mm field with lesions placed anywhere inside it.
struct PhantomConfig {
  RegionExtent extent;
  double placement_lateral_min_mm = -20.0;
  double placement_lateral_max_mm = 20.0;
  double placement_axial_min_mm = 30.0;
  double placement_axial_max_mm = 90.0;

  int lesion_count_min = 1;
  int lesion_count_max = 6;
  double circle_probability = 0.5;
  double hyperechoic_probability = 0.5;

  double circle_radius_min_mm = 1.0;
  double circle_radius_max_mm = 3.0;
  double ellipse_major_min_mm = 5.0;
  double ellipse_major_max_mm = 9.0;
  double ellipse_minor_min_mm = 1.0;
  double ellipse_minor_max_mm = 5.0;

  int min_k = 1;
  int max_k = 10;

  double scatterer_density_per_mm3 = 4.0;
  int max_placement_attempts = 1000;

  /// Throws ConfigError on empty or inverted ranges.
  void validate() const;
};

struct Point3 {
  double lateral_mm = 0.0;
  double elevation_mm = 0.0;
  double axial_mm = 0.0;

  friend bool operator==(const Point3&, const Point3&) = default;
};

struct ScattererField {
  std::vector<Point3> positions;
  std::vector<double> amplitudes;

  std::size_t size() const { return positions.size(); }
  bool empty() const { return positions.empty(); }
  void append(const ScattererField& other);

  friend bool operator==(const ScattererField&, const ScattererField&) = default;
};

/// Class-index raster. Row index runs along depth, column index along the
/// lateral axis; both axes put their first and last pixel on the extent edges.
struct ClassMask {
  Grid<std::uint8_t> labels;
  AxisMap lateral;
  AxisMap axial;

  std::size_t width() const { return labels.cols(); }
  std::size_t height() const { return labels.rows(); }

  friend bool operator==(const ClassMask&, const ClassMask&) = default;
};

/// Draws lesion count, shapes, sizes, echogenicity and centers. Centers are
/// rejection-sampled until every pair of bounding circles is disjoint; throws
/// PlacementError when a lesion exhausts config.max_placement_attempts.
PhantomSpec sample_phantom_spec(std::uint64_t seed, const PhantomConfig& config);

/// Poisson-distributed scatterer count with mean density * volume, uniform
/// positions, standard-normal base amplitudes scaled by k inside hyperechoic
/// lesions and zeroed inside anechoic ones.
ScattererField place_scatterers(const PhantomSpec& spec);

/// Labels each pixel by whether its center falls inside a lesion.
ClassMask rasterize_mask(const PhantomSpec& spec, std::size_t width = 388, std::size_t height = 388);

/// Human-readable record of every sampled value (JSON).
std::string phantom_to_text(const PhantomSpec& spec);
PhantomSpec phantom_from_text(const std::string& text);

const char* to_string(LesionShape shape);
const char* to_string(Echogenicity echo);

}  // namespace sonosynth
