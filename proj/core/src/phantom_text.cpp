// Copyright 2026 The sonosynth Authors
// SPDX-License-Identifier: Apache-2.0

#include <string>

#include "json.hpp"
#include "sonosynth/errors.hpp"
#include "sonosynth/phantom.hpp"

namespace sonosynth {

using nlohmann::ordered_json;

std::string phantom_to_text(const PhantomSpec& spec) {
  ordered_json doc;
  doc["format_version"] = 1;
  doc["seed"] = std::to_string(spec.seed);
  doc["scatterer_density_per_mm3"] = spec.scatterer_density_per_mm3;
  doc["extent"] = {
      {"lateral_min_mm", spec.extent.lateral_min_mm},
      {"lateral_max_mm", spec.extent.lateral_max_mm},
      {"axial_min_mm", spec.extent.axial_min_mm},
      {"axial_max_mm", spec.extent.axial_max_mm},
      {"elevation_thickness_mm", spec.extent.elevation_thickness_mm},
  };
  auto lesions = ordered_json::array();
  for (const auto& l : spec.lesions) {
    ordered_json j;
    j["shape"] = to_string(l.shape);
    j["center_lateral_mm"] = l.center_lateral_mm;
    j["center_axial_mm"] = l.center_axial_mm;
    if (l.shape == LesionShape::circle) {
      j["radius_mm"] = l.radius_mm;
    } else {
      j["semi_major_mm"] = l.semi_major_mm;
      j["semi_minor_mm"] = l.semi_minor_mm;
      j["orientation_rad"] = l.orientation_rad;
    }
    j["echogenicity"] = to_string(l.echogenicity);
    if (l.echogenicity == Echogenicity::hyperechoic) j["k"] = l.k;
    lesions.push_back(std::move(j));
  }
  doc["lesions"] = std::move(lesions);
  return doc.dump(2) + "\n";
}

PhantomSpec phantom_from_text(const std::string& text) {
  try {
    const auto doc = ordered_json::parse(text);
    PhantomSpec spec;
    spec.seed = std::stoull(doc.at("seed").get<std::string>());
    spec.scatterer_density_per_mm3 = doc.at("scatterer_density_per_mm3").get<double>();
    const auto& e = doc.at("extent");
    spec.extent.lateral_min_mm = e.at("lateral_min_mm").get<double>();
    spec.extent.lateral_max_mm = e.at("lateral_max_mm").get<double>();
    spec.extent.axial_min_mm = e.at("axial_min_mm").get<double>();
    spec.extent.axial_max_mm = e.at("axial_max_mm").get<double>();
    spec.extent.elevation_thickness_mm = e.at("elevation_thickness_mm").get<double>();
    for (const auto& j : doc.at("lesions")) {
      Lesion l;
      const auto shape = j.at("shape").get<std::string>();
      if (shape == "circle") {
        l.shape = LesionShape::circle;
        l.radius_mm = j.at("radius_mm").get<double>();
      } else if (shape == "ellipse") {
        l.shape = LesionShape::ellipse;
        l.semi_major_mm = j.at("semi_major_mm").get<double>();
        l.semi_minor_mm = j.at("semi_minor_mm").get<double>();
        l.orientation_rad = j.at("orientation_rad").get<double>();
      } else {
        throw ValidationError("phantom: unknown lesion shape '" + shape + "'");
      }
      l.center_lateral_mm = j.at("center_lateral_mm").get<double>();
      l.center_axial_mm = j.at("center_axial_mm").get<double>();
      const auto echo = j.at("echogenicity").get<std::string>();
      if (echo == "hyperechoic") {
        l.echogenicity = Echogenicity::hyperechoic;
        l.k = j.at("k").get<int>();
      } else if (echo == "anechoic") {
        l.echogenicity = Echogenicity::anechoic;
        l.k = 0;
      } else {
        throw ValidationError("phantom: unknown echogenicity '" + echo + "'");
      }
      spec.lesions.push_back(l);
    }
    return spec;
  } catch (const nlohmann::json::exception& ex) {
    throw ValidationError(std::string("phantom: malformed record: ") + ex.what());
  }
}

}  // namespace sonosynth
