// Copyright 2026 The sonosynth Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <string>

#include "json.hpp"
#include "sonosynth/metrics.hpp"

namespace sonosynth {

using nlohmann::ordered_json;

namespace {

constexpr const char* kClassNames[kNumClasses] = {"background", "hyperechoic", "anechoic"};

ordered_json score_json(const std::optional<double>& s) { return s ? ordered_json(*s) : ordered_json(nullptr); }

ordered_json cell_json(const CellStats& c) {
  return {{"mean", score_json(c.mean)}, {"std", score_json(c.stddev)}, {"n", c.n}, {"excluded", c.excluded}};
}

std::string display_name(const std::string& modality) {
  if (modality == "envelope") return "Envelope data";
  if (modality == "bmode") return "B-mode image";
  return modality;
}

// Column width in terminal cells; counts UTF-8 lead bytes only.
std::size_t display_width(const std::string& s) {
  std::size_t w = 0;
  for (unsigned char c : s)
    if ((c & 0xC0) != 0x80) ++w;
  return w;
}

std::string pad(const std::string& s, std::size_t width) {
  const std::size_t w = display_width(s);
  return w >= width ? s : s + std::string(width - w, ' ');
}

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

std::string format_cell(const CellStats& cell) {
  if (!cell.mean) return "N/A";
  std::string s = fixed2(*cell.mean) + " ± " + fixed2(cell.stddev.value_or(0.0));
  if (cell.single()) s += " (n=1)";
  return s;
}

std::string report_to_json(const EvalReport& report, bool include_per_image) {
  ordered_json doc;
  doc["dataset_id"] = report.dataset_id;
  doc["split"] = report.split;
  doc["undefined_score_policy"] = kUndefinedScorePolicy;
  auto mods = ordered_json::array();
  for (const auto& m : report.modalities) {
    ordered_json mj;
    mj["modality"] = m.modality;
    mj["n_images"] = m.images.size();
    mj["macro"] = {{"dsc", cell_json(m.macro_dsc)}, {"f2", cell_json(m.macro_f2)}};
    ordered_json classes = ordered_json::object();
    for (int k = 0; k < kNumClasses; ++k) {
      classes[kClassNames[k]] = {{"dsc", cell_json(m.class_dsc[k])}, {"f2", cell_json(m.class_f2[k])}};
    }
    mj["classes"] = std::move(classes);
    if (include_per_image) {
      auto imgs = ordered_json::array();
      for (const auto& img : m.images) {
        ordered_json ij;
        ij["id"] = img.id;
        ij["macro_dsc"] = score_json(img.macro_dsc);
        ij["macro_f2"] = score_json(img.macro_f2);
        ordered_json per = ordered_json::object();
        for (int k = 0; k < kNumClasses; ++k) {
          const auto& c = img.counts[k];
          per[kClassNames[k]] = {{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}, {"tn", c.tn},
                                 {"dsc", score_json(img.dsc[k])}, {"f2", score_json(img.f2[k])}};
        }
        ij["classes"] = std::move(per);
        imgs.push_back(std::move(ij));
      }
      mj["images"] = std::move(imgs);
    }
    mods.push_back(std::move(mj));
  }
  doc["modalities"] = std::move(mods);
  return doc.dump(2) + "\n";
}

std::string report_table(const EvalReport& report) {
  constexpr std::size_t w0 = 18, w1 = 22;
  std::string out;
  out += pad("Predicted Mask", w0) + pad("DSC", w1) + "F2\n";
  out += std::string(w0 - 2, '-') + "  " + std::string(w1 - 2, '-') + "  " + std::string(w1 - 2, '-') + "\n";
  for (const auto& m : report.modalities) {
    out += pad(display_name(m.modality), w0) + pad(format_cell(m.macro_dsc), w1) + format_cell(m.macro_f2) + "\n";
  }
  out += "\nPer class (mean ± sample std over images where the class is defined)\n";
  out += pad("Predicted Mask", w0) + pad("Class", 14) + pad("DSC", w1) + pad("F2", w1) + "excluded\n";
  for (const auto& m : report.modalities) {
    for (int k = 0; k < kNumClasses; ++k) {
      out += pad(display_name(m.modality), w0) + pad(kClassNames[k], 14) + pad(format_cell(m.class_dsc[k]), w1) +
             pad(format_cell(m.class_f2[k]), w1) + std::to_string(m.class_dsc[k].excluded) + "\n";
    }
  }
  return out;
}

std::string report_per_image(const EvalReport& report) {
  std::string out = "modality\tid\tmacro_dsc\tmacro_f2\n";
  auto fmt = [](const std::optional<double>& v) { return v ? fixed2(*v) : std::string("N/A"); };
  for (const auto& m : report.modalities) {
    for (const auto& img : m.images) {
      out += m.modality + "\t" + img.id + "\t" + fmt(img.macro_dsc) + "\t" + fmt(img.macro_f2) + "\n";
    }
  }
  return out;
}

}  // namespace sonosynth
