// Copyright 2026 The sonosynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "sonosynth/external.hpp"

#include <set>

#include "json.hpp"
#include "sonosynth/errors.hpp"
#include "sonosynth/raw_io.hpp"

namespace sonosynth {

namespace {

bool is_png(const fs::path& p) {
  auto ext = p.extension().string();
  for (auto& ch : ext) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return ext == ".png";
}

Image load_external_image(const fs::path& path) {
  if (!fs::exists(path)) throw IoError("external image not found: " + path.string());
  if (is_png(path)) {
    const Gray8 gray = read_png(path);
    Image img(gray.rows(), gray.cols());
    for (std::size_t i = 0; i < gray.size(); ++i) img.storage()[i] = static_cast<float>(gray.values()[i]) / 255.0f;
    return img;
  }
  return load_image(path);
}

Grid<std::uint8_t> load_external_mask(const fs::path& path) {
  if (!fs::exists(path)) throw IoError("external mask not found: " + path.string());
  if (!is_png(path)) return load_mask(path).labels;
  Gray8 labels = read_png(path);
  for (std::size_t r = 0; r < labels.rows(); ++r) {
    for (std::size_t c = 0; c < labels.cols(); ++c) {
      if (labels(r, c) >= kNumClasses) {
        throw ValidationError(path.string() + ": label " + std::to_string(labels(r, c)) + " at pixel (row " +
                              std::to_string(r) + ", col " + std::to_string(c) + ") is outside {0,1,2}");
      }
    }
  }
  return labels;
}

}  // namespace

std::vector<ExternalRecord> load_external_records(const fs::path& list_file) {
  const fs::path base = list_file.parent_path();
  try {
    const auto doc = nlohmann::json::parse(read_text_file(list_file));
    if (!doc.is_array()) throw ValidationError(list_file.string() + ": expected a JSON array of records");
    std::vector<ExternalRecord> out;
    for (const auto& j : doc) {
      ExternalRecord r;
      r.id = j.at("id").get<std::string>();
      r.modality = modality_from_string(j.at("modality").get<std::string>());
      r.image = base / j.at("image").get<std::string>();
      r.mask = base / j.at("mask").get<std::string>();
      r.note = j.value("note", std::string{});
      out.push_back(std::move(r));
    }
    return out;
  } catch (const nlohmann::json::exception& ex) {
    throw ValidationError(list_file.string() + ": malformed record list: " + ex.what());
  }
}

std::vector<IngestedImage> ingest_external(const std::vector<ExternalRecord>& records, const IngestOptions& options) {
  if (!(options.dynamic_range_db > 0.0)) throw ConfigError("ingest: dynamic range must be positive");
  std::set<std::string> ids;
  std::vector<IngestedImage> out;
  out.reserve(records.size());
  for (const auto& record : records) {
    if (record.id.empty()) throw ValidationError("external record with empty id");
    if (!ids.insert(record.id).second) throw ValidationError("duplicate external record id " + record.id);

    const Image image = load_external_image(record.image);
    const Grid<std::uint8_t> labels = load_external_mask(record.mask);
    const bool same_as_image = labels.rows() == image.rows() && labels.cols() == image.cols();
    const bool already_sized = labels.rows() == options.mask_size && labels.cols() == options.mask_size;
    if (!same_as_image && !already_sized) {
      throw ValidationError(record.mask.string() + ": mask is " + std::to_string(labels.rows()) + "x" +
                            std::to_string(labels.cols()) + " but image " + record.image.string() + " is " +
                            std::to_string(image.rows()) + "x" + std::to_string(image.cols()));
    }

    IngestedImage item;
    item.id = record.id;
    item.modality = record.modality;
    item.note = record.note;
    item.input = prepare_network_input(image, record.modality, record.id);
    if (options.derive_bmode && record.modality == Modality::envelope) {
      item.derived_bmode = prepare_network_input(log_compress(image, options.dynamic_range_db), Modality::bmode, record.id);
    }
    item.mask.labels = resize_nearest(labels, options.mask_size, options.mask_size);
    item.mask.axial = AxisMap::spanning(0.0, static_cast<double>(image.rows() - 1), options.mask_size);
    item.mask.lateral = AxisMap::spanning(0.0, static_cast<double>(image.cols() - 1), options.mask_size);
    out.push_back(std::move(item));
  }
  return out;
}

DatasetManifest write_external_set(const fs::path& root, const std::vector<IngestedImage>& images) {
  DatasetManifest manifest;
  manifest.source = "external";
  manifest.split = {0.0, 0.0, 1.0};
  std::string ids;
  for (const auto& img : images) ids += img.id + ";";
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : ids) h = (h ^ c) * 0x100000001b3ULL;
  char buf[24];
  std::snprintf(buf, sizeof(buf), "ext-%016llx", static_cast<unsigned long long>(h));
  manifest.dataset_id = buf;

  const fs::path dir = root / to_string(Split::test);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  std::size_t mask_size = kMaskSize;
  for (const auto& img : images) {
    ManifestEntry entry;
    entry.id = img.id;
    entry.split = Split::test;
    entry.modality = to_string(img.modality);
    entry.note = img.note;
    auto put = [&](const std::string& stage, const std::string& file) {
      const fs::path path = dir / file;
      entry.files[stage] = "test/" + file;
      entry.files[stage + ".header"] = "test/" + sidecar_path(path).filename().string();
      return path;
    };
    const std::string stage = to_string(img.modality);
    save_network_input(put(stage, img.id + "." + stage + ".f32"), img.input);
    if (img.derived_bmode) save_network_input(put("bmode", img.id + ".bmode.f32"), *img.derived_bmode);
    save_mask(put("mask", img.id + ".mask.u8"), img.mask);
    mask_size = img.mask.width();
    manifest.entries.push_back(std::move(entry));
  }
  manifest.config["mask.size"] = std::to_string(mask_size);
  write_manifest(root, manifest);
  return manifest;
}

}  // namespace sonosynth
