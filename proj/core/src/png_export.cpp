// Copyright 2026 The sonosynth Authors
// SPDX-License-Identifier: Apache-2.0

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstring>

#include "sonosynth/errors.hpp"
#include "sonosynth/raw_io.hpp"

namespace sonosynth {

Gray8 to_gray8(const Image& image, double lo, double hi) {
  if (lo == hi && !image.empty()) {
    const auto [a, b] = std::minmax_element(image.values().begin(), image.values().end());
    lo = *a;
    hi = *b;
  }
  Gray8 out(image.rows(), image.cols(), 0);
  const double span = hi - lo;
  if (!(span > 0.0)) return out;
  for (std::size_t i = 0; i < image.size(); ++i) {
    const double t = std::clamp((static_cast<double>(image.values()[i]) - lo) / span, 0.0, 1.0);
    out.storage()[i] = static_cast<std::uint8_t>(std::lround(t * 255.0));
  }
  return out;
}

Gray8 mask_to_gray8(const Grid<std::uint8_t>& labels) {
  Gray8 out(labels.rows(), labels.cols(), 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    switch (labels.values()[i]) {
      case 1: out.storage()[i] = 255; break;
      case 2: out.storage()[i] = 128; break;
      default: out.storage()[i] = 0; break;
    }
  }
  return out;
}

void write_png(const fs::path& path, const Gray8& image) {
  png_image img;
  std::memset(&img, 0, sizeof(img));
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(image.cols());
  img.height = static_cast<png_uint_32>(image.rows());
  img.format = PNG_FORMAT_GRAY;
  fs::path tmp = path;
  tmp += ".partial";
  if (!png_image_write_to_file(&img, tmp.c_str(), 0, image.values().data(), 0, nullptr)) {
    const std::string msg = img.message;
    png_image_free(&img);
    throw IoError("cannot write PNG " + path.string() + ": " + msg);
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move " + tmp.string() + " into place: " + ec.message());
}

Gray8 read_png(const fs::path& path) {
  png_image img;
  std::memset(&img, 0, sizeof(img));
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&img, path.c_str())) {
    throw IoError("cannot read PNG " + path.string() + ": " + img.message);
  }
  img.format = PNG_FORMAT_GRAY;
  Gray8 out(img.height, img.width, 0);
  if (!png_image_finish_read(&img, nullptr, out.storage().data(), 0, nullptr)) {
    const std::string msg = img.message;
    png_image_free(&img);
    throw IoError("cannot decode PNG " + path.string() + ": " + msg);
  }
  return out;
}

}  // namespace sonosynth
