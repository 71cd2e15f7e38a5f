// Copyright 2026 The sonosynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "sonosynth/raw_io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>
#include <system_error>

#include "json.hpp"
#include "sonosynth/errors.hpp"

namespace sonosynth {

using nlohmann::ordered_json;

namespace {

fs::path temp_path(const fs::path& path) {
  fs::path tmp = path;
  tmp += ".partial";
  return tmp;
}

void commit(const fs::path& tmp, const fs::path& path) {
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move " + tmp.string() + " into place: " + ec.message());
  }
}

void write_bytes(const fs::path& path, const char* data, std::size_t size) {
  const fs::path tmp = temp_path(path);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(data, static_cast<std::streamsize>(size));
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("write failed for " + path.string());
    }
  }
  commit(tmp, path);
}

std::vector<char> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return std::vector<char>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::string header_to_text(const ArrayHeader& header) {
  ordered_json doc;
  doc["format_version"] = kSidecarFormatVersion;
  doc["dtype"] = header.dtype;
  doc["byte_order"] = "little";
  doc["layout"] = header.layout;
  doc["rows"] = header.rows;
  doc["cols"] = header.cols;
  ordered_json attrs = ordered_json::object();
  for (const auto& [k, v] : header.attributes) attrs[k] = v;
  doc["attributes"] = std::move(attrs);
  return doc.dump(2) + "\n";
}

void write_sidecar(const fs::path& data_path, const ArrayHeader& header) {
  write_text_file(sidecar_path(data_path), header_to_text(header));
}

template <typename T>
void write_array(const fs::path& path, std::span<const T> values, const ArrayHeader& header) {
  if (values.size() != header.rows * header.cols) {
    throw ValidationError("array size " + std::to_string(values.size()) + " does not match header " +
                          std::to_string(header.rows) + "x" + std::to_string(header.cols) + " for " + path.string());
  }
  if constexpr (sizeof(T) > 1 && std::endian::native == std::endian::big) {
    std::vector<T> swapped(values.begin(), values.end());
    for (T& v : swapped) {
      auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
      std::reverse(bytes.begin(), bytes.end());
      v = std::bit_cast<T>(bytes);
    }
    write_bytes(path, reinterpret_cast<const char*>(swapped.data()), swapped.size() * sizeof(T));
  } else {
    write_bytes(path, reinterpret_cast<const char*>(values.data()), values.size() * sizeof(T));
  }
  write_sidecar(path, header);
}

template <typename T>
std::vector<T> read_array(const fs::path& path, const char* dtype, ArrayHeader* header_out) {
  ArrayHeader header = read_header(path);
  if (header.dtype != dtype) {
    throw ValidationError(path.string() + ": expected dtype " + dtype + ", sidecar says " + header.dtype);
  }
  const auto bytes = read_bytes(path);
  const std::size_t expected = header.rows * header.cols * sizeof(T);
  if (bytes.size() != expected) {
    throw ValidationError(path.string() + ": " + std::to_string(bytes.size()) + " bytes on disk, sidecar implies " +
                          std::to_string(expected));
  }
  std::vector<T> values(header.rows * header.cols);
  std::memcpy(values.data(), bytes.data(), bytes.size());
  if constexpr (sizeof(T) > 1 && std::endian::native == std::endian::big) {
    for (T& v : values) {
      auto b = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
      std::reverse(b.begin(), b.end());
      v = std::bit_cast<T>(b);
    }
  }
  if (header_out) *header_out = std::move(header);
  return values;
}

const std::string& attribute(const ArrayHeader& header, const std::string& key, const fs::path& path) {
  const auto it = header.attributes.find(key);
  if (it == header.attributes.end()) throw ValidationError(path.string() + ": sidecar lacks attribute '" + key + "'");
  return it->second;
}

double attribute_double(const ArrayHeader& header, const std::string& key, const fs::path& path) {
  return parse_double(attribute(header, key, path));
}

void put_axis(std::map<std::string, std::string>& attrs, const std::string& name, const AxisMap& axis) {
  attrs[name + ".origin_mm"] = format_double(axis.origin_mm);
  attrs[name + ".step_mm"] = format_double(axis.step_mm);
}

AxisMap get_axis(const ArrayHeader& header, const std::string& name, const fs::path& path) {
  return {attribute_double(header, name + ".origin_mm", path), attribute_double(header, name + ".step_mm", path)};
}

}  // namespace

fs::path sidecar_path(const fs::path& data_path) {
  fs::path p = data_path;
  p.replace_extension(".json");
  return p;
}

void write_text_file(const fs::path& path, const std::string& text) { write_bytes(path, text.data(), text.size()); }

std::string read_text_file(const fs::path& path) {
  const auto bytes = read_bytes(path);
  return std::string(bytes.begin(), bytes.end());
}

std::string format_double(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

double parse_double(const std::string& text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  while (first < last && *first == ' ') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) throw ConfigError("not a number: '" + text + "'");
  return value;
}

void write_f32(const fs::path& path, std::span<const float> values, const ArrayHeader& header) {
  ArrayHeader h = header;
  h.dtype = "float32";
  write_array(path, values, h);
}

void write_u8(const fs::path& path, std::span<const std::uint8_t> values, const ArrayHeader& header) {
  ArrayHeader h = header;
  h.dtype = "uint8";
  write_array(path, values, h);
}

ArrayHeader read_header(const fs::path& data_path) {
  const fs::path side = sidecar_path(data_path);
  try {
    const auto doc = ordered_json::parse(read_text_file(side));
    if (doc.at("format_version").get<int>() != kSidecarFormatVersion) {
      throw ValidationError(side.string() + ": unsupported format_version");
    }
    if (doc.at("byte_order").get<std::string>() != "little") throw ValidationError(side.string() + ": byte_order must be little");
    ArrayHeader h;
    h.dtype = doc.at("dtype").get<std::string>();
    h.layout = doc.at("layout").get<std::string>();
    h.rows = doc.at("rows").get<std::size_t>();
    h.cols = doc.at("cols").get<std::size_t>();
    for (const auto& [k, v] : doc.at("attributes").items()) h.attributes[k] = v.get<std::string>();
    return h;
  } catch (const nlohmann::json::exception& ex) {
    throw ValidationError(side.string() + ": malformed sidecar: " + ex.what());
  }
}

std::vector<float> read_f32(const fs::path& path, ArrayHeader* header) { return read_array<float>(path, "float32", header); }

std::vector<std::uint8_t> read_u8(const fs::path& path, ArrayHeader* header) {
  return read_array<std::uint8_t>(path, "uint8", header);
}

void save_image(const fs::path& path, const Image& image, std::map<std::string, std::string> attributes) {
  ArrayHeader h;
  h.rows = image.rows();
  h.cols = image.cols();
  h.layout = "row_major";
  h.attributes = std::move(attributes);
  write_f32(path, image.values(), h);
}

Image load_image(const fs::path& path, ArrayHeader* header) {
  ArrayHeader h;
  auto values = read_f32(path, &h);
  if (h.layout == "line_major") {
    // samples-per-line x lines stored line by line; present as depth x lines.
    Image img(h.rows, h.cols);
    for (std::size_t l = 0; l < h.cols; ++l)
      for (std::size_t s = 0; s < h.rows; ++s) img(s, l) = values[l * h.rows + s];
    if (header) *header = std::move(h);
    return img;
  }
  if (h.layout != "row_major") throw ValidationError(path.string() + ": unknown layout '" + h.layout + "'");
  Image img(h.rows, h.cols, std::move(values));
  if (header) *header = std::move(h);
  return img;
}

void save_network_input(const fs::path& path, const NetworkInput& input) {
  save_image(path, input.samples, {{"kind", "network_input"}, {"modality", to_string(input.provenance)}, {"source_id", input.source_id}});
}

NetworkInput load_network_input(const fs::path& path) {
  ArrayHeader h;
  NetworkInput input;
  input.samples = load_image(path, &h);
  input.provenance = modality_from_string(attribute(h, "modality", path));
  input.source_id = attribute(h, "source_id", path);
  return input;
}

void save_line_frame(const fs::path& path, const LineFrame& frame, std::map<std::string, std::string> attributes) {
  ArrayHeader h;
  h.rows = frame.num_samples;
  h.cols = frame.num_lines;
  h.layout = "line_major";
  h.attributes = std::move(attributes);
  put_axis(h.attributes, "axial", frame.axial);
  put_axis(h.attributes, "lateral", frame.lateral);
  h.attributes["window_samples"] = std::to_string(frame.window_samples);
  write_f32(path, frame.samples, h);
}

LineFrame load_line_frame(const fs::path& path, ArrayHeader* header) {
  ArrayHeader h;
  auto values = read_f32(path, &h);
  if (h.layout != "line_major") throw ValidationError(path.string() + ": expected line_major layout");
  LineFrame frame;
  frame.num_samples = h.rows;
  frame.num_lines = h.cols;
  frame.samples = std::move(values);
  frame.axial = get_axis(h, "axial", path);
  frame.lateral = get_axis(h, "lateral", path);
  frame.window_samples = std::stoull(attribute(h, "window_samples", path));
  if (header) *header = std::move(h);
  return frame;
}

std::map<std::string, std::string> transducer_attributes(const TransducerConfig& c) {
  return {
      {"transducer.num_lines", std::to_string(c.num_lines)},
      {"transducer.axial_start_mm", format_double(c.axial_start_mm)},
      {"transducer.axial_end_mm", format_double(c.axial_end_mm)},
      {"transducer.lateral_min_mm", format_double(c.lateral_min_mm)},
      {"transducer.lateral_max_mm", format_double(c.lateral_max_mm)},
      {"transducer.sound_speed_m_per_s", format_double(c.sound_speed_m_per_s)},
      {"transducer.center_frequency_hz", format_double(c.center_frequency_hz)},
      {"transducer.sampling_frequency_hz", format_double(c.sampling_frequency_hz)},
      {"transducer.fractional_bandwidth", format_double(c.fractional_bandwidth)},
      {"transducer.lateral_beam_sigma_mm", format_double(c.lateral_beam_sigma_mm)},
      {"transducer.elevation_beam_sigma_mm", format_double(c.elevation_beam_sigma_mm)},
      {"transducer.beam_cutoff_sigmas", format_double(c.beam_cutoff_sigmas)},
  };
}

TransducerConfig transducer_from_attributes(const std::map<std::string, std::string>& a) {
  auto get = [&a](const std::string& key) -> const std::string& {
    const auto it = a.find(key);
    if (it == a.end()) throw ValidationError("missing attribute '" + key + "'");
    return it->second;
  };
  TransducerConfig c;
  c.num_lines = std::stoi(get("transducer.num_lines"));
  c.axial_start_mm = parse_double(get("transducer.axial_start_mm"));
  c.axial_end_mm = parse_double(get("transducer.axial_end_mm"));
  c.lateral_min_mm = parse_double(get("transducer.lateral_min_mm"));
  c.lateral_max_mm = parse_double(get("transducer.lateral_max_mm"));
  c.sound_speed_m_per_s = parse_double(get("transducer.sound_speed_m_per_s"));
  c.center_frequency_hz = parse_double(get("transducer.center_frequency_hz"));
  c.sampling_frequency_hz = parse_double(get("transducer.sampling_frequency_hz"));
  c.fractional_bandwidth = parse_double(get("transducer.fractional_bandwidth"));
  c.lateral_beam_sigma_mm = parse_double(get("transducer.lateral_beam_sigma_mm"));
  c.elevation_beam_sigma_mm = parse_double(get("transducer.elevation_beam_sigma_mm"));
  c.beam_cutoff_sigmas = parse_double(get("transducer.beam_cutoff_sigmas"));
  return c;
}

void save_rf_frame(const fs::path& path, const RfFrame& frame) {
  auto attrs = transducer_attributes(frame.config);
  attrs["kind"] = "rf";
  save_line_frame(path, frame, std::move(attrs));
}

RfFrame load_rf_frame(const fs::path& path) {
  ArrayHeader h;
  RfFrame frame;
  static_cast<LineFrame&>(frame) = load_line_frame(path, &h);
  frame.config = transducer_from_attributes(h.attributes);
  return frame;
}

void save_mask(const fs::path& path, const ClassMask& mask) {
  ArrayHeader h;
  h.rows = mask.height();
  h.cols = mask.width();
  h.layout = "row_major";
  h.attributes["kind"] = "mask";
  h.attributes["classes"] = "0=background,1=hyperechoic,2=anechoic";
  put_axis(h.attributes, "axial", mask.axial);
  put_axis(h.attributes, "lateral", mask.lateral);
  write_u8(path, mask.labels.values(), h);
}

ClassMask load_mask(const fs::path& path) {
  ArrayHeader h;
  auto values = read_u8(path, &h);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] >= kNumClasses) {
      throw ValidationError(path.string() + ": label " + std::to_string(values[i]) + " at pixel (row " +
                            std::to_string(i / h.cols) + ", col " + std::to_string(i % h.cols) + ") is outside {0,1,2}");
    }
  }
  ClassMask mask;
  mask.labels = Grid<std::uint8_t>(h.rows, h.cols, std::move(values));
  if (h.attributes.count("axial.origin_mm")) {
    mask.axial = get_axis(h, "axial", path);
    mask.lateral = get_axis(h, "lateral", path);
  } else {
    mask.axial = AxisMap::spanning(0.0, static_cast<double>(h.rows) - 1.0, h.rows);
    mask.lateral = AxisMap::spanning(0.0, static_cast<double>(h.cols) - 1.0, h.cols);
  }
  return mask;
}

}  // namespace sonosynth
