// Copyright 2026 The sonosynth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sonosynth/grid.hpp"
#include "sonosynth/phantom.hpp"

namespace sonosynth {

using LabelGrid = Grid<std::uint8_t>;

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const { return tp + fp + fn + tn; }

  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

/// One-vs-rest counts for `class_id`. Throws ValidationError naming both
/// shapes when the rasters differ in size.
ConfusionCounts confusion(const LabelGrid& pred, const LabelGrid& truth, std::uint8_t class_id);
ConfusionCounts confusion(const ClassMask& pred, const ClassMask& truth, std::uint8_t class_id);

/// 2TP / (2TP + FP + FN); nullopt when the class is absent from both masks.
std::optional<double> dsc(const ConfusionCounts& c);
/// 5TP / (5TP + 4FN + FP); nullopt when the denominator is zero.
std::optional<double> f2(const ConfusionCounts& c);

inline constexpr std::array<std::uint8_t, 2> kLesionClasses = {1, 2};

struct ImageScores {
  std::string id;
  std::array<ConfusionCounts, kNumClasses> counts{};
  std::array<std::optional<double>, kNumClasses> dsc{};
  std::array<std::optional<double>, kNumClasses> f2{};
  // Mean over the defined lesion-class scores of this image.
  std::optional<double> macro_dsc;
  std::optional<double> macro_f2;
};

ImageScores score_image(const std::string& id, const LabelGrid& pred, const LabelGrid& truth);

/// Mean and sample standard deviation (n - 1) over the defined scores.
struct CellStats {
  std::optional<double> mean;
  std::optional<double> stddev;  // 0 when n == 1
  std::size_t n = 0;
  std::size_t excluded = 0;  // undefined scores left out

  bool single() const { return n == 1; }
};

CellStats aggregate(std::span<const std::optional<double>> scores);

struct ModalityReport {
  std::string modality;
  std::vector<ImageScores> images;
  std::array<CellStats, kNumClasses> class_dsc{};
  std::array<CellStats, kNumClasses> class_f2{};
  CellStats macro_dsc;  // headline
  CellStats macro_f2;
};

ModalityReport summarize(std::string modality, std::vector<ImageScores> images);

struct EvalReport {
  std::string dataset_id;
  std::string split;
  std::vector<ModalityReport> modalities;
};

inline constexpr const char* kUndefinedScorePolicy =
    "scores with a zero denominator (class absent from prediction and truth) are "
    "excluded from means and counted under 'excluded'; standard deviations are "
    "sample (n-1); the headline is the macro average over lesion classes 1 and 2";

/// Machine-readable report (JSON).
std::string report_to_json(const EvalReport& report, bool include_per_image = true);
/// Aligned table with one row per modality: mean +- std of DSC and F2.
std::string report_table(const EvalReport& report);
/// One line per image and modality.
std::string report_per_image(const EvalReport& report);

/// "0.85 ± 0.16", "0.85 ± 0.00 (n=1)", or "N/A".
std::string format_cell(const CellStats& cell);

}  // namespace sonosynth
