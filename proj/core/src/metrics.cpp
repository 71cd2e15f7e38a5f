// Copyright 2026 The sonosynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "sonosynth/metrics.hpp"

#include <cmath>
#include <string>

#include "sonosynth/errors.hpp"

namespace sonosynth {

ConfusionCounts confusion(const LabelGrid& pred, const LabelGrid& truth, std::uint8_t class_id) {
  if (pred.rows() != truth.rows() || pred.cols() != truth.cols()) {
    throw ValidationError("mask shape mismatch: prediction is " + std::to_string(pred.rows()) + "x" +
                          std::to_string(pred.cols()) + ", truth is " + std::to_string(truth.rows()) + "x" +
                          std::to_string(truth.cols()));
  }
  ConfusionCounts c;
  const auto p = pred.values();
  const auto t = truth.values();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const bool in_pred = p[i] == class_id;
    const bool in_truth = t[i] == class_id;
    if (in_pred && in_truth) {
      ++c.tp;
    } else if (in_pred) {
      ++c.fp;
    } else if (in_truth) {
      ++c.fn;
    } else {
      ++c.tn;
    }
  }
  return c;
}

ConfusionCounts confusion(const ClassMask& pred, const ClassMask& truth, std::uint8_t class_id) {
  return confusion(pred.labels, truth.labels, class_id);
}

std::optional<double> dsc(const ConfusionCounts& c) {
  const std::uint64_t denom = 2 * c.tp + c.fp + c.fn;
  if (denom == 0) return std::nullopt;
  return static_cast<double>(2 * c.tp) / static_cast<double>(denom);
}

std::optional<double> f2(const ConfusionCounts& c) {
  const std::uint64_t denom = 5 * c.tp + 4 * c.fn + c.fp;
  if (denom == 0) return std::nullopt;
  return static_cast<double>(5 * c.tp) / static_cast<double>(denom);
}

ImageScores score_image(const std::string& id, const LabelGrid& pred, const LabelGrid& truth) {
  ImageScores s;
  s.id = id;
  for (int k = 0; k < kNumClasses; ++k) {
    s.counts[k] = confusion(pred, truth, static_cast<std::uint8_t>(k));
    s.dsc[k] = dsc(s.counts[k]);
    s.f2[k] = f2(s.counts[k]);
  }
  auto macro = [](const std::array<std::optional<double>, kNumClasses>& scores) -> std::optional<double> {
    double sum = 0.0;
    int n = 0;
    for (auto k : kLesionClasses) {
      if (scores[k]) {
        sum += *scores[k];
        ++n;
      }
    }
    if (n == 0) return std::nullopt;
    return sum / n;
  };
  s.macro_dsc = macro(s.dsc);
  s.macro_f2 = macro(s.f2);
  return s;
}

CellStats aggregate(std::span<const std::optional<double>> scores) {
  CellStats cell;
  double sum = 0.0;
  for (const auto& s : scores) {
    if (s) {
      sum += *s;
      ++cell.n;
    } else {
      ++cell.excluded;
    }
  }
  if (cell.n == 0) return cell;
  const double mean = sum / static_cast<double>(cell.n);
  double ss = 0.0;
  for (const auto& s : scores)
    if (s) ss += (*s - mean) * (*s - mean);
  cell.mean = mean;
  cell.stddev = cell.n > 1 ? std::sqrt(ss / static_cast<double>(cell.n - 1)) : 0.0;
  return cell;
}

ModalityReport summarize(std::string modality, std::vector<ImageScores> images) {
  ModalityReport r;
  r.modality = std::move(modality);
  r.images = std::move(images);
  std::vector<std::optional<double>> d, f;
  for (int k = 0; k < kNumClasses; ++k) {
    d.clear();
    f.clear();
    for (const auto& img : r.images) {
      d.push_back(img.dsc[k]);
      f.push_back(img.f2[k]);
    }
    r.class_dsc[k] = aggregate(d);
    r.class_f2[k] = aggregate(f);
  }
  d.clear();
  f.clear();
  for (const auto& img : r.images) {
    d.push_back(img.macro_dsc);
    f.push_back(img.macro_f2);
  }
  r.macro_dsc = aggregate(d);
  r.macro_f2 = aggregate(f);
  return r;
}

}  // namespace sonosynth
