// Copyright 2026 The sonosynth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace sonosynth {

/// Dense row-major 2-D array.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Grid(std::size_t rows, std::size_t cols, std::vector<T> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    assert(data_.size() == rows_ * cols_);
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }
  std::vector<T>& storage() { return data_; }
  const std::vector<T>& storage() const { return data_; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using Image = Grid<float>;

/// Maps a sample index to a physical coordinate: origin + index * step.
struct AxisMap {
  double origin_mm = 0.0;
  double step_mm = 1.0;

  double at(double index) const { return origin_mm + index * step_mm; }
  double index_of(double mm) const { return (mm - origin_mm) / step_mm; }

  /// n samples spanning [lo, hi] with both ends on a sample.
  static AxisMap spanning(double lo, double hi, std::size_t n) {
    return {lo, n > 1 ? (hi - lo) / static_cast<double>(n - 1) : 0.0};
  }

  friend bool operator==(const AxisMap&, const AxisMap&) = default;
};

}  // namespace sonosynth
