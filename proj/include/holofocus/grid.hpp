#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace holofocus {

/// Dense row-major 2-D array. Element (r, c) lives at r * cols + c.
template <typename T>
class Grid {
 public:
  using value_type = T;

  Grid() = default;
  Grid(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }
  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }

  template <typename U>
  bool same_shape(const Grid<U>& other) const {
    return rows_ == other.rows() && cols_ == other.cols();
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using Complex = std::complex<double>;

/// Real image; values in [0, 1] once normalized.
using GrayImage = Grid<double>;
/// Boolean mask stored as bytes (0 or 1).
using BinaryImage = Grid<std::uint8_t>;
/// Component labels: 0 is background, 1..count are regions.
using LabelMap = Grid<std::int32_t>;
using ComplexGrid = Grid<Complex>;

/// Complex amplitude sampled on a square-pixel grid.
class ComplexField {
 public:
  ComplexField(ComplexGrid data, double pixel_pitch);
  ComplexField(std::size_t rows, std::size_t cols, double pixel_pitch, Complex fill = {});

  std::size_t rows() const { return data_.rows(); }
  std::size_t cols() const { return data_.cols(); }
  double pixel_pitch() const { return pixel_pitch_; }

  ComplexGrid& data() { return data_; }
  const ComplexGrid& data() const { return data_; }
  Complex& operator()(std::size_t r, std::size_t c) { return data_(r, c); }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_(r, c); }

  double l2_norm() const;

 private:
  ComplexGrid data_;
  double pixel_pitch_;
};

/// Maximum absolute element-wise difference; shapes must agree.
double max_abs_diff(const ComplexGrid& a, const ComplexGrid& b);
double max_abs_diff(const GrayImage& a, const GrayImage& b);

}  // namespace holofocus
