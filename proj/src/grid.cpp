#include "holofocus/grid.hpp"

#include <algorithm>
#include <cmath>

#include "holofocus/error.hpp"

namespace holofocus {

ComplexField::ComplexField(ComplexGrid data, double pixel_pitch)
    : data_(std::move(data)), pixel_pitch_(pixel_pitch) {
  if (data_.rows() < 2 || data_.cols() < 2) {
    throw ParameterError("complex field needs at least 2x2 samples");
  }
  if (!(pixel_pitch_ > 0.0) || !std::isfinite(pixel_pitch_)) {
    throw ParameterError("pixel pitch must be positive and finite");
  }
}

ComplexField::ComplexField(std::size_t rows, std::size_t cols, double pixel_pitch, Complex fill)
    : ComplexField(ComplexGrid(rows, cols, fill), pixel_pitch) {}

double ComplexField::l2_norm() const {
  double sum = 0.0;
  for (const Complex& v : data_.values()) sum += std::norm(v);
  return std::sqrt(sum);
}

double max_abs_diff(const ComplexGrid& a, const ComplexGrid& b) {
  if (!a.same_shape(b)) throw ParameterError("shape mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

double max_abs_diff(const GrayImage& a, const GrayImage& b) {
  if (!a.same_shape(b)) throw ParameterError("shape mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace holofocus
