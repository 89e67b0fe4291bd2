#pragma once

#include <cstdint>
#include <random>

#include "holofocus/grid.hpp"

namespace testutil {

using namespace holofocus;

inline ComplexField random_field(std::size_t rows, std::size_t cols, double pitch,
                                 std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  ComplexField f(rows, cols, pitch);
  for (auto& v : f.data().values()) v = Complex(n(rng), n(rng));
  return f;
}

inline GrayImage random_image(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  GrayImage img(rows, cols);
  for (double& v : img.values()) v = u(rng);
  return img;
}

inline BinaryImage random_mask(std::size_t rows, std::size_t cols, double density,
                               std::mt19937_64& rng) {
  std::bernoulli_distribution b(density);
  BinaryImage img(rows, cols);
  for (auto& v : img.values()) v = b(rng) ? 1 : 0;
  return img;
}

// Filled disk of the given radius (pixels) around (cy, cx).
inline void paint_disk(GrayImage& img, double cy, double cx, double radius, double value) {
  for (std::size_t r = 0; r < img.rows(); ++r) {
    for (std::size_t c = 0; c < img.cols(); ++c) {
      const double dy = static_cast<double>(r) - cy;
      const double dx = static_cast<double>(c) - cx;
      if (dy * dy + dx * dx <= radius * radius) img(r, c) = value;
    }
  }
}

}  // namespace testutil
