#include "holofocus/serial_kernels.hpp"

#include <algorithm>
#include <cmath>

#include "holofocus/error.hpp"
#include "holofocus/morphology.hpp"
#include "morphology_internal.hpp"

namespace holofocus::serial {

namespace {

using detail::reflect_index;

BinaryImage morph(const BinaryImage& img, int radius, bool erode_op) {
  if (radius < 1) throw ParameterError("structuring element radius must be >= 1");
  const long rows = static_cast<long>(img.rows());
  const long cols = static_cast<long>(img.cols());
  BinaryImage out(img.rows(), img.cols(), 0);
  for (long r = 0; r < rows; ++r) {
    for (long c = 0; c < cols; ++c) {
      bool value = erode_op;
      for (int dr = -radius; dr <= radius && value == erode_op; ++dr) {
        for (int dc = -radius; dc <= radius; ++dc) {
          if (dr * dr + dc * dc > radius * radius) continue;
          const long rr = r + dr, cc = c + dc;
          const bool set = rr >= 0 && rr < rows && cc >= 0 && cc < cols &&
                           img(static_cast<std::size_t>(rr), static_cast<std::size_t>(cc));
          if (set != erode_op) {
            value = !erode_op;
            break;
          }
        }
      }
      out(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = value ? 1 : 0;
    }
  }
  return out;
}

GrayImage project(std::span<const GrayImage> slices, bool take_min) {
  if (slices.empty()) throw ParameterError("projection of an empty stack");
  GrayImage out = slices.front();
  for (std::size_t s = 1; s < slices.size(); ++s) {
    if (!slices[s].same_shape(out)) throw ParameterError("stack slices differ in size");
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = take_min ? std::min(out[i], slices[s][i]) : std::max(out[i], slices[s][i]);
    }
  }
  return out;
}

}  // namespace

GrayImage gaussian_blur(const GrayImage& img, double sigma) {
  const std::vector<double> kernel = gaussian_kernel(sigma);
  if (kernel.size() == 1) return img;
  const long radius = static_cast<long>(kernel.size() / 2);
  const std::size_t rows = img.rows();
  const std::size_t cols = img.cols();
  GrayImage tmp(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      double acc = 0.0;
      for (long k = -radius; k <= radius; ++k) {
        acc += kernel[static_cast<std::size_t>(k + radius)] *
               img(r, reflect_index(static_cast<long>(c) + k, cols));
      }
      tmp(r, c) = acc;
    }
  }
  GrayImage out(rows, cols, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (long k = -radius; k <= radius; ++k) {
      const double w = kernel[static_cast<std::size_t>(k + radius)];
      const std::size_t src = reflect_index(static_cast<long>(r) + k, rows);
      for (std::size_t c = 0; c < cols; ++c) out(r, c) += w * tmp(src, c);
    }
  }
  return out;
}

GrayImage sobel_magnitude(const GrayImage& img) {
  const std::size_t rows = img.rows();
  const std::size_t cols = img.cols();
  GrayImage mag(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t ru = r == 0 ? 0 : r - 1;
    const std::size_t rd = r + 1 == rows ? r : r + 1;
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t cl = c == 0 ? 0 : c - 1;
      const std::size_t cr = c + 1 == cols ? c : c + 1;
      const double gx = (img(ru, cr) + 2.0 * img(r, cr) + img(rd, cr)) -
                        (img(ru, cl) + 2.0 * img(r, cl) + img(rd, cl));
      const double gy = (img(rd, cl) + 2.0 * img(rd, c) + img(rd, cr)) -
                        (img(ru, cl) + 2.0 * img(ru, c) + img(ru, cr));
      mag(r, c) = std::sqrt(gx * gx + gy * gy);
    }
  }
  return mag;
}

BinaryImage erode(const BinaryImage& img, int radius) { return morph(img, radius, true); }
BinaryImage dilate(const BinaryImage& img, int radius) { return morph(img, radius, false); }

GrayImage min_projection(std::span<const GrayImage> slices) { return project(slices, true); }
GrayImage max_projection(std::span<const GrayImage> slices) { return project(slices, false); }

}  // namespace holofocus::serial
