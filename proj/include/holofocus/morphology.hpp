#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "holofocus/grid.hpp"

namespace holofocus {

struct RegionProps {
  std::int32_t label_id = 0;
  std::size_t area_px = 0;
  double mean_intensity = 0.0;
  double equivalent_diameter_px = 0.0;
  // (x, y) = (column, row), 0-indexed.
  double centroid_x = 0.0;
  double centroid_y = 0.0;
  std::size_t min_row = 0, max_row = 0, min_col = 0, max_col = 0;
};

struct Labeling {
  LabelMap labels;
  std::int32_t count = 0;
};

/// Separable Gaussian convolution with symmetric (half-sample) reflection at
/// the border. The kernel spans ceil(3 sigma) pixels each side and sums to 1.
/// sigma == 0 returns the input unchanged.
GrayImage gaussian_blur(const GrayImage& img, double sigma);

/// Truncated, unit-sum 1-D Gaussian used by gaussian_blur.
std::vector<double> gaussian_kernel(double sigma);

/// 3x3 Sobel gradient magnitude with replicated borders (not normalized).
GrayImage sobel_magnitude(const GrayImage& img);

/// Canny edge detector without internal smoothing. Thresholds are quantiles
/// of the gradient-magnitude distribution, 0 <= low < high <= 1.
BinaryImage canny(const GrayImage& img, double low_quantile, double high_quantile);

/// Canny with absolute gradient-magnitude thresholds, 0 <= low <= high.
/// Zero-magnitude pixels are never edges.
BinaryImage canny_absolute(const GrayImage& img, double low, double high);

/// Background not 4-connected to the border becomes foreground.
BinaryImage fill_holes(const BinaryImage& img);

/// Disk structuring element {(dy, dx) : dy^2 + dx^2 <= r^2}; pixels outside
/// the image count as background for both operations.
BinaryImage erode(const BinaryImage& img, int radius);
BinaryImage dilate(const BinaryImage& img, int radius);

/// 8-connected labeling; labels are numbered in raster order of each
/// component's first pixel.
Labeling label_components(const BinaryImage& img);

/// Per-label statistics over `intensity`; labels with no pixels are omitted.
std::vector<RegionProps> region_props(const Labeling& labeling, const GrayImage& intensity);

/// Value at quantile q of `values` (lower nearest rank). Empty input gives 0.
double quantile(std::vector<double> values, double q);

/// Pixel-wise (value < threshold).
BinaryImage threshold_below(const GrayImage& img, double threshold);

}  // namespace holofocus
