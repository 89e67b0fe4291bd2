#pragma once

// Single-threaded reference versions of the OpenMP kernels. They follow the
// same arithmetic order, so results match the parallel versions exactly.

#include <span>

#include "holofocus/grid.hpp"

namespace holofocus::serial {

GrayImage gaussian_blur(const GrayImage& img, double sigma);
GrayImage sobel_magnitude(const GrayImage& img);
BinaryImage erode(const BinaryImage& img, int radius);
BinaryImage dilate(const BinaryImage& img, int radius);
GrayImage min_projection(std::span<const GrayImage> slices);
GrayImage max_projection(std::span<const GrayImage> slices);

}  // namespace holofocus::serial
