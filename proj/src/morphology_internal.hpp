#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "holofocus/grid.hpp"

namespace holofocus::detail {

/// Half-sample symmetric reflection of index i into [0, n).
std::size_t reflect_index(long i, std::size_t n);

std::vector<std::pair<int, int>> disk_offsets(int radius);

struct SobelComponents {
  GrayImage gx;
  GrayImage gy;
};

SobelComponents sobel_components(const GrayImage& img);
void sobel_row(const GrayImage& img, std::size_t r, std::span<double> gx, std::span<double> gy);
void blur_row_horizontal(const GrayImage& src, std::size_t r, std::span<const double> kernel,
                         std::span<double> dst);
void blur_row_vertical(const GrayImage& src, std::size_t r, std::span<const double> kernel,
                       std::span<double> dst);
void morph_row(const BinaryImage& src, std::size_t r,
               const std::vector<std::pair<int, int>>& offsets, bool erode_op,
               std::span<std::uint8_t> dst);

}  // namespace holofocus::detail
