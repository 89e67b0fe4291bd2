#include "holofocus/morphology.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <utility>

#include "holofocus/error.hpp"
#include "morphology_internal.hpp"

namespace holofocus {

namespace detail {

std::size_t reflect_index(long i, std::size_t n) {
  const long period = 2 * static_cast<long>(n);
  long k = i % period;
  if (k < 0) k += period;
  if (k >= static_cast<long>(n)) k = period - 1 - k;
  return static_cast<std::size_t>(k);
}

std::vector<std::pair<int, int>> disk_offsets(int radius) {
  std::vector<std::pair<int, int>> offsets;
  for (int dr = -radius; dr <= radius; ++dr) {
    for (int dc = -radius; dc <= radius; ++dc) {
      if (dr * dr + dc * dc <= radius * radius) offsets.emplace_back(dr, dc);
    }
  }
  return offsets;
}

SobelComponents sobel_components(const GrayImage& img) {
  const std::size_t rows = img.rows();
  const std::size_t cols = img.cols();
  SobelComponents out{GrayImage(rows, cols), GrayImage(rows, cols)};
#pragma omp parallel for schedule(static)
  for (std::size_t r = 0; r < rows; ++r) {
    sobel_row(img, r, out.gx.row(r), out.gy.row(r));
  }
  return out;
}

void sobel_row(const GrayImage& img, std::size_t r, std::span<double> gx, std::span<double> gy) {
  const std::size_t rows = img.rows();
  const std::size_t cols = img.cols();
  const std::size_t ru = r == 0 ? 0 : r - 1;
  const std::size_t rd = r + 1 == rows ? r : r + 1;
  for (std::size_t c = 0; c < cols; ++c) {
    const std::size_t cl = c == 0 ? 0 : c - 1;
    const std::size_t cr = c + 1 == cols ? c : c + 1;
    const double a = img(ru, cl), b = img(ru, c), d = img(ru, cr);
    const double e = img(r, cl), f = img(r, cr);
    const double g = img(rd, cl), h = img(rd, c), k = img(rd, cr);
    gx[c] = (d + 2.0 * f + k) - (a + 2.0 * e + g);
    gy[c] = (g + 2.0 * h + k) - (a + 2.0 * b + d);
  }
}

void blur_row_horizontal(const GrayImage& src, std::size_t r, std::span<const double> kernel,
                         std::span<double> dst) {
  const long radius = static_cast<long>(kernel.size() / 2);
  const std::size_t cols = src.cols();
  const auto line = src.row(r);
  for (std::size_t c = 0; c < cols; ++c) {
    double acc = 0.0;
    for (long k = -radius; k <= radius; ++k) {
      acc += kernel[static_cast<std::size_t>(k + radius)] *
             line[reflect_index(static_cast<long>(c) + k, cols)];
    }
    dst[c] = acc;
  }
}

void blur_row_vertical(const GrayImage& src, std::size_t r, std::span<const double> kernel,
                       std::span<double> dst) {
  const long radius = static_cast<long>(kernel.size() / 2);
  const std::size_t rows = src.rows();
  const std::size_t cols = src.cols();
  for (std::size_t c = 0; c < cols; ++c) dst[c] = 0.0;
  for (long k = -radius; k <= radius; ++k) {
    const double w = kernel[static_cast<std::size_t>(k + radius)];
    const auto line = src.row(reflect_index(static_cast<long>(r) + k, rows));
    for (std::size_t c = 0; c < cols; ++c) dst[c] += w * line[c];
  }
}

void morph_row(const BinaryImage& src, std::size_t r,
               const std::vector<std::pair<int, int>>& offsets, bool erode_op,
               std::span<std::uint8_t> dst) {
  const long rows = static_cast<long>(src.rows());
  const long cols = static_cast<long>(src.cols());
  for (long c = 0; c < cols; ++c) {
    bool value = erode_op;
    for (const auto& [dr, dc] : offsets) {
      const long rr = static_cast<long>(r) + dr;
      const long cc = c + dc;
      const bool inside = rr >= 0 && rr < rows && cc >= 0 && cc < cols;
      const bool set = inside && src(static_cast<std::size_t>(rr), static_cast<std::size_t>(cc));
      if (erode_op && !set) {
        value = false;
        break;
      }
      if (!erode_op && set) {
        value = true;
        break;
      }
    }
    dst[static_cast<std::size_t>(c)] = value ? 1 : 0;
  }
}

}  // namespace detail

std::vector<double> gaussian_kernel(double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ParameterError("sigma must be >= 0");
  if (sigma == 0.0) return {1.0};
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> kernel(2 * radius + 1);
  for (int k = -radius; k <= radius; ++k) {
    kernel[k + radius] = std::exp(-0.5 * k * k / (sigma * sigma));
  }
  const double sum = std::accumulate(kernel.begin(), kernel.end(), 0.0);
  for (double& w : kernel) w /= sum;
  return kernel;
}

GrayImage gaussian_blur(const GrayImage& img, double sigma) {
  const std::vector<double> kernel = gaussian_kernel(sigma);
  if (kernel.size() == 1) return img;
  GrayImage tmp(img.rows(), img.cols());
  GrayImage out(img.rows(), img.cols());
#pragma omp parallel for schedule(static)
  for (std::size_t r = 0; r < img.rows(); ++r) {
    detail::blur_row_horizontal(img, r, kernel, tmp.row(r));
  }
#pragma omp parallel for schedule(static)
  for (std::size_t r = 0; r < img.rows(); ++r) {
    detail::blur_row_vertical(tmp, r, kernel, out.row(r));
  }
  return out;
}

GrayImage sobel_magnitude(const GrayImage& img) {
  const detail::SobelComponents g = detail::sobel_components(img);
  GrayImage mag(img.rows(), img.cols());
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < mag.size(); ++i) mag[i] = std::sqrt(g.gx[i] * g.gx[i] + g.gy[i] * g.gy[i]);
  return mag;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  q = std::clamp(q, 0.0, 1.0);
  const auto idx = static_cast<std::size_t>(std::floor(q * static_cast<double>(values.size() - 1)));
  std::nth_element(values.begin(), values.begin() + static_cast<long>(idx), values.end());
  return values[idx];
}

namespace {

BinaryImage canny_core(const detail::SobelComponents& g, const GrayImage& mag, double low,
                       double high) {
  const std::size_t rows = mag.rows();
  const std::size_t cols = mag.cols();
  BinaryImage edges(rows, cols, 0);
  // Non-maximum suppression along the quantized gradient direction.
  const double tan22 = std::tan(std::numbers::pi / 8.0);
  auto at = [&](long r, long c) {
    if (r < 0 || c < 0 || r >= static_cast<long>(rows) || c >= static_cast<long>(cols)) return 0.0;
    return mag(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
  };
  // 0 = none, 1 = weak, 2 = strong
  Grid<std::uint8_t> klass(rows, cols, 0);
#pragma omp parallel for schedule(static)
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const double m = mag(r, c);
      if (m <= 0.0 || m < low) continue;
      const double gx = g.gx(r, c);
      const double gy = g.gy(r, c);
      int dr = 0, dc = 0;
      if (std::abs(gy) <= tan22 * std::abs(gx)) {
        dc = 1;
      } else if (std::abs(gx) <= tan22 * std::abs(gy)) {
        dr = 1;
      } else if (gx * gy > 0.0) {
        dr = 1;
        dc = 1;
      } else {
        dr = 1;
        dc = -1;
      }
      const long ri = static_cast<long>(r);
      const long ci = static_cast<long>(c);
      const double back = at(ri - dr, ci - dc);
      const double fwd = at(ri + dr, ci + dc);
      if (m > back && m >= fwd) klass(r, c) = m >= high ? 2 : 1;
    }
  }

  // Hysteresis: keep weak pixels 8-connected to a strong one.
  std::vector<std::size_t> queue;
  for (std::size_t i = 0; i < klass.size(); ++i) {
    if (klass[i] == 2) {
      edges[i] = 1;
      queue.push_back(i);
    }
  }
  while (!queue.empty()) {
    const std::size_t i = queue.back();
    queue.pop_back();
    const long r = static_cast<long>(i / cols);
    const long c = static_cast<long>(i % cols);
    for (long dr = -1; dr <= 1; ++dr) {
      for (long dc = -1; dc <= 1; ++dc) {
        const long rr = r + dr, cc = c + dc;
        if (rr < 0 || cc < 0 || rr >= static_cast<long>(rows) || cc >= static_cast<long>(cols)) {
          continue;
        }
        const std::size_t j = static_cast<std::size_t>(rr) * cols + static_cast<std::size_t>(cc);
        if (klass[j] == 1 && !edges[j]) {
          edges[j] = 1;
          queue.push_back(j);
        }
      }
    }
  }
  return edges;
}

}  // namespace

BinaryImage canny(const GrayImage& img, double low_quantile, double high_quantile) {
  if (!(low_quantile >= 0.0 && low_quantile < high_quantile && high_quantile <= 1.0)) {
    throw ParameterError("canny thresholds need 0 <= low < high <= 1");
  }
  if (img.empty()) return BinaryImage(img.rows(), img.cols(), 0);
  const detail::SobelComponents g = detail::sobel_components(img);
  GrayImage mag(img.rows(), img.cols());
  for (std::size_t i = 0; i < mag.size(); ++i) {
    mag[i] = std::sqrt(g.gx[i] * g.gx[i] + g.gy[i] * g.gy[i]);
  }
  std::vector<double> values(mag.values().begin(), mag.values().end());
  const double low = quantile(values, low_quantile);
  const double high = quantile(std::move(values), high_quantile);
  return canny_core(g, mag, low, high);
}

BinaryImage canny_absolute(const GrayImage& img, double low, double high) {
  if (!(low >= 0.0 && low <= high)) throw ParameterError("canny thresholds need 0 <= low <= high");
  if (img.empty()) return BinaryImage(img.rows(), img.cols(), 0);
  const detail::SobelComponents g = detail::sobel_components(img);
  GrayImage mag(img.rows(), img.cols());
  for (std::size_t i = 0; i < mag.size(); ++i) {
    mag[i] = std::sqrt(g.gx[i] * g.gx[i] + g.gy[i] * g.gy[i]);
  }
  return canny_core(g, mag, low, high);
}

BinaryImage fill_holes(const BinaryImage& img) {
  const std::size_t rows = img.rows();
  const std::size_t cols = img.cols();
  BinaryImage outside(rows, cols, 0);
  std::vector<std::size_t> queue;
  auto seed = [&](std::size_t r, std::size_t c) {
    const std::size_t i = r * cols + c;
    if (!img[i] && !outside[i]) {
      outside[i] = 1;
      queue.push_back(i);
    }
  };
  for (std::size_t c = 0; c < cols; ++c) {
    seed(0, c);
    seed(rows - 1, c);
  }
  for (std::size_t r = 0; r < rows; ++r) {
    seed(r, 0);
    seed(r, cols - 1);
  }
  while (!queue.empty()) {
    const std::size_t i = queue.back();
    queue.pop_back();
    const std::size_t r = i / cols;
    const std::size_t c = i % cols;
    if (r > 0) seed(r - 1, c);
    if (r + 1 < rows) seed(r + 1, c);
    if (c > 0) seed(r, c - 1);
    if (c + 1 < cols) seed(r, c + 1);
  }
  BinaryImage out(rows, cols, 0);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = outside[i] ? 0 : 1;
  return out;
}

namespace {

BinaryImage morph(const BinaryImage& img, int radius, bool erode_op) {
  if (radius < 1) throw ParameterError("structuring element radius must be >= 1");
  const auto offsets = detail::disk_offsets(radius);
  BinaryImage out(img.rows(), img.cols(), 0);
#pragma omp parallel for schedule(static)
  for (std::size_t r = 0; r < img.rows(); ++r) {
    detail::morph_row(img, r, offsets, erode_op, out.row(r));
  }
  return out;
}

std::int32_t find_root(std::vector<std::int32_t>& parent, std::int32_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

void unite(std::vector<std::int32_t>& parent, std::int32_t a, std::int32_t b) {
  a = find_root(parent, a);
  b = find_root(parent, b);
  if (a == b) return;
  if (a < b) std::swap(a, b);
  parent[a] = b;
}

}  // namespace

BinaryImage erode(const BinaryImage& img, int radius) { return morph(img, radius, true); }

BinaryImage dilate(const BinaryImage& img, int radius) { return morph(img, radius, false); }

Labeling label_components(const BinaryImage& img) {
  const std::size_t rows = img.rows();
  const std::size_t cols = img.cols();
  Labeling out{LabelMap(rows, cols, 0), 0};
  std::vector<std::int32_t> parent{0};

  // First pass: provisional labels from the already-visited 8-neighbours.
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (!img(r, c)) continue;
      std::int32_t label = 0;
      auto visit = [&](long rr, long cc) {
        if (rr < 0 || cc < 0 || cc >= static_cast<long>(cols)) return;
        const std::int32_t n = out.labels(static_cast<std::size_t>(rr), static_cast<std::size_t>(cc));
        if (n == 0) return;
        if (label == 0) {
          label = n;
        } else {
          unite(parent, label, n);
        }
      };
      const long ri = static_cast<long>(r);
      const long ci = static_cast<long>(c);
      visit(ri, ci - 1);
      visit(ri - 1, ci - 1);
      visit(ri - 1, ci);
      visit(ri - 1, ci + 1);
      if (label == 0) {
        label = static_cast<std::int32_t>(parent.size());
        parent.push_back(label);
      }
      out.labels(r, c) = label;
    }
  }

  // Second pass: compact labels in raster order of first appearance.
  std::vector<std::int32_t> final_label(parent.size(), 0);
  for (std::size_t i = 0; i < out.labels.size(); ++i) {
    std::int32_t& l = out.labels[i];
    if (l == 0) continue;
    const std::int32_t root = find_root(parent, l);
    if (final_label[root] == 0) final_label[root] = ++out.count;
    l = final_label[root];
  }
  return out;
}

std::vector<RegionProps> region_props(const Labeling& labeling, const GrayImage& intensity) {
  if (!labeling.labels.same_shape(intensity)) {
    throw ParameterError("label map and intensity image differ in size");
  }
  struct Acc {
    std::size_t area = 0;
    double sum = 0.0, sum_r = 0.0, sum_c = 0.0;
    std::size_t min_r = 0, max_r = 0, min_c = 0, max_c = 0;
  };
  std::vector<Acc> acc(static_cast<std::size_t>(labeling.count) + 1);
  const std::size_t cols = intensity.cols();
  for (std::size_t i = 0; i < intensity.size(); ++i) {
    const std::int32_t l = labeling.labels[i];
    if (l <= 0 || l > labeling.count) continue;
    Acc& a = acc[static_cast<std::size_t>(l)];
    const std::size_t r = i / cols;
    const std::size_t c = i % cols;
    if (a.area == 0) {
      a.min_r = a.max_r = r;
      a.min_c = a.max_c = c;
    }
    ++a.area;
    a.sum += intensity[i];
    a.sum_r += static_cast<double>(r);
    a.sum_c += static_cast<double>(c);
    a.min_r = std::min(a.min_r, r);
    a.max_r = std::max(a.max_r, r);
    a.min_c = std::min(a.min_c, c);
    a.max_c = std::max(a.max_c, c);
  }
  std::vector<RegionProps> props;
  for (std::int32_t l = 1; l <= labeling.count; ++l) {
    const Acc& a = acc[static_cast<std::size_t>(l)];
    if (a.area == 0) continue;
    RegionProps p;
    const double area = static_cast<double>(a.area);
    p.label_id = l;
    p.area_px = a.area;
    p.mean_intensity = a.sum / area;
    p.equivalent_diameter_px = 2.0 * std::sqrt(area / std::numbers::pi);
    p.centroid_x = a.sum_c / area;
    p.centroid_y = a.sum_r / area;
    p.min_row = a.min_r;
    p.max_row = a.max_r;
    p.min_col = a.min_c;
    p.max_col = a.max_c;
    props.push_back(p);
  }
  return props;
}

BinaryImage threshold_below(const GrayImage& img, double threshold) {
  BinaryImage out(img.rows(), img.cols(), 0);
  for (std::size_t i = 0; i < img.size(); ++i) out[i] = img[i] < threshold ? 1 : 0;
  return out;
}

}  // namespace holofocus
