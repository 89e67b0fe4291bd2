#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <deque>
#include <numbers>
#include <random>
#include <tuple>

#include "helpers.hpp"
#include "holofocus/error.hpp"
#include "holofocus/morphology.hpp"
#include "holofocus/serial_kernels.hpp"

using namespace holofocus;

namespace {

// Symmetric extension with period 2n: ... 1 0 | 0 1 ... n-1 | n-1 n-2 ...
long mirror(long i, long n) {
  const long period = 2 * n;
  long m = ((i % period) + period) % period;
  return m < n ? m : period - 1 - m;
}

GrayImage dense_blur(const GrayImage& img, double sigma) {
  const std::vector<double> k = gaussian_kernel(sigma);
  const long radius = static_cast<long>(k.size() / 2);
  const long rows = static_cast<long>(img.rows()), cols = static_cast<long>(img.cols());
  GrayImage out(img.rows(), img.cols());
  for (long r = 0; r < rows; ++r) {
    for (long c = 0; c < cols; ++c) {
      double acc = 0.0;
      for (long i = -radius; i <= radius; ++i) {
        for (long j = -radius; j <= radius; ++j) {
          acc += k[i + radius] * k[j + radius] * img(mirror(r + i, rows), mirror(c + j, cols));
        }
      }
      out(r, c) = acc;
    }
  }
  return out;
}

GrayImage dense_sobel(const GrayImage& img) {
  const long rows = static_cast<long>(img.rows()), cols = static_cast<long>(img.cols());
  const int kx[3][3] = {{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}};
  const int ky[3][3] = {{-1, -2, -1}, {0, 0, 0}, {1, 2, 1}};
  GrayImage out(img.rows(), img.cols());
  for (long r = 0; r < rows; ++r) {
    for (long c = 0; c < cols; ++c) {
      double gx = 0.0, gy = 0.0;
      for (int i = -1; i <= 1; ++i) {
        for (int j = -1; j <= 1; ++j) {
          const double v = img(std::clamp(r + i, 0L, rows - 1), std::clamp(c + j, 0L, cols - 1));
          gx += kx[i + 1][j + 1] * v;
          gy += ky[i + 1][j + 1] * v;
        }
      }
      out(r, c) = std::hypot(gx, gy);
    }
  }
  return out;
}

BinaryImage brute_morph(const BinaryImage& img, int radius, bool erode_op) {
  const long rows = static_cast<long>(img.rows()), cols = static_cast<long>(img.cols());
  BinaryImage out(img.rows(), img.cols());
  for (long r = 0; r < rows; ++r) {
    for (long c = 0; c < cols; ++c) {
      bool all = true, any = false;
      for (long dy = -radius; dy <= radius; ++dy) {
        for (long dx = -radius; dx <= radius; ++dx) {
          if (dy * dy + dx * dx > radius * radius) continue;
          const long rr = r + dy, cc = c + dx;
          const bool v = rr >= 0 && cc >= 0 && rr < rows && cc < cols && img(rr, cc);
          all = all && v;
          any = any || v;
        }
      }
      out(r, c) = erode_op ? all : any;
    }
  }
  return out;
}

// Flood fill from every unlabeled foreground pixel in raster order.
LabelMap flood_labels(const BinaryImage& img, int& count) {
  const long rows = static_cast<long>(img.rows()), cols = static_cast<long>(img.cols());
  LabelMap labels(img.rows(), img.cols(), 0);
  count = 0;
  for (long r = 0; r < rows; ++r) {
    for (long c = 0; c < cols; ++c) {
      if (!img(r, c) || labels(r, c)) continue;
      ++count;
      std::deque<std::pair<long, long>> todo{{r, c}};
      labels(r, c) = count;
      while (!todo.empty()) {
        auto [y, x] = todo.front();
        todo.pop_front();
        for (long dy = -1; dy <= 1; ++dy) {
          for (long dx = -1; dx <= 1; ++dx) {
            const long yy = y + dy, xx = x + dx;
            if (yy < 0 || xx < 0 || yy >= rows || xx >= cols) continue;
            if (img(yy, xx) && !labels(yy, xx)) {
              labels(yy, xx) = count;
              todo.push_back({yy, xx});
            }
          }
        }
      }
    }
  }
  return labels;
}

BinaryImage flood_fill_holes(const BinaryImage& img) {
  const long rows = static_cast<long>(img.rows()), cols = static_cast<long>(img.cols());
  BinaryImage reached(img.rows(), img.cols(), 0);
  std::deque<std::pair<long, long>> todo;
  for (long r = 0; r < rows; ++r) {
    for (long c = 0; c < cols; ++c) {
      const bool border = r == 0 || c == 0 || r == rows - 1 || c == cols - 1;
      if (border && !img(r, c)) {
        reached(r, c) = 1;
        todo.push_back({r, c});
      }
    }
  }
  const long step[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  while (!todo.empty()) {
    auto [y, x] = todo.front();
    todo.pop_front();
    for (auto& s : step) {
      const long yy = y + s[0], xx = x + s[1];
      if (yy < 0 || xx < 0 || yy >= rows || xx >= cols) continue;
      if (!img(yy, xx) && !reached(yy, xx)) {
        reached(yy, xx) = 1;
        todo.push_back({yy, xx});
      }
    }
  }
  BinaryImage out(img.rows(), img.cols());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = reached[i] ? 0 : 1;
  return out;
}

std::size_t count_true(const BinaryImage& img) {
  std::size_t n = 0;
  for (auto v : img.values()) n += v ? 1 : 0;
  return n;
}

}  // namespace

TEST_CASE("gaussian kernel is a truncated unit-sum Gaussian") {
  const std::vector<double> k = gaussian_kernel(1.0);
  REQUIRE(k.size() == 7);
  double sum = 0.0;
  for (double v : k) sum += v;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(k[3] / k[4] == doctest::Approx(std::exp(0.5)));
  CHECK(gaussian_kernel(2.2).size() == 2 * 7 + 1);
}

TEST_CASE("gaussian blur identities") {
  std::mt19937_64 rng(1);
  const GrayImage img = testutil::random_image(20, 30, rng);
  CHECK(gaussian_blur(img, 0.0) == img);
  const GrayImage flat(25, 17, 0.37);
  CHECK(max_abs_diff(gaussian_blur(flat, 1.5), flat) < 1e-12);
  CHECK_THROWS_AS(gaussian_blur(img, -1.0), ParameterError);
}

TEST_CASE("gaussian blur of an impulse puts the kernel peak at the centre") {
  GrayImage img(21, 21, 0.0);
  img(10, 10) = 1.0;
  const std::vector<double> k = gaussian_kernel(1.0);
  const GrayImage out = gaussian_blur(img, 1.0);
  CHECK(out(10, 10) == doctest::Approx(k[3] * k[3]).epsilon(1e-14));
  CHECK(max_abs_diff(out, dense_blur(img, 1.0)) < 1e-14);
}

TEST_CASE("gaussian blur equals dense convolution") {
  std::mt19937_64 rng(2);
  for (auto [rows, cols, sigma] : {std::tuple<int, int, double>{30, 41, 1.0}, std::tuple<int, int, double>{5, 9, 2.0}, std::tuple<int, int, double>{64, 3, 0.7}}) {
    const GrayImage img = testutil::random_image(rows, cols, rng);
    CHECK(max_abs_diff(gaussian_blur(img, sigma), dense_blur(img, sigma)) < 1e-12);
  }
}

TEST_CASE("sobel magnitude equals dense convolution") {
  std::mt19937_64 rng(3);
  const GrayImage img = testutil::random_image(37, 29, rng);
  CHECK(max_abs_diff(sobel_magnitude(img), dense_sobel(img)) < 1e-12);
  const GrayImage tiny = testutil::random_image(1, 4, rng);
  CHECK(max_abs_diff(sobel_magnitude(tiny), dense_sobel(tiny)) < 1e-12);
}

TEST_CASE("canny on a constant image finds nothing") {
  const GrayImage flat(40, 40, 0.5);
  CHECK(count_true(canny(flat, 0.7, 0.9)) == 0);
  CHECK(count_true(canny_absolute(flat, 0.0, 0.0)) == 0);
}

TEST_CASE("canny traces a closed ring around a sharp disk") {
  GrayImage img(101, 101, 1.0);
  testutil::paint_disk(img, 50, 50, 30, 0.0);
  const BinaryImage edges = canny(img, 0.7, 0.9);
  const double circumference = 2.0 * std::numbers::pi * 30.0;
  const double n = static_cast<double>(count_true(edges));
  CHECK(n >= 0.8 * circumference);
  CHECK(n <= 1.2 * circumference);
  // Closed: filling holes turns the interior on.
  const BinaryImage filled = fill_holes(edges);
  CHECK(filled(50, 50) == 1);
  CHECK(filled(5, 5) == 0);
}

TEST_CASE("quantile canny is invariant under affine intensity changes") {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> level(0, 255);
  for (int trial = 0; trial < 5; ++trial) {
    GrayImage img(48, 56);
    for (double& v : img.values()) v = level(rng) / 256.0;
    GrayImage scaled = img;
    for (double& v : scaled.values()) v = 0.5 * v + 0.25;
    CHECK(canny(img, 0.7, 0.9) == canny(scaled, 0.7, 0.9));
  }
}

TEST_CASE("canny thresholds are validated") {
  const GrayImage img(8, 8, 0.0);
  CHECK_THROWS_AS(canny(img, 0.9, 0.7), ParameterError);
  CHECK_THROWS_AS(canny(img, -0.1, 0.7), ParameterError);
  CHECK_THROWS_AS(canny_absolute(img, 2.0, 1.0), ParameterError);
}

TEST_CASE("fill holes") {
  BinaryImage rect(20, 20, 0);
  for (std::size_t r = 5; r < 12; ++r) {
    for (std::size_t c = 3; c < 15; ++c) rect(r, c) = 1;
  }
  CHECK(fill_holes(rect) == rect);

  GrayImage ring_img(41, 41, 0.0);
  testutil::paint_disk(ring_img, 20, 20, 10, 1.0);
  testutil::paint_disk(ring_img, 20, 20, 9, 0.0);
  BinaryImage ring = threshold_below(ring_img, 0.5);
  for (auto& v : ring.values()) v = !v;
  GrayImage solid_img(41, 41, 0.0);
  testutil::paint_disk(solid_img, 20, 20, 10, 1.0);
  BinaryImage solid = threshold_below(solid_img, 0.5);
  for (auto& v : solid.values()) v = !v;
  CHECK(fill_holes(ring) == solid);
}

TEST_CASE("fill holes matches the flood-fill oracle and is idempotent") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    GrayImage blob_img(60, 60, 0.0);
    testutil::paint_disk(blob_img, 30, 30, 22, 1.0);
    std::uniform_real_distribution<double> pos(18.0, 42.0);
    for (int h = 0; h < 3; ++h) testutil::paint_disk(blob_img, pos(rng), pos(rng), 2.5, 0.0);
    BinaryImage blob = testutil::random_mask(60, 60, 0.05, rng);
    for (std::size_t i = 0; i < blob.size(); ++i) blob[i] = blob[i] || blob_img[i] > 0.5;
    const BinaryImage filled = fill_holes(blob);
    CHECK(filled == flood_fill_holes(blob));
    CHECK(fill_holes(filled) == filled);
  }
}

TEST_CASE("erosion and dilation equal brute-force disk filters") {
  std::mt19937_64 rng(6);
  for (int radius : {1, 2, 3}) {
    const BinaryImage img = testutil::random_mask(33, 47, 0.6, rng);
    CHECK(erode(img, radius) == brute_morph(img, radius, true));
    CHECK(dilate(img, radius) == brute_morph(img, radius, false));
  }
  CHECK_THROWS_AS(erode(BinaryImage(4, 4, 1), 0), ParameterError);
}

TEST_CASE("erosion of an all-true image strips the border") {
  const BinaryImage full(20, 25, 1);
  const BinaryImage e = erode(full, 2);
  for (std::size_t r = 0; r < 20; ++r) {
    for (std::size_t c = 0; c < 25; ++c) {
      const bool inner = r >= 2 && c >= 2 && r < 18 && c < 23;
      CHECK(e(r, c) == (inner ? 1 : 0));
    }
  }
}

TEST_CASE("opening of a disk is contained in it") {
  GrayImage disk_img(60, 60, 0.0);
  testutil::paint_disk(disk_img, 30, 30, 20, 1.0);
  BinaryImage disk(60, 60);
  for (std::size_t i = 0; i < disk.size(); ++i) disk[i] = disk_img[i] > 0.5;
  const BinaryImage opened = dilate(erode(disk, 1), 1);
  const BinaryImage inner = erode(disk, 1);
  for (std::size_t i = 0; i < disk.size(); ++i) {
    CHECK(opened[i] <= disk[i]);
    CHECK(inner[i] <= opened[i]);
  }
}

TEST_CASE("dilation is dual to erosion away from the border") {
  std::mt19937_64 rng(7);
  const int radius = 2;
  const BinaryImage img = testutil::random_mask(40, 40, 0.4, rng);
  BinaryImage inv = img;
  for (auto& v : inv.values()) v = !v;
  const BinaryImage d = dilate(img, radius);
  const BinaryImage e = erode(inv, radius);
  for (std::size_t r = radius; r < 40 - radius; ++r) {
    for (std::size_t c = radius; c < 40 - radius; ++c) CHECK(d(r, c) == !e(r, c));
  }
}

TEST_CASE("labeling") {
  CHECK(label_components(BinaryImage(10, 10, 0)).count == 0);
  BinaryImage diag(4, 4, 0);
  diag(1, 1) = 1;
  diag(2, 2) = 1;
  CHECK(label_components(diag).count == 1);
}

TEST_CASE("labeling matches the flood-fill oracle") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const BinaryImage img = testutil::random_mask(200, 200, 0.3, rng);
    int count = 0;
    const LabelMap expected = flood_labels(img, count);
    const Labeling got = label_components(img);
    CHECK(got.count == count);
    CHECK(got.labels == expected);
  }
}

TEST_CASE("region properties") {
  BinaryImage single(5, 5, 0);
  single(2, 3) = 1;
  const GrayImage quarter(5, 5, 0.25);
  const auto p1 = region_props(label_components(single), quarter);
  REQUIRE(p1.size() == 1);
  CHECK(p1[0].equivalent_diameter_px == doctest::Approx(1.1284).epsilon(1e-4));
  CHECK(p1[0].mean_intensity == 0.25);
  CHECK(p1[0].centroid_x == 3.0);
  CHECK(p1[0].centroid_y == 2.0);

  BinaryImage block(20, 20, 0);
  for (std::size_t r = 2; r < 12; ++r) {
    for (std::size_t c = 5; c < 15; ++c) block(r, c) = 1;
  }
  const auto p2 = region_props(label_components(block), GrayImage(20, 20, 0.0));
  REQUIRE(p2.size() == 1);
  CHECK(p2[0].area_px == 100);
  CHECK(p2[0].equivalent_diameter_px == doctest::Approx(11.2838).epsilon(1e-5));
  CHECK(p2[0].centroid_x == 9.5);
  CHECK(p2[0].centroid_y == 6.5);
}

TEST_CASE("region properties match direct sums on random images") {
  std::mt19937_64 rng(9);
  const BinaryImage img = testutil::random_mask(80, 90, 0.35, rng);
  const GrayImage intensity = testutil::random_image(80, 90, rng);
  const Labeling lab = label_components(img);
  const auto props = region_props(lab, intensity);
  CHECK(props.size() == static_cast<std::size_t>(lab.count));
  for (const RegionProps& p : props) {
    double area = 0, sum = 0, sx = 0, sy = 0;
    for (std::size_t r = 0; r < 80; ++r) {
      for (std::size_t c = 0; c < 90; ++c) {
        if (lab.labels(r, c) != p.label_id) continue;
        area += 1;
        sum += intensity(r, c);
        sx += double(c);
        sy += double(r);
      }
    }
    CHECK(double(p.area_px) == area);
    CHECK(p.equivalent_diameter_px == 2.0 * std::sqrt(double(p.area_px) / std::numbers::pi));
    CHECK(p.mean_intensity == doctest::Approx(sum / area).epsilon(1e-12));
    CHECK(p.centroid_x == doctest::Approx(sx / area).epsilon(1e-12));
    CHECK(p.centroid_y == doctest::Approx(sy / area).epsilon(1e-12));
    CHECK(p.centroid_x >= double(p.min_col));
    CHECK(p.centroid_x <= double(p.max_col));
    CHECK(p.centroid_y >= double(p.min_row));
    CHECK(p.centroid_y <= double(p.max_row));
  }
}

TEST_CASE("quantile uses the lower nearest rank") {
  CHECK(quantile({}, 0.5) == 0.0);
  CHECK(quantile({4, 1, 3, 2}, 0.0) == 1);
  CHECK(quantile({4, 1, 3, 2}, 0.5) == 2);
  CHECK(quantile({4, 1, 3, 2}, 0.7) == 3);
  CHECK(quantile({4, 1, 3, 2}, 1.0) == 4);
}

TEST_CASE("serial reference kernels agree bitwise with the parallel ones") {
  std::mt19937_64 rng(10);
  const GrayImage img = testutil::random_image(123, 77, rng);
  CHECK(serial::gaussian_blur(img, 1.3) == gaussian_blur(img, 1.3));
  CHECK(serial::sobel_magnitude(img) == sobel_magnitude(img));
  const BinaryImage mask = testutil::random_mask(123, 77, 0.5, rng);
  CHECK(serial::erode(mask, 2) == erode(mask, 2));
  CHECK(serial::dilate(mask, 1) == dilate(mask, 1));
}
