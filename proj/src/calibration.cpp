#include "holofocus/calibration.hpp"

#include <algorithm>
#include <cmath>

#include "holofocus/error.hpp"
#include "holofocus/morphology.hpp"

namespace holofocus {

namespace {

GrayImage project(std::span<const GrayImage> slices, bool take_min) {
  if (slices.empty()) throw ParameterError("projection of an empty stack");
  for (const GrayImage& s : slices) {
    if (!s.same_shape(slices.front())) throw ParameterError("stack slices differ in size");
  }
  GrayImage out(slices.front().rows(), slices.front().cols());
  const std::size_t n = out.size();
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) {
    double v = slices.front()[i];
    for (std::size_t s = 1; s < slices.size(); ++s) {
      v = take_min ? std::min(v, slices[s][i]) : std::max(v, slices[s][i]);
    }
    out[i] = v;
  }
  return out;
}

// Every boundary pixel of a 0/1 image has Sobel magnitude >= 1.
BinaryImage binary_edges(const GrayImage& min_intensity, double threshold) {
  const BinaryImage bin = threshold_below(min_intensity, threshold);
  GrayImage as_gray(bin.rows(), bin.cols());
  for (std::size_t i = 0; i < bin.size(); ++i) as_gray[i] = bin[i];
  return canny_absolute(as_gray, 1.0, 1.0);
}

double crop_grad_mean(const BinaryImage& edges, const GrayImage& grad_max, const CropBox& box) {
  double sum = 0.0;
  for (std::size_t r = box.row0; r <= box.row1; ++r) {
    for (std::size_t c = box.col0; c <= box.col1; ++c) {
      if (edges(r, c)) sum += grad_max(r, c);
    }
  }
  const double area = static_cast<double>((box.row1 - box.row0 + 1) * (box.col1 - box.col0 + 1));
  return sum / area;
}

std::vector<CropBox> regions_at(const GrayImage& min_intensity, double threshold,
                                std::size_t sample_count) {
  const Labeling lab = label_components(threshold_below(min_intensity, threshold));
  std::vector<RegionProps> props = region_props(lab, min_intensity);
  const std::size_t rows = min_intensity.rows();
  const std::size_t cols = min_intensity.cols();
  std::erase_if(props, [&](const RegionProps& p) {
    return p.min_row == 0 || p.min_col == 0 || p.max_row + 1 == rows || p.max_col + 1 == cols;
  });
  std::stable_sort(props.begin(), props.end(),
                   [](const RegionProps& a, const RegionProps& b) { return a.area_px > b.area_px; });
  if (props.size() > sample_count) props.resize(sample_count);

  std::vector<CropBox> boxes;
  for (const RegionProps& p : props) {
    const std::size_t extent = std::max(p.max_row - p.min_row, p.max_col - p.min_col) + 1;
    const std::size_t pad = std::max<std::size_t>(2, extent / 2);
    CropBox box;
    box.row0 = p.min_row > pad ? p.min_row - pad : 0;
    box.col0 = p.min_col > pad ? p.min_col - pad : 0;
    box.row1 = std::min(rows - 1, p.max_row + pad);
    box.col1 = std::min(cols - 1, p.max_col + pad);
    boxes.push_back(box);
  }
  return boxes;
}

}  // namespace

GrayImage min_intensity_projection(std::span<const GrayImage> slices) {
  return project(slices, true);
}

GrayImage min_intensity_projection(const ReconstructionStack& stack) {
  return project(stack.slices, true);
}

GrayImage gradient_image(const GrayImage& slice) {
  GrayImage mag = sobel_magnitude(slice);
  double peak = 0.0;
  for (double v : mag.values()) peak = std::max(peak, v);
  if (peak > 0.0) {
    for (double& v : mag.values()) v /= peak;
  }
  return mag;
}

GrayImage max_gradient_projection(std::span<const GrayImage> gradients) {
  return project(gradients, false);
}

ProjectionPair make_projections(const ReconstructionStack& stack) {
  if (stack.empty()) throw ParameterError("projection of an empty stack");
  ProjectionPair out;
  out.min_intensity_img = min_intensity_projection(stack);
  // Running maximum keeps one gradient image alive at a time.
  out.max_gradient_img = gradient_image(stack.slices.front());
  for (std::size_t s = 1; s < stack.size(); ++s) {
    const GrayImage g = gradient_image(stack.slices[s]);
    for (std::size_t i = 0; i < g.size(); ++i) {
      out.max_gradient_img[i] = std::max(out.max_gradient_img[i], g[i]);
    }
  }
  return out;
}

std::vector<double> sweep_thresholds(const CalibrationParams& params) {
  if (!(params.step > 0.0) || !(params.v1 < params.v2)) {
    throw ParameterError("calibration sweep needs v1 < v2 and step > 0");
  }
  std::vector<double> out;
  for (std::size_t i = 0;; ++i) {
    const double t = params.v1 + static_cast<double>(i) * params.step;
    if (t > params.v2 + 1e-9 * params.step) break;
    out.push_back(std::min(t, params.v2));
  }
  return out;
}

double grad_mean(const ProjectionPair& projections, const CropBox& box, double threshold) {
  const BinaryImage edges = binary_edges(projections.min_intensity_img, threshold);
  return crop_grad_mean(edges, projections.max_gradient_img, box);
}

std::vector<CropBox> calibration_regions(const GrayImage& min_intensity,
                                         const CalibrationParams& params) {
  std::vector<CropBox> boxes =
      regions_at(min_intensity, 0.5 * (params.v1 + params.v2), params.sample_count);
  if (boxes.empty()) boxes = regions_at(min_intensity, params.v2, params.sample_count);
  return boxes;
}

CalibrationResult find_constrained_intensity(const ProjectionPair& projections,
                                             const CalibrationParams& params) {
  if (!(params.v1 >= 0.0 && params.v1 < params.v2 && params.v2 <= 1.0)) {
    throw ParameterError("calibration range needs 0 <= v1 < v2 <= 1");
  }
  if (params.sample_count < 1) throw ParameterError("calibration needs sample_count >= 1");
  if (!projections.min_intensity_img.same_shape(projections.max_gradient_img)) {
    throw ParameterError("projection images differ in size");
  }
  const std::vector<CropBox> boxes =
      calibration_regions(projections.min_intensity_img, params);
  if (boxes.empty()) {
    throw CalibrationError(
        "no particle region found in the minimum-intensity image; supply fixed_intensity");
  }

  const std::vector<double> thresholds = sweep_thresholds(params);
  // scores[t][p]
  std::vector<std::vector<double>> scores(thresholds.size(), std::vector<double>(boxes.size()));
  const long n = static_cast<long>(thresholds.size());
#pragma omp parallel for schedule(dynamic)
  for (long ti = 0; ti < n; ++ti) {
    const BinaryImage edges =
        binary_edges(projections.min_intensity_img, thresholds[static_cast<std::size_t>(ti)]);
    for (std::size_t p = 0; p < boxes.size(); ++p) {
      scores[static_cast<std::size_t>(ti)][p] =
          crop_grad_mean(edges, projections.max_gradient_img, boxes[p]);
    }
  }

  CalibrationResult result;
  for (std::size_t p = 0; p < boxes.size(); ++p) {
    ParticleThreshold best{boxes[p], thresholds.front(), scores.front()[p]};
    for (std::size_t t = 1; t < thresholds.size(); ++t) {
      if (scores[t][p] > best.best_grad_mean) {
        best.best_threshold = thresholds[t];
        best.best_grad_mean = scores[t][p];
      }
    }
    if (best.best_grad_mean > 0.0) result.particles.push_back(best);
  }
  if (result.particles.empty()) {
    throw CalibrationError("no calibration region produced an edge; supply fixed_intensity");
  }
  result.fixed_intensity = result.particles.front().best_threshold;
  for (const ParticleThreshold& p : result.particles) {
    result.fixed_intensity = std::min(result.fixed_intensity, p.best_threshold);
  }
  return result;
}

CalibrationResult find_constrained_intensity(const ReconstructionStack& stack,
                                             const CalibrationParams& params) {
  return find_constrained_intensity(make_projections(stack), params);
}

}  // namespace holofocus
