#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "holofocus/config.hpp"
#include "holofocus/grid.hpp"
#include "holofocus/stack.hpp"

namespace holofocus {

struct ProjectionPair {
  GrayImage min_intensity_img;
  GrayImage max_gradient_img;
};

/// Pixel-wise minimum over the slices. Throws ParameterError when empty.
GrayImage min_intensity_projection(std::span<const GrayImage> slices);
GrayImage min_intensity_projection(const ReconstructionStack& stack);

/// Sobel magnitude scaled to [0, 1] by its maximum; a constant slice yields zeros.
GrayImage gradient_image(const GrayImage& slice);

/// Pixel-wise maximum over gradient images. Throws ParameterError when empty.
GrayImage max_gradient_projection(std::span<const GrayImage> gradients);

ProjectionPair make_projections(const ReconstructionStack& stack);

/// Inclusive crop window, 0-indexed.
struct CropBox {
  std::size_t row0 = 0, row1 = 0, col0 = 0, col1 = 0;
};

struct ParticleThreshold {
  CropBox box;
  double best_threshold = 0.0;
  double best_grad_mean = 0.0;
};

struct CalibrationResult {
  double fixed_intensity = 0.0;
  std::vector<ParticleThreshold> particles;
};

/// Thresholds swept by the calibration: v1, v1 + step, ... up to v2.
std::vector<double> sweep_thresholds(const CalibrationParams& params);

/// Grad_mean of one crop: mean over the box of canny(Reim_min < t) times the
/// max-gradient image.
double grad_mean(const ProjectionPair& projections, const CropBox& box, double threshold);

/// Regions used for calibration: the sample_count largest regions of
/// (Reim_min < (v1 + v2) / 2) that do not touch the image border, each
/// padded by half its size.
std::vector<CropBox> calibration_regions(const GrayImage& min_intensity,
                                         const CalibrationParams& params);

/// Constrained intensity: per sampled particle the threshold maximizing
/// Grad_mean, then the minimum over particles. Throws CalibrationError when
/// no region can be isolated.
CalibrationResult find_constrained_intensity(const ReconstructionStack& stack,
                                             const CalibrationParams& params);
CalibrationResult find_constrained_intensity(const ProjectionPair& projections,
                                             const CalibrationParams& params);

}  // namespace holofocus
