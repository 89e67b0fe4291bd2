#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace holofocus {

/// Knobs of the per-slice morphological candidate detector.
struct DetectionParams {
  double gaussian_sigma_px = 1.0;
  // Canny thresholds as quantiles of the gradient-magnitude distribution.
  double canny_low_quantile = 0.7;
  double canny_high_quantile = 0.9;
  int morph_radius_px = 1;
  // Centroids closer than this on both axes belong to the same particle.
  double lateral_window_px = 6.0;
};

/// Threshold sweep used to find the constrained intensity.
struct CalibrationParams {
  double v1 = 0.2;
  double v2 = 0.6;
  double step = 0.01;
  std::size_t sample_count = 5;
};

/// What is back-propagated to form the slices: the recorded intensity I, or
/// its square root.
enum class ReconstructionInput { intensity, amplitude };

/// Geometry of the in-line setup plus the reconstruction and detection settings.
/// All lengths are in metres.
struct OpticalConfig {
  double wavelength = 532e-9;
  double pixel_pitch = 3.45e-6;
  std::size_t grid_rows = 1024;
  std::size_t grid_cols = 1024;
  // Effective hologram height D; grid_rows * pixel_pitch when unset.
  std::optional<double> aperture_height;

  double dis1 = 31e-3;
  double dis_end = 34e-3;
  double depth_spacing = 50e-6;
  ReconstructionInput reconstruction_input = ReconstructionInput::intensity;

  double min_dia = 50e-6;
  double max_dia = 62e-6;

  // Upper bound on a candidate's mean amplitude; calibrated when unset.
  std::optional<double> fixed_intensity;
  // Overrides the axial resolution used for the grouping window.
  std::optional<double> axial_resolution;

  DetectionParams detection;
  CalibrationParams calibration;

  double effective_aperture() const;
  /// Number of reconstruction slices in [dis1, dis_end].
  std::size_t slice_count() const;
  /// Throws ParameterError on any violated invariant.
  void validate() const;
};

/// Parameters of the synthetic scene written by `simulate`.
struct SceneConfig {
  std::size_t count = 17;
  double z_min = 32.0e-3;
  double z_max = 33.0e-3;
  // When non-empty, particles are placed on these planes only.
  std::vector<double> planes;
  // Particle diameters; the optical candidate gate [min_dia, max_dia] when unset.
  std::optional<double> min_dia;
  std::optional<double> max_dia;
  double min_lateral_sep_px = 6.0;
  // Unset means one axial-resolution cell at the scene centre.
  std::optional<double> min_axial_sep;
  double margin_px = 24.0;
  double noise_level = 0.0;
  bool enforce_separation = true;
  std::uint64_t seed = 1;
};

struct ToolkitConfig {
  OpticalConfig optics;
  SceneConfig scene;
};

/// Parses the flat `key = value` format. Unknown keys are an error.
ToolkitConfig parse_config(std::istream& in);
ToolkitConfig load_config(const std::string& path);
void write_config(std::ostream& out, const ToolkitConfig& config);
void save_config(const std::string& path, const ToolkitConfig& config);

/// Stable 64-bit FNV-1a hash of the canonical config text.
std::uint64_t config_hash(const ToolkitConfig& config);

}  // namespace holofocus
