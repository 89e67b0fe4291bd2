#include "holofocus/resolution.hpp"

#include <algorithm>
#include <cmath>

#include "holofocus/error.hpp"

namespace holofocus {

NumericalApertures numerical_apertures(const OpticalConfig& config, double z) {
  if (!std::isfinite(z) || !(z > 0.0)) throw ParameterError("distance must be positive");
  if (!(config.wavelength > 0.0) || !(config.pixel_pitch > 0.0) ||
      !(config.effective_aperture() > 0.0)) {
    throw ParameterError("wavelength, pixel pitch and aperture must be positive");
  }
  NumericalApertures na;
  na.holo = config.effective_aperture() / (2.0 * z);
  na.sensor = 0.61 * config.wavelength / (2.0 * config.pixel_pitch);
  na.dhs = std::min(na.holo, na.sensor);
  return na;
}

double lateral_resolution(const OpticalConfig& config, double z) {
  return config.wavelength / numerical_apertures(config, z).dhs;
}

double axial_resolution(const OpticalConfig& config, double z) {
  const double na = numerical_apertures(config, z).dhs;
  return config.wavelength / (na * na);
}

std::size_t axial_slice_count(double axial_res, double depth_spacing) {
  if (!(axial_res > 0.0) || !(depth_spacing > 0.0) || !std::isfinite(axial_res) ||
      !std::isfinite(depth_spacing)) {
    throw ParameterError("axial resolution and depth spacing must be positive");
  }
  // Guard against 2.5e-3 / 50e-6 landing a hair above an integer.
  const double ratio = axial_res / depth_spacing;
  const double nearest = std::round(ratio);
  const double slices = std::abs(ratio - nearest) < 1e-9 * std::max(1.0, nearest)
                            ? nearest
                            : std::ceil(ratio);
  return std::max<std::size_t>(1, static_cast<std::size_t>(slices));
}

double crossover_distance(const OpticalConfig& config) {
  return config.effective_aperture() * config.pixel_pitch / (0.61 * config.wavelength);
}

ResolutionReport resolution_report(const OpticalConfig& config, double z) {
  const NumericalApertures na = numerical_apertures(config, z);
  ResolutionReport report;
  report.na_holo = na.holo;
  report.na_sensor = na.sensor;
  report.na_dhs = na.dhs;
  report.lateral_res = config.wavelength / na.dhs;
  report.axial_res = config.wavelength / (na.dhs * na.dhs);
  report.axial_slice_num = axial_slice_count(report.axial_res, config.depth_spacing);
  return report;
}

double grouping_axial_resolution(const OpticalConfig& config) {
  if (config.axial_resolution) return *config.axial_resolution;
  return axial_resolution(config, 0.5 * (config.dis1 + config.dis_end));
}

}  // namespace holofocus
