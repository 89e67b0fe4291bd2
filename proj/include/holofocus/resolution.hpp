#pragma once

#include <cstddef>

#include "holofocus/config.hpp"

namespace holofocus {

struct NumericalApertures {
  double holo = 0.0;
  double sensor = 0.0;
  double dhs = 0.0;  // the smaller of the two
};

struct ResolutionReport {
  double na_holo = 0.0;
  double na_sensor = 0.0;
  double na_dhs = 0.0;
  double lateral_res = 0.0;
  double axial_res = 0.0;
  std::size_t axial_slice_num = 1;
};

/// NA_holo = D / 2z, NA_sensor = 0.61 lambda / (2 pitch), NA_dhs = min.
NumericalApertures numerical_apertures(const OpticalConfig& config, double z);

/// lambda / NA_dhs
double lateral_resolution(const OpticalConfig& config, double z);

/// lambda / NA_dhs^2
double axial_resolution(const OpticalConfig& config, double z);

/// ceil(axial_res / depth_spacing), at least 1.
std::size_t axial_slice_count(double axial_res, double depth_spacing);

/// Distance where the limiting aperture switches from hologram to sensor.
double crossover_distance(const OpticalConfig& config);

ResolutionReport resolution_report(const OpticalConfig& config, double z);

/// Axial resolution driving the grouping window: the config override when
/// present, otherwise evaluated at the centre of [dis1, dis_end].
double grouping_axial_resolution(const OpticalConfig& config);

}  // namespace holofocus
