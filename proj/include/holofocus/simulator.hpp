#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "holofocus/config.hpp"
#include "holofocus/particles.hpp"

namespace holofocus {

struct SamplingSpec {
  std::size_t count = 0;
  Volume volume;
  double min_diameter = 0.0;
  double max_diameter = 0.0;
  double pixel_pitch = 0.0;
  // Every pair must be at least this far apart laterally (pixels, Euclidean)
  // or at least min_axial_sep apart in z.
  double min_lateral_sep_px = 6.0;
  double min_axial_sep = 0.0;
  // Keeps centres this far (metres) from the lateral edges of the volume.
  double margin = 0.0;
  // Restricts z to these planes when non-empty.
  std::vector<double> planes;
  bool enforce_separation = true;
  std::uint64_t seed = 0;
  std::size_t max_attempts_per_particle = 20000;
};

/// Uniform rejection sampling; deterministic for a fixed seed. Throws
/// SamplingError when a particle cannot be placed within the attempt budget.
ParticleField sample_field(const SamplingSpec& spec);

/// Sampling spec equivalent to a `simulate` run with this config.
SamplingSpec scene_sampling_spec(const ToolkitConfig& config);

/// concentration (particles / ml) times illuminated volume (ml).
double expected_count(double concentration_per_ml, double illuminated_volume_ml);

}  // namespace holofocus
