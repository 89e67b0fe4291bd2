#include "holofocus/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "holofocus/error.hpp"
#include "holofocus/resolution.hpp"

namespace holofocus {

namespace {

void validate(const SamplingSpec& spec) {
  const Volume& v = spec.volume;
  if (!(spec.pixel_pitch > 0.0)) throw ParameterError("pixel pitch must be positive");
  if (!(v.width > 0.0) || !(v.height > 0.0)) throw ParameterError("volume must have extent");
  if (!(v.z_near > 0.0) || v.z_far < v.z_near) {
    throw ParameterError("volume depth needs 0 < z_near <= z_far");
  }
  if (!(spec.min_diameter > 0.0) || spec.max_diameter < spec.min_diameter) {
    throw ParameterError("diameter range needs 0 < min <= max");
  }
  if (spec.margin < 0.0 || 2.0 * spec.margin >= std::min(v.width, v.height)) {
    throw ParameterError("lateral margin leaves no room for particles");
  }
  for (double z : spec.planes) {
    if (z < v.z_near || z > v.z_far) throw ParameterError("sampling plane outside the volume");
  }
}

bool separated(const Particle& a, const Particle& b, const SamplingSpec& spec) {
  const double dx = (a.x - b.x) / spec.pixel_pitch;
  const double dy = (a.y - b.y) / spec.pixel_pitch;
  if (std::hypot(dx, dy) >= spec.min_lateral_sep_px) return true;
  return std::abs(a.z - b.z) >= spec.min_axial_sep;
}

}  // namespace

ParticleField sample_field(const SamplingSpec& spec) {
  validate(spec);
  ParticleField field;
  field.volume = spec.volume;
  field.seed = spec.seed;
  if (spec.count == 0) return field;

  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> ux(spec.margin, spec.volume.width - spec.margin);
  std::uniform_real_distribution<double> uy(spec.margin, spec.volume.height - spec.margin);
  std::uniform_real_distribution<double> uz(spec.volume.z_near, spec.volume.z_far);
  std::uniform_real_distribution<double> ud(spec.min_diameter, spec.max_diameter);
  std::uniform_int_distribution<std::size_t> uplane(0, spec.planes.empty() ? 0 : spec.planes.size() - 1);

  field.particles.reserve(spec.count);
  while (field.particles.size() < spec.count) {
    bool placed = false;
    for (std::size_t attempt = 0; attempt < spec.max_attempts_per_particle; ++attempt) {
      Particle p;
      p.x = ux(rng);
      p.y = uy(rng);
      p.z = spec.planes.empty() ? uz(rng) : spec.planes[uplane(rng)];
      p.diameter = ud(rng);
      bool ok = true;
      if (spec.enforce_separation) {
        for (const Particle& q : field.particles) {
          if (!separated(p, q, spec)) {
            ok = false;
            break;
          }
        }
      }
      if (ok) {
        field.particles.push_back(p);
        placed = true;
        break;
      }
    }
    if (!placed) {
      throw SamplingError("could not place particle " + std::to_string(field.particles.size()) +
                          " under the separation constraints");
    }
  }
  return field;
}

SamplingSpec scene_sampling_spec(const ToolkitConfig& config) {
  const OpticalConfig& o = config.optics;
  const SceneConfig& s = config.scene;
  SamplingSpec spec;
  spec.count = s.count;
  spec.volume.width = static_cast<double>(o.grid_cols) * o.pixel_pitch;
  spec.volume.height = static_cast<double>(o.grid_rows) * o.pixel_pitch;
  spec.volume.z_near = s.z_min;
  spec.volume.z_far = s.z_max;
  spec.min_diameter = s.min_dia.value_or(o.min_dia);
  spec.max_diameter = s.max_dia.value_or(o.max_dia);
  spec.pixel_pitch = o.pixel_pitch;
  spec.min_lateral_sep_px = s.min_lateral_sep_px;
  spec.min_axial_sep = s.min_axial_sep.value_or(
      o.axial_resolution.value_or(axial_resolution(o, 0.5 * (s.z_min + s.z_max))));
  spec.margin = s.margin_px * o.pixel_pitch;
  spec.planes = s.planes;
  spec.enforce_separation = s.enforce_separation;
  spec.seed = s.seed;
  return spec;
}

double expected_count(double concentration_per_ml, double illuminated_volume_ml) {
  if (!(concentration_per_ml >= 0.0) || !(illuminated_volume_ml >= 0.0) ||
      !std::isfinite(concentration_per_ml) || !std::isfinite(illuminated_volume_ml)) {
    throw ParameterError("concentration and volume must be finite and >= 0");
  }
  return concentration_per_ml * illuminated_volume_ml;
}

}  // namespace holofocus
