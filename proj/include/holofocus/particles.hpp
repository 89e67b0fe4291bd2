#pragma once

#include <cstdint>
#include <vector>

namespace holofocus {

/// One spherical particle; x and y are lateral positions measured from the
/// centre of pixel (0, 0), z is the distance to the hologram plane.
struct Particle {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double diameter = 0.0;

  friend bool operator==(const Particle&, const Particle&) = default;
};

struct Volume {
  double width = 0.0;
  double height = 0.0;
  double z_near = 0.0;
  double z_far = 0.0;

  friend bool operator==(const Volume&, const Volume&) = default;
};

struct ParticleField {
  std::vector<Particle> particles;
  Volume volume;
  std::uint64_t seed = 0;

  friend bool operator==(const ParticleField&, const ParticleField&) = default;
};

}  // namespace holofocus
