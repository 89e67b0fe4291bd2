#pragma once

#include <cstddef>
#include <memory>

#include "holofocus/config.hpp"
#include "holofocus/grid.hpp"
#include "holofocus/particles.hpp"

namespace holofocus {

/// Recorded hologram intensity; dimensions match the optical grid.
struct HologramFrame {
  GrayImage intensity;
};

/// Fresnel transfer function exp(jkz) * exp(-j*pi*lambda*z*(fx^2 + fy^2)),
/// sampled on the unshifted FFT frequency grid: element (r, c) holds
/// fy = k_r / (rows * pitch), fx = k_c / (cols * pitch) with k in
/// {0, 1, ..., N/2 - 1, -N/2, ..., -1}. Negative z propagates backwards.
ComplexField transfer_function(std::size_t rows, std::size_t cols, double pixel_pitch,
                               double wavelength, double z);

/// Propagates a field by z with the transfer-function method. Uses a unitary
/// transform pair, so the L2 norm is preserved.
ComplexField propagate(const ComplexField& field, double wavelength, double z);

/// Caches the spectrum of a source field so it can be refocused at many
/// distances with one inverse transform each. Thread-safe for concurrent
/// field_at() calls.
class FresnelPropagator {
 public:
  FresnelPropagator(const ComplexField& source, double wavelength);
  ~FresnelPropagator();
  FresnelPropagator(FresnelPropagator&&) noexcept;
  FresnelPropagator& operator=(FresnelPropagator&&) noexcept;

  ComplexField field_at(double z) const;

  std::size_t rows() const;
  std::size_t cols() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Opaque-disk mask of one particle: 1 inside, 0 outside, centred on the
/// nearest grid point. Pixels beyond the grid are clipped.
GrayImage particle_disk(const Particle& particle, std::size_t rows, std::size_t cols,
                        double pixel_pitch);

/// Scattered field H = sum_i exp(-jkz_i) * propagate(-disk_i, z_i) at the hologram
/// plane, i.e. relative to the plane reference wave that crossed the same distance.
ComplexField object_field(const ParticleField& particles, const OpticalConfig& config);

/// In-line hologram |1 + H|^2 + n with zero-mean Gaussian n of standard
/// deviation noise_level (seeded by particles.seed), clipped at 0.
HologramFrame synthesize_hologram(const ParticleField& particles, const OpticalConfig& config,
                                  double noise_level);

}  // namespace holofocus
