#include "holofocus/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <vector>

#include "fft.hpp"
#include "holofocus/error.hpp"

namespace holofocus {

namespace {

using detail::FftDirection;
using detail::fft2_inplace;

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw ParameterError(std::string(what) + " must be finite");
}

// Signed FFT bin index: 0, 1, ..., n/2 - 1, -n/2, ..., -1.
double signed_bin(std::size_t k, std::size_t n) {
  return k < (n + 1) / 2 ? static_cast<double>(k)
                         : static_cast<double>(k) - static_cast<double>(n);
}

std::vector<Complex> chirp_factors(std::size_t n, double pixel_pitch, double wavelength, double z) {
  std::vector<Complex> out(n);
  const double df = 1.0 / (static_cast<double>(n) * pixel_pitch);
  for (std::size_t k = 0; k < n; ++k) {
    const double f = signed_bin(k, n) * df;
    out[k] = std::polar(1.0, -std::numbers::pi * wavelength * z * f * f);
  }
  return out;
}

// kz reaches 1e6 rad; the fma term recovers the rounding error of the
// product so that carrier(z1) * carrier(z2) == carrier(z1 + z2) to 1e-15.
Complex carrier(double wavelength, double z) {
  const double k = 2.0 * std::numbers::pi / wavelength;
  const double kz = k * z;
  const double residual = std::fma(k, z, -kz);
  return std::polar(1.0, std::fmod(kz, 2.0 * std::numbers::pi) + residual);
}

void validate_propagation(double pixel_pitch, double wavelength, double z) {
  require_finite(pixel_pitch, "pixel pitch");
  require_finite(wavelength, "wavelength");
  require_finite(z, "propagation distance");
  if (!(wavelength > 0.0)) throw ParameterError("wavelength must be positive");
  if (!(pixel_pitch > 0.0)) throw ParameterError("pixel pitch must be positive");
}

// spectrum *= transfer function, rows in parallel.
void apply_transfer(ComplexGrid& spectrum, double pixel_pitch, double wavelength, double z) {
  const std::size_t rows = spectrum.rows();
  const std::size_t cols = spectrum.cols();
  const auto row_chirp = chirp_factors(rows, pixel_pitch, wavelength, z);
  const auto col_chirp = chirp_factors(cols, pixel_pitch, wavelength, z);
  const Complex c0 = carrier(wavelength, z);
#pragma omp parallel for schedule(static)
  for (std::size_t r = 0; r < rows; ++r) {
    const Complex rf = c0 * row_chirp[r];
    auto line = spectrum.row(r);
    for (std::size_t c = 0; c < cols; ++c) line[c] *= rf * col_chirp[c];
  }
}

}  // namespace

ComplexField transfer_function(std::size_t rows, std::size_t cols, double pixel_pitch,
                               double wavelength, double z) {
  validate_propagation(pixel_pitch, wavelength, z);
  ComplexField out(rows, cols, pixel_pitch, Complex(1.0, 0.0));
  if (z == 0.0) return out;
  apply_transfer(out.data(), pixel_pitch, wavelength, z);
  return out;
}

ComplexField propagate(const ComplexField& field, double wavelength, double z) {
  validate_propagation(field.pixel_pitch(), wavelength, z);
  if (z == 0.0) return field;
  ComplexGrid work = field.data();
  fft2_inplace(work, FftDirection::forward);
  apply_transfer(work, field.pixel_pitch(), wavelength, z);
  fft2_inplace(work, FftDirection::inverse);
  return ComplexField(std::move(work), field.pixel_pitch());
}

struct FresnelPropagator::Impl {
  ComplexGrid spectrum;
  double pixel_pitch;
  double wavelength;
};

FresnelPropagator::FresnelPropagator(const ComplexField& source, double wavelength)
    : impl_(std::make_unique<Impl>(Impl{source.data(), source.pixel_pitch(), wavelength})) {
  validate_propagation(source.pixel_pitch(), wavelength, 0.0);
  fft2_inplace(impl_->spectrum, FftDirection::forward);
}

FresnelPropagator::~FresnelPropagator() = default;
FresnelPropagator::FresnelPropagator(FresnelPropagator&&) noexcept = default;
FresnelPropagator& FresnelPropagator::operator=(FresnelPropagator&&) noexcept = default;

std::size_t FresnelPropagator::rows() const { return impl_->spectrum.rows(); }
std::size_t FresnelPropagator::cols() const { return impl_->spectrum.cols(); }

ComplexField FresnelPropagator::field_at(double z) const {
  require_finite(z, "propagation distance");
  ComplexGrid work = impl_->spectrum;
  apply_transfer(work, impl_->pixel_pitch, impl_->wavelength, z);
  fft2_inplace(work, FftDirection::inverse);
  return ComplexField(std::move(work), impl_->pixel_pitch);
}

GrayImage particle_disk(const Particle& particle, std::size_t rows, std::size_t cols,
                        double pixel_pitch) {
  GrayImage disk(rows, cols, 0.0);
  const long r0 = std::lround(particle.y / pixel_pitch);
  const long c0 = std::lround(particle.x / pixel_pitch);
  const double radius = particle.diameter / (2.0 * pixel_pitch);
  const long reach = static_cast<long>(std::ceil(radius));
  const double r2 = radius * radius;
  for (long dr = -reach; dr <= reach; ++dr) {
    const long r = r0 + dr;
    if (r < 0 || r >= static_cast<long>(rows)) continue;
    for (long dc = -reach; dc <= reach; ++dc) {
      const long c = c0 + dc;
      if (c < 0 || c >= static_cast<long>(cols)) continue;
      if (static_cast<double>(dr * dr + dc * dc) <= r2) {
        disk(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = 1.0;
      }
    }
  }
  return disk;
}

namespace {

void validate_particles(const ParticleField& field, const OpticalConfig& config) {
  for (std::size_t i = 0; i < field.particles.size(); ++i) {
    const Particle& p = field.particles[i];
    const std::string id = "particle " + std::to_string(i);
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z) ||
        !std::isfinite(p.diameter)) {
      throw ParameterError(id + " has non-finite coordinates");
    }
    if (!(p.z > 0.0)) throw ParameterError(id + " must lie in front of the sensor (z > 0)");
    if (p.diameter / config.pixel_pitch < 2.0) {
      throw ParameterError(id + " is smaller than 2 pixels");
    }
    const long r0 = std::lround(p.y / config.pixel_pitch);
    const long c0 = std::lround(p.x / config.pixel_pitch);
    if (r0 < 0 || c0 < 0 || r0 >= static_cast<long>(config.grid_rows) ||
        c0 >= static_cast<long>(config.grid_cols)) {
      throw PlacementError(id + " lies outside the hologram grid");
    }
  }
}

}  // namespace

ComplexField object_field(const ParticleField& particles, const OpticalConfig& config) {
  config.validate();
  validate_particles(particles, config);
  const std::size_t rows = config.grid_rows;
  const std::size_t cols = config.grid_cols;

  // Particles sharing a plane share one transform.
  std::map<double, ComplexGrid> planes;
  for (const Particle& p : particles.particles) {
    auto [it, inserted] = planes.try_emplace(p.z, rows, cols);
    const GrayImage disk = particle_disk(p, rows, cols, config.pixel_pitch);
    ComplexGrid& plane = it->second;
    for (std::size_t i = 0; i < disk.size(); ++i) plane[i] -= disk[i];
  }

  // The reference wave travels the same distance, so each scattered wave is
  // taken relative to it: the exp(jkz) carrier cancels.
  ComplexGrid total(rows, cols);
  for (auto& [z, plane] : planes) {
    fft2_inplace(plane, FftDirection::forward);
    apply_transfer(plane, config.pixel_pitch, config.wavelength, z);
    const Complex relative = std::conj(carrier(config.wavelength, z));
    for (std::size_t i = 0; i < total.size(); ++i) total[i] += relative * plane[i];
  }
  if (!planes.empty()) fft2_inplace(total, FftDirection::inverse);
  return ComplexField(std::move(total), config.pixel_pitch);
}

HologramFrame synthesize_hologram(const ParticleField& particles, const OpticalConfig& config,
                                  double noise_level) {
  if (!std::isfinite(noise_level) || noise_level < 0.0) {
    throw ParameterError("noise level must be finite and >= 0");
  }
  const ComplexField h = object_field(particles, config);
  HologramFrame frame{GrayImage(config.grid_rows, config.grid_cols)};
  for (std::size_t i = 0; i < frame.intensity.size(); ++i) {
    frame.intensity[i] = std::norm(Complex(1.0, 0.0) + h.data()[i]);
  }
  if (noise_level > 0.0) {
    std::mt19937_64 rng(particles.seed ^ 0x9e3779b97f4a7c15ULL);
    std::normal_distribution<double> noise(0.0, noise_level);
    for (double& v : frame.intensity.values()) v = std::max(0.0, v + noise(rng));
  }
  return frame;
}

}  // namespace holofocus
