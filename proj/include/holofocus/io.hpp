#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "holofocus/autofocus.hpp"
#include "holofocus/grid.hpp"
#include "holofocus/particles.hpp"

namespace holofocus::io {

/// 16-bit grayscale PNG. Values are stored as round(v / scale * 65535) with
/// scale = max(img) (or 1 for an all-zero image); the scale is kept in a
/// tEXt chunk and reapplied on read.
void write_png16(const std::string& path, const GrayImage& img);
GrayImage read_png16(const std::string& path);

/// Raw little-endian float32 planar image with a 16-byte header: the 8-byte
/// magic "HOLOF32\0", then rows and cols as uint32.
void write_raw_f32(const std::string& path, const GrayImage& img);
GrayImage read_raw_f32(const std::string& path);

/// Dispatches on extension: .png or .raw / .f32.
void write_image(const std::string& path, const GrayImage& img);
GrayImage read_image(const std::string& path);

/// CSV with header `id,x_m,y_m,z_m,diameter_m`, values printed with 17
/// significant digits so reading back is exact.
void write_particles_csv(const std::string& path, const std::vector<Particle>& particles);
std::vector<Particle> read_particles_csv(const std::string& path);
void write_detections_csv(const std::string& path,
                          const std::vector<ParticleDetection>& detections);
std::vector<ParticleDetection> read_detections_csv(const std::string& path);

/// Provenance written next to every CSV as <csv>.json.
struct Sidecar {
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  double pixel_pitch = 0.0;
  std::optional<double> axial_resolution;
  std::string kind;  // "truth" or "detections"
};

std::string sidecar_path(const std::string& csv_path);
void write_sidecar(const std::string& csv_path, const Sidecar& sidecar);
std::optional<Sidecar> read_sidecar(const std::string& csv_path);

}  // namespace holofocus::io
