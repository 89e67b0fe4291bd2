#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "holofocus/config.hpp"
#include "holofocus/grid.hpp"
#include "holofocus/parallel.hpp"
#include "holofocus/propagation.hpp"
#include "holofocus/stack.hpp"

namespace holofocus {

enum class FocalStatus : std::uint8_t { untraversed = 0, focused = 1, traversed = 2 };

struct SliceMeta {
  int slice_index = 0;
  int reim_index = 0;
  double distance = 0.0;
};

/// One candidate focused particle (one column of matrix M).
struct CandidateRecord {
  double mean_intensity = 0.0;   // (1)
  double equiv_diameter = 0.0;   // (2), metres
  double centroid_x = 0.0;       // (3), pixels, 0-indexed column
  double centroid_y = 0.0;       // (4), pixels, 0-indexed row
  double metric = 0.0;           // (5) = (1) * (2)
  double distance = 0.0;         // (6), metres
  int reim_index = 0;            // (7)
  FocalStatus focal_status = FocalStatus::untraversed;  // (8)
  int slice_index = 0;

  friend bool operator==(const CandidateRecord&, const CandidateRecord&) = default;
};

using CandidateMatrix = std::vector<CandidateRecord>;

struct ParticleDetection {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double diameter = 0.0;

  friend bool operator==(const ParticleDetection&, const ParticleDetection&) = default;
};

/// Back-propagates the hologram (I, or sqrt(I) per config.reconstruction_input)
/// to dis1, dis1 + spacing, ... and keeps the amplitudes normalized by the
/// stack-wide maximum. Slices are computed in
/// parallel unless exec is serial.
ReconstructionStack reconstruct_stack(const HologramFrame& holo, const OpticalConfig& config,
                                      Exec exec = Exec::parallel);

/// Binary particle mask of one slice: blur, Canny, hole filling, erosion, dilation.
BinaryImage particle_mask(const GrayImage& slice, const DetectionParams& params);

/// Candidates of one slice passing the intensity and diameter gates, sorted
/// by centroid raster order. Requires config.fixed_intensity.
CandidateMatrix detect_candidates(const GrayImage& slice, const SliceMeta& meta,
                                  const OpticalConfig& config);

/// Matrix M: detect_candidates over all slices, concatenated in slice order.
CandidateMatrix collect_candidates(const ReconstructionStack& stack, const OpticalConfig& config,
                                   Exec exec = Exec::parallel);

/// Indices of M grouped with the record at `anchor`: centroids within the
/// lateral window on both axes and slice index in
/// [slice(anchor), slice(anchor) + axi_slice_num]. M must be sorted by slice.
std::vector<std::size_t> gather_group(const CandidateMatrix& m, std::size_t anchor,
                                      std::size_t axi_slice_num, double lateral_window_px);

/// Runs the focal-status pass over M in place and returns the focused
/// records (matrix M_new). Sequential by construction.
CandidateMatrix select_focused(CandidateMatrix& m, std::size_t axi_slice_num,
                               double lateral_window_px = 6.0);

struct AutofocusResult {
  std::vector<ParticleDetection> detections;
  CandidateMatrix candidates;
  CandidateMatrix focused;
  double fixed_intensity = 0.0;
  std::size_t axi_slice_num = 0;
  std::size_t slice_count = 0;
};

/// Converts focused records to physical detections (unit magnification).
std::vector<ParticleDetection> to_detections(const CandidateMatrix& focused, double pixel_pitch);

/// Full pipeline. When config.fixed_intensity is unset it is calibrated on
/// the reconstructed stack first.
AutofocusResult autofocus_pipeline(const HologramFrame& holo, const OpticalConfig& config);

/// Pipeline on an already reconstructed stack.
AutofocusResult autofocus_stack(const ReconstructionStack& stack, const OpticalConfig& config);

}  // namespace holofocus
