#include "holofocus/autofocus.hpp"

#include <algorithm>
#include <cmath>

#include "holofocus/calibration.hpp"
#include "holofocus/error.hpp"
#include "holofocus/morphology.hpp"
#include "holofocus/resolution.hpp"

namespace holofocus {

ReconstructionStack reconstruct_stack(const HologramFrame& holo, const OpticalConfig& config,
                                      Exec exec) {
  config.validate();
  const GrayImage& intensity = holo.intensity;
  if (intensity.rows() != config.grid_rows || intensity.cols() != config.grid_cols) {
    throw ParameterError("hologram size does not match the configured grid");
  }
  const bool use_amplitude = config.reconstruction_input == ReconstructionInput::amplitude;
  ComplexField source(intensity.rows(), intensity.cols(), config.pixel_pitch);
  for (std::size_t i = 0; i < intensity.size(); ++i) {
    if (!(intensity[i] >= 0.0) || !std::isfinite(intensity[i])) {
      throw ParameterError("hologram intensity must be finite and >= 0");
    }
    source.data()[i] = use_amplitude ? std::sqrt(intensity[i]) : intensity[i];
  }
  const FresnelPropagator propagator(source, config.wavelength);

  const std::size_t count = config.slice_count();
  ReconstructionStack stack;
  stack.slices.resize(count);
  stack.distances.resize(count);
  stack.slice_index.resize(count);

  auto one_slice = [&](std::size_t i) {
    const double z = config.dis1 + static_cast<double>(i) * config.depth_spacing;
    const ComplexField field = propagator.field_at(-z);
    GrayImage amp(field.rows(), field.cols());
    for (std::size_t k = 0; k < amp.size(); ++k) amp[k] = std::abs(field.data()[k]);
    stack.slices[i] = std::move(amp);
    stack.distances[i] = z;
    stack.slice_index[i] = static_cast<int>(i);
  };
  if (exec == Exec::parallel) {
    const long n = static_cast<long>(count);
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) one_slice(static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = 0; i < count; ++i) one_slice(i);
  }

  double peak = 0.0;
  for (const GrayImage& s : stack.slices) {
    for (double v : s.values()) peak = std::max(peak, v);
  }
  if (peak > 0.0) {
    for (GrayImage& s : stack.slices) {
      for (double& v : s.values()) v /= peak;
    }
  }
  return stack;
}

BinaryImage particle_mask(const GrayImage& slice, const DetectionParams& params) {
  const GrayImage smooth = gaussian_blur(slice, params.gaussian_sigma_px);
  BinaryImage mask = canny(smooth, params.canny_low_quantile, params.canny_high_quantile);
  mask = fill_holes(mask);
  mask = erode(mask, params.morph_radius_px);
  return dilate(mask, params.morph_radius_px);
}

CandidateMatrix detect_candidates(const GrayImage& slice, const SliceMeta& meta,
                                  const OpticalConfig& config) {
  if (!config.fixed_intensity) {
    throw ParameterError("candidate detection needs a fixed_intensity (calibrate first)");
  }
  const double fixed_intensity = *config.fixed_intensity;
  const Labeling labeling = label_components(particle_mask(slice, config.detection));
  CandidateMatrix out;
  for (const RegionProps& p : region_props(labeling, slice)) {
    const double diameter = p.equivalent_diameter_px * config.pixel_pitch;
    if (!(p.mean_intensity < fixed_intensity)) continue;
    if (diameter < config.min_dia || diameter > config.max_dia) continue;
    CandidateRecord rec;
    rec.mean_intensity = p.mean_intensity;
    rec.equiv_diameter = diameter;
    rec.centroid_x = p.centroid_x;
    rec.centroid_y = p.centroid_y;
    rec.metric = rec.mean_intensity * rec.equiv_diameter;
    rec.distance = meta.distance;
    rec.reim_index = meta.reim_index;
    rec.slice_index = meta.slice_index;
    rec.focal_status = FocalStatus::untraversed;
    out.push_back(rec);
  }
  std::stable_sort(out.begin(), out.end(), [](const CandidateRecord& a, const CandidateRecord& b) {
    return a.centroid_y != b.centroid_y ? a.centroid_y < b.centroid_y
                                        : a.centroid_x < b.centroid_x;
  });
  return out;
}

CandidateMatrix collect_candidates(const ReconstructionStack& stack, const OpticalConfig& config,
                                   Exec exec) {
  std::vector<CandidateMatrix> per_slice(stack.size());
  auto one_slice = [&](std::size_t i) {
    const SliceMeta meta{stack.slice_index[i], stack.reim_index(i), stack.distances[i]};
    per_slice[i] = detect_candidates(stack.slices[i], meta, config);
  };
  if (exec == Exec::parallel) {
    const long n = static_cast<long>(stack.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) one_slice(static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = 0; i < stack.size(); ++i) one_slice(i);
  }
  CandidateMatrix m;
  for (CandidateMatrix& part : per_slice) m.insert(m.end(), part.begin(), part.end());
  return m;
}

std::vector<std::size_t> gather_group(const CandidateMatrix& m, std::size_t anchor,
                                      std::size_t axi_slice_num, double lateral_window_px) {
  const CandidateRecord& a = m[anchor];
  const long last_slice = static_cast<long>(a.slice_index) + static_cast<long>(axi_slice_num);
  auto first = std::lower_bound(m.begin(), m.end(), a.slice_index,
                                [](const CandidateRecord& r, int s) { return r.slice_index < s; });
  std::vector<std::size_t> group;
  for (auto it = first; it != m.end() && it->slice_index <= last_slice; ++it) {
    if (std::abs(it->centroid_x - a.centroid_x) < lateral_window_px &&
        std::abs(it->centroid_y - a.centroid_y) < lateral_window_px) {
      group.push_back(static_cast<std::size_t>(it - m.begin()));
    }
  }
  return group;
}

CandidateMatrix select_focused(CandidateMatrix& m, std::size_t axi_slice_num,
                               double lateral_window_px) {
  if (axi_slice_num < 1) throw ParameterError("axi_slice_num must be >= 1");
  if (!(lateral_window_px > 0.0)) throw ParameterError("lateral window must be positive");
  std::stable_sort(m.begin(), m.end(), [](const CandidateRecord& a, const CandidateRecord& b) {
    return a.slice_index < b.slice_index;
  });

  for (std::size_t t = 0; t < m.size(); ++t) {
    if (m[t].focal_status == FocalStatus::traversed) continue;
    const std::vector<std::size_t> group = gather_group(m, t, axi_slice_num, lateral_window_px);
    // Group members are in M order, so the first minimum wins ties.
    std::size_t best = group.front();
    for (const std::size_t g : group) {
      m[g].focal_status = FocalStatus::traversed;
      if (m[g].metric < m[best].metric) best = g;
    }
    m[best].focal_status = FocalStatus::focused;
  }

  CandidateMatrix focused;
  for (const CandidateRecord& r : m) {
    if (r.focal_status == FocalStatus::focused) focused.push_back(r);
  }
  return focused;
}

std::vector<ParticleDetection> to_detections(const CandidateMatrix& focused, double pixel_pitch) {
  std::vector<ParticleDetection> out;
  out.reserve(focused.size());
  for (const CandidateRecord& r : focused) {
    out.push_back({r.centroid_x * pixel_pitch, r.centroid_y * pixel_pitch, r.distance,
                   r.equiv_diameter});
  }
  return out;
}

AutofocusResult autofocus_stack(const ReconstructionStack& stack, const OpticalConfig& config) {
  config.validate();
  AutofocusResult result;
  OpticalConfig effective = config;
  if (!effective.fixed_intensity) {
    effective.fixed_intensity = find_constrained_intensity(stack, config.calibration).fixed_intensity;
  }
  result.fixed_intensity = *effective.fixed_intensity;
  result.axi_slice_num =
      axial_slice_count(grouping_axial_resolution(effective), effective.depth_spacing);
  result.slice_count = stack.size();
  result.candidates = collect_candidates(stack, effective);
  result.focused =
      select_focused(result.candidates, result.axi_slice_num, effective.detection.lateral_window_px);
  result.detections = to_detections(result.focused, effective.pixel_pitch);
  return result;
}

AutofocusResult autofocus_pipeline(const HologramFrame& holo, const OpticalConfig& config) {
  return autofocus_stack(reconstruct_stack(holo, config), config);
}

}  // namespace holofocus
