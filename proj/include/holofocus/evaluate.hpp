#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "holofocus/autofocus.hpp"
#include "holofocus/particles.hpp"

namespace holofocus {

enum class MatchMethod { greedy, optimal };

struct MatchTolerances {
  double lateral_gate = 0.0;  // metres
  double axial_gate = 0.0;    // metres
  MatchMethod method = MatchMethod::greedy;
};

struct EvaluationReport {
  std::size_t truth_count = 0;
  std::size_t detected_count = 0;
  std::size_t deviation = 0;
  double relative_error_pct = 0.0;
  std::vector<std::pair<std::size_t, std::size_t>> matched_pairs;  // (truth, detection)
  std::vector<double> axial_errors;    // detection z - truth z, per pair
  std::vector<double> lateral_errors;  // Euclidean, per pair
};

struct CountError {
  std::size_t deviation = 0;
  double relative_error_pct = 0.0;
};

/// |detected - truth| and 100 * deviation / truth. Throws ParameterError when truth is 0.
CountError count_error(std::size_t truth_count, std::size_t detected_count);

/// Percentage rounded half-up to two decimals, e.g. "5.75".
std::string format_percent(std::size_t deviation, std::size_t truth_count);

/// Lateral gate of `lateral_px` pixels and an axial gate of one axial-resolution cell.
MatchTolerances default_tolerances(const OpticalConfig& config, double lateral_px = 6.0);

/// Matches detections to truth inside both gates, minimizing lateral distance
/// (greedy nearest neighbour, or an optimal assignment).
EvaluationReport evaluate(const std::vector<Particle>& truth,
                          const std::vector<ParticleDetection>& detections,
                          const MatchTolerances& tolerances);

}  // namespace holofocus
