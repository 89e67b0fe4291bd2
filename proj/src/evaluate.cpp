#include "holofocus/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "holofocus/error.hpp"
#include "holofocus/resolution.hpp"

namespace holofocus {

namespace {

struct Candidate {
  double lateral;
  double axial;
  std::size_t truth;
  std::size_t det;
};

std::vector<Candidate> gated_pairs(const std::vector<Particle>& truth,
                                   const std::vector<ParticleDetection>& detections,
                                   const MatchTolerances& tol) {
  std::vector<Candidate> pairs;
  for (std::size_t t = 0; t < truth.size(); ++t) {
    for (std::size_t d = 0; d < detections.size(); ++d) {
      const double lateral =
          std::hypot(detections[d].x - truth[t].x, detections[d].y - truth[t].y);
      const double axial = std::abs(detections[d].z - truth[t].z);
      if (lateral <= tol.lateral_gate && axial <= tol.axial_gate) {
        pairs.push_back({lateral, axial, t, d});
      }
    }
  }
  return pairs;
}

std::vector<std::pair<std::size_t, std::size_t>> greedy_match(std::vector<Candidate> pairs,
                                                              std::size_t n_truth,
                                                              std::size_t n_det) {
  std::sort(pairs.begin(), pairs.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(a.lateral, a.axial, a.truth, a.det) <
           std::tie(b.lateral, b.axial, b.truth, b.det);
  });
  std::vector<bool> truth_used(n_truth, false), det_used(n_det, false);
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const Candidate& c : pairs) {
    if (truth_used[c.truth] || det_used[c.det]) continue;
    truth_used[c.truth] = det_used[c.det] = true;
    out.emplace_back(c.truth, c.det);
  }
  return out;
}

// Hungarian algorithm (potentials form) for an n x m cost matrix with n <= m.
// Returns for each row the assigned column.
std::vector<std::size_t> hungarian(const std::vector<std::vector<double>>& cost) {
  const std::size_t n = cost.size();
  const std::size_t m = n ? cost[0].size() : 0;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<bool> used(m + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> assignment(n, 0);
  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j] != 0) assignment[p[j] - 1] = j - 1;
  }
  return assignment;
}

std::vector<std::pair<std::size_t, std::size_t>> optimal_match(
    const std::vector<Candidate>& pairs, std::size_t n_truth, std::size_t n_det,
    double lateral_gate) {
  if (pairs.empty()) return {};
  // Forbidden pairs cost more than any complete set of feasible ones, so the
  // assignment first maximizes the match count, then minimizes distance.
  const double forbidden = (lateral_gate + 1.0) * static_cast<double>(n_truth + n_det + 1);
  const bool transpose = n_truth > n_det;
  const std::size_t rows = transpose ? n_det : n_truth;
  const std::size_t cols = transpose ? n_truth : n_det;
  std::vector<std::vector<double>> cost(rows, std::vector<double>(cols, forbidden));
  for (const Candidate& c : pairs) {
    if (transpose) {
      cost[c.det][c.truth] = c.lateral;
    } else {
      cost[c.truth][c.det] = c.lateral;
    }
  }
  const std::vector<std::size_t> assignment = hungarian(cost);
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t c = assignment[r];
    if (cost[r][c] >= forbidden) continue;
    out.emplace_back(transpose ? c : r, transpose ? r : c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

CountError count_error(std::size_t truth_count, std::size_t detected_count) {
  if (truth_count == 0) throw ParameterError("relative error is undefined for an empty truth set");
  CountError e;
  e.deviation = truth_count > detected_count ? truth_count - detected_count
                                             : detected_count - truth_count;
  e.relative_error_pct =
      100.0 * static_cast<double>(e.deviation) / static_cast<double>(truth_count);
  return e;
}

std::string format_percent(std::size_t deviation, std::size_t truth_count) {
  if (truth_count == 0) throw ParameterError("relative error is undefined for an empty truth set");
  // Hundredths of a percent, rounded half-up in integer arithmetic.
  const unsigned long long scaled =
      (static_cast<unsigned long long>(deviation) * 20000ULL + truth_count) / (2ULL * truth_count);
  const std::string frac = std::to_string(scaled % 100);
  return std::to_string(scaled / 100) + "." + (frac.size() < 2 ? "0" + frac : frac);
}

MatchTolerances default_tolerances(const OpticalConfig& config, double lateral_px) {
  MatchTolerances tol;
  tol.lateral_gate = lateral_px * config.pixel_pitch;
  tol.axial_gate = grouping_axial_resolution(config);
  return tol;
}

EvaluationReport evaluate(const std::vector<Particle>& truth,
                          const std::vector<ParticleDetection>& detections,
                          const MatchTolerances& tolerances) {
  if (!(tolerances.lateral_gate > 0.0) || !(tolerances.axial_gate > 0.0)) {
    throw ParameterError("match tolerances must be positive");
  }
  const CountError ce = count_error(truth.size(), detections.size());
  EvaluationReport report;
  report.truth_count = truth.size();
  report.detected_count = detections.size();
  report.deviation = ce.deviation;
  report.relative_error_pct = ce.relative_error_pct;

  const std::vector<Candidate> pairs = gated_pairs(truth, detections, tolerances);
  report.matched_pairs =
      tolerances.method == MatchMethod::greedy
          ? greedy_match(pairs, truth.size(), detections.size())
          : optimal_match(pairs, truth.size(), detections.size(), tolerances.lateral_gate);
  for (const auto& [t, d] : report.matched_pairs) {
    report.axial_errors.push_back(detections[d].z - truth[t].z);
    report.lateral_errors.push_back(
        std::hypot(detections[d].x - truth[t].x, detections[d].y - truth[t].y));
  }
  return report;
}

}  // namespace holofocus
