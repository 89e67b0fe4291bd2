// End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
// run with criterion names as arguments, or none to run them all.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../unit/helpers.hpp"
#include "holofocus/autofocus.hpp"
#include "holofocus/calibration.hpp"
#include "holofocus/config.hpp"
#include "holofocus/evaluate.hpp"
#include "holofocus/morphology.hpp"
#include "holofocus/propagation.hpp"
#include "holofocus/resolution.hpp"
#include "holofocus/simulator.hpp"

using namespace holofocus;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "MISS ") + what;
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------

Outcome resolution_triple() {
  Outcome o;
  OpticalConfig c;
  c.aperture_height = 0.875e-3;
  const double published[3][2] = {{30e-3, 2.5e-3}, {40e-3, 4.4e-3}, {60e-3, 9.8e-3}};
  for (const auto& [z, ref] : published) {
    const double a = axial_resolution(c, z);
    const double rel = std::abs(a - ref) / ref;
    o.require(rel <= 0.02, fmt("%.0f mm: ", z * 1e3) + fmt("%.4f mm", a * 1e3) +
                               fmt(" vs %.1f", ref * 1e3) + fmt(" (%.2f%%)", 100 * rel));
  }
  double worst = 0.0;
  for (double z = crossover_distance(c) * 1.01; z < 100e-3; z *= 1.1) {
    const double ratio = axial_resolution(c, 2 * z) / axial_resolution(c, z);
    worst = std::max(worst, std::abs(ratio - 4.0) / 4.0);
  }
  o.require(worst <= 1e-12, fmt("z^2 law worst rel %.1e", worst));
  return o;
}

// ---------------------------------------------------------------------------

Outcome count_error_rows() {
  Outcome o;
  struct Row {
    std::size_t truth, detected, deviation;
    const char* pct;
  };
  for (const Row& r : {Row{480, 498, 18, "3.75"}, Row{5400, 5796, 396, "7.33"},
                       Row{4800, 4841, 41, "0.85"}, Row{20000, 18851, 1149, "5.75"}}) {
    const CountError e = count_error(r.truth, r.detected);
    const std::string pct = format_percent(e.deviation, r.truth);
    o.require(e.deviation == r.deviation && pct == r.pct,
              std::to_string(r.truth) + "/" + std::to_string(r.detected) + " -> " +
                  std::to_string(e.deviation) + ", " + pct + "%");
  }
  return o;
}

// ---------------------------------------------------------------------------

ToolkitConfig two_layer_scene() {
  std::istringstream text(
      "aperture_height_m = 0.875e-3\n"
      "sim_count = 17\n"
      "sim_z_min_m = 32.0e-3\n"
      "sim_z_max_m = 33.0e-3\n"
      "sim_planes_m = 32.0e-3, 33.0e-3\n"
      "sim_min_lateral_sep_px = 40\n"
      "sim_seed = 7\n"
      "sim_min_dia_m = 50e-6\n"
      "sim_max_dia_m = 62e-6\n"
      "min_dia_m = 43e-6\n"
      "max_dia_m = 69e-6\n");
  return parse_config(text);
}

Outcome two_layer_sweep() {
  Outcome o;
  const ToolkitConfig base = two_layer_scene();
  const ParticleField field = sample_field(scene_sampling_spec(base));
  const HologramFrame holo = synthesize_hologram(field, base.optics, base.scene.noise_level);
  const std::size_t n = field.particles.size();

  std::map<int, std::vector<double>> z_by_spacing;  // spacing in um -> z per truth particle
  for (int spacing_um : {50, 100, 150, 200, 250, 300}) {
    OpticalConfig c = base.optics;
    c.depth_spacing = spacing_um * 1e-6;
    const auto t0 = std::chrono::steady_clock::now();
    const AutofocusResult res = autofocus_pipeline(holo, c);
    const double secs = seconds_since(t0);
    const EvaluationReport rep = evaluate(field.particles, res.detections, default_tolerances(c));
    std::vector<double> z(n, NAN);
    for (const auto& [t, d] : rep.matched_pairs) z[t] = res.detections[d].z;
    z_by_spacing[spacing_um] = z;
    o.require(res.detections.size() == n && rep.matched_pairs.size() == n && secs <= 60.0,
              std::to_string(spacing_um) + " um: " + std::to_string(res.detections.size()) +
                  " found, " + std::to_string(rep.matched_pairs.size()) + " matched" +
                  fmt(", %.1f s", secs));
  }
  // Each coarser grid stays within one of its own spacings of the finest one.
  double worst = 0.0;
  bool within = true;
  for (const auto& [spacing_um, z] : z_by_spacing) {
    for (std::size_t i = 0; i < n; ++i) {
      const double dev = std::abs(z[i] - z_by_spacing[50][i]);
      if (!(dev <= spacing_um * 1e-6 * (1 + 1e-9))) within = false;
      worst = std::max(worst, dev / (spacing_um * 1e-6));
    }
  }
  o.require(within, fmt("worst shift %.2f spacings", worst));
  return o;
}

// ---------------------------------------------------------------------------

ToolkitConfig dense_scene(std::uint64_t seed) {
  std::istringstream text(
      "aperture_height_m = 0.875e-3\n"
      "dis1_m = 29.5e-3\n"
      "dis_end_m = 33.5e-3\n"
      "min_dia_m = 43e-6\n"
      "max_dia_m = 69e-6\n"
      "sim_count = 30\n"
      "sim_z_min_m = 30e-3\n"
      "sim_z_max_m = 33e-3\n"
      "sim_min_dia_m = 50e-6\n"
      "sim_max_dia_m = 62e-6\n"
      "sim_min_lateral_sep_px = 6\n"
      "sim_min_axial_sep_m = 2.5e-3\n");
  ToolkitConfig c = parse_config(text);
  c.scene.seed = seed;
  return c;
}

Outcome dense_counting() {
  Outcome o;
  std::size_t truth = 0, detected = 0, matched = 0, within = 0;
  const auto t0 = std::chrono::steady_clock::now();
  for (std::uint64_t seed = 1; seed <= 16; ++seed) {
    const ToolkitConfig c = dense_scene(seed);
    const ParticleField field = sample_field(scene_sampling_spec(c));
    const HologramFrame holo = synthesize_hologram(field, c.optics, c.scene.noise_level);
    const AutofocusResult res = autofocus_pipeline(holo, c.optics);
    const EvaluationReport rep =
        evaluate(field.particles, res.detections, default_tolerances(c.optics));
    truth += field.particles.size();
    detected += res.detections.size();
    matched += rep.matched_pairs.size();
    for (double e : rep.axial_errors) within += std::abs(e) <= 0.1e-3 * (1 + 1e-9) ? 1 : 0;
  }
  const CountError ce = count_error(truth, detected);
  o.require(ce.relative_error_pct < 8.0, std::to_string(detected) + " vs " +
                                             std::to_string(truth) + " (" +
                                             format_percent(ce.deviation, truth) + "%)");
  const double frac = matched ? double(within) / double(matched) : 0.0;
  o.require(frac >= 0.95, std::to_string(within) + "/" + std::to_string(matched) +
                              fmt(" matched within 0.1 mm (%.1f%%)", 100 * frac));
  o.detail += fmt("; %.0f s", seconds_since(t0));
  return o;
}

// ---------------------------------------------------------------------------

double rel_diff(const ComplexField& a, const ComplexField& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    num += std::norm(a.data()[i] - b.data()[i]);
    den += std::norm(b.data()[i]);
  }
  return std::sqrt(num / den);
}

Outcome propagator_properties() {
  Outcome o;
  std::mt19937_64 rng(2024);
  const std::size_t shapes[][2] = {{16, 16}, {32, 48}, {64, 64}, {100, 60}, {128, 128},
                                   {256, 256}, {512, 512}, {7, 9}, {200, 256}, {512, 128}};
  std::uniform_real_distribution<double> uz(-50e-3, 50e-3), upitch(2e-6, 8e-6);
  double unitarity = 0, identity = 0, round_trip = 0, semigroup = 0;
  int fields = 0;
  for (int k = 0; k < 120; ++k) {
    const auto& s = shapes[k % std::size(shapes)];
    const ComplexField f = testutil::random_field(s[0], s[1], upitch(rng), rng);
    const double wl = 532e-9;
    // Distances on a 2^-30 m grid keep z1 + z2 exact.
    const double z1 = std::ldexp(std::round(std::ldexp(uz(rng), 30)), -30);
    const double z2 = std::ldexp(std::round(std::ldexp(uz(rng), 30)), -30);
    const ComplexField g = propagate(f, wl, z1);
    unitarity = std::max(unitarity, std::abs(g.l2_norm() - f.l2_norm()) / f.l2_norm());
    identity = std::max(identity, rel_diff(propagate(f, wl, 0.0), f));
    round_trip = std::max(round_trip, rel_diff(propagate(g, wl, -z1), f));
    semigroup = std::max(semigroup, rel_diff(propagate(g, wl, z2), propagate(f, wl, z1 + z2)));
    ++fields;
  }
  o.require(fields >= 100, std::to_string(fields) + " fields up to 512x512");
  o.require(unitarity <= 1e-10, fmt("unitarity %.1e", unitarity));
  o.require(identity <= 1e-12, fmt("z=0 identity %.1e", identity));
  o.require(round_trip <= 1e-8, fmt("round trip %.1e", round_trip));
  o.require(semigroup <= 1e-10, fmt("semigroup %.1e", semigroup));
  return o;
}

// ---------------------------------------------------------------------------

LabelMap flood_labels(const BinaryImage& img) {
  const long rows = long(img.rows()), cols = long(img.cols());
  LabelMap labels(img.rows(), img.cols(), 0);
  int count = 0;
  for (long r = 0; r < rows; ++r) {
    for (long c = 0; c < cols; ++c) {
      if (!img(r, c) || labels(r, c)) continue;
      labels(r, c) = ++count;
      std::deque<std::pair<long, long>> todo{{r, c}};
      while (!todo.empty()) {
        const auto [y, x] = todo.front();
        todo.pop_front();
        for (long dy = -1; dy <= 1; ++dy) {
          for (long dx = -1; dx <= 1; ++dx) {
            const long yy = y + dy, xx = x + dx;
            if (yy < 0 || xx < 0 || yy >= rows || xx >= cols) continue;
            if (img(yy, xx) && !labels(yy, xx)) {
              labels(yy, xx) = count;
              todo.push_back({yy, xx});
            }
          }
        }
      }
    }
  }
  return labels;
}

BinaryImage brute_filter(const BinaryImage& img, int radius, bool erode_op) {
  const long rows = long(img.rows()), cols = long(img.cols());
  BinaryImage out(img.rows(), img.cols());
  for (long r = 0; r < rows; ++r) {
    for (long c = 0; c < cols; ++c) {
      bool lo = true, hi = false;
      for (long dy = -radius; dy <= radius; ++dy) {
        for (long dx = -radius; dx <= radius; ++dx) {
          if (dy * dy + dx * dx > radius * radius) continue;
          const long y = r + dy, x = c + dx;
          const bool v = y >= 0 && x >= 0 && y < rows && x < cols && img(y, x);
          lo = lo && v;
          hi = hi || v;
        }
      }
      out(r, c) = erode_op ? lo : hi;
    }
  }
  return out;
}

Outcome morphology_oracles() {
  Outcome o;
  std::mt19937_64 rng(77);
  int label_ok = 0, props_ok = 0;
  for (int k = 0; k < 50; ++k) {
    const BinaryImage img = testutil::random_mask(200, 200, 0.25 + 0.01 * k, rng);
    const Labeling lab = label_components(img);
    if (lab.labels == flood_labels(img)) ++label_ok;
    std::vector<std::size_t> area(std::size_t(lab.count) + 1, 0);
    for (auto v : lab.labels.values()) ++area[std::size_t(v)];
    bool exact = true;
    for (const RegionProps& p : region_props(lab, GrayImage(200, 200, 0.0))) {
      exact = exact && p.area_px == area[std::size_t(p.label_id)] &&
              p.equivalent_diameter_px == 2.0 * std::sqrt(double(p.area_px) / std::numbers::pi);
    }
    if (exact) ++props_ok;
  }
  o.require(label_ok == 50, std::to_string(label_ok) + "/50 labelings");
  o.require(props_ok == 50, std::to_string(props_ok) + "/50 area and diameter identities");

  int morph_ok = 0;
  for (int k = 0; k < 20; ++k) {
    const BinaryImage img = testutil::random_mask(120 + k, 150 - k, 0.5, rng);
    const int radius = 1 + k % 3;
    if (erode(img, radius) == brute_filter(img, radius, true) &&
        dilate(img, radius) == brute_filter(img, radius, false)) {
      ++morph_ok;
    }
  }
  o.require(morph_ok == 20, std::to_string(morph_ok) + "/20 erosion/dilation");
  return o;
}

// ---------------------------------------------------------------------------

// Dark disks, sharp with the given floor on their own slice and blurred on the others.
ReconstructionStack dark_disk_stack(double floor) {
  const std::size_t n = 160, slices = 11;
  struct Disk {
    double y, x, r;
    std::size_t focus;
  };
  const Disk disks[] = {{40, 40, 9, 2}, {50, 115, 8, 5}, {115, 50, 10, 7}, {110, 120, 8, 9}};
  ReconstructionStack s;
  for (std::size_t k = 0; k < slices; ++k) {
    GrayImage acc(n, n, 1.0);
    for (const Disk& d : disks) {
      GrayImage one(n, n, 1.0);
      testutil::paint_disk(one, d.y, d.x, d.r, floor);
      const double defocus = std::abs(double(k) - double(d.focus));
      const double sigma = 0.6 + 1.5 * defocus;
      one = gaussian_blur(one, sigma);
      for (double& v : one.values()) v = 1.0 - (1.0 - v) / (1.0 + 0.3 * defocus);
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = std::min(acc[i], one[i]);
    }
    s.slices.push_back(acc);
    s.distances.push_back(31e-3 + 0.1e-3 * double(k));
    s.slice_index.push_back(int(k));
  }
  return s;
}

double sweep_oracle(const ProjectionPair& pair, const CalibrationParams& params) {
  double result = INFINITY;
  for (const CropBox& box : calibration_regions(pair.min_intensity_img, params)) {
    double best_t = params.v1, best = -1.0;
    for (double t : sweep_thresholds(params)) {
      const double g = grad_mean(pair, box, t);
      if (g > best) {
        best = g;
        best_t = t;
      }
    }
    if (best > 0.0) result = std::min(result, best_t);
  }
  return result;
}

Outcome calibration_sweep() {
  Outcome o;
  for (double floor : {0.05, 0.15, 0.25}) {
    const ReconstructionStack stack = dark_disk_stack(floor);
    const ProjectionPair pair = make_projections(stack);
    CalibrationParams coarse;
    const double got = find_constrained_intensity(pair, coarse).fixed_intensity;
    const double oracle = sweep_oracle(pair, coarse);
    CalibrationParams fine = coarse;
    fine.step = 0.005;
    const double refined = find_constrained_intensity(pair, fine).fixed_intensity;
    o.require(got == oracle && std::abs(refined - got) <= coarse.step * (1 + 1e-9),
              fmt("floor %.2f: ", floor) + fmt("%.3f", got) + fmt(" (sweep %.3f", oracle) +
                  fmt(", step 0.005: %.3f)", refined));
  }
  return o;
}

// ---------------------------------------------------------------------------

CandidateRecord make_record(int slice, double x, double y, double metric) {
  CandidateRecord r;
  r.slice_index = slice;
  r.centroid_x = x;
  r.centroid_y = y;
  r.metric = metric;
  return r;
}

Outcome selection_state_machine() {
  Outcome o;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  int closure_ok = 0, optimal_ok = 0, v_ok = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t count = 1 + trial % 80;
    const double extent = 10.0 + 5.0 * (trial % 20);
    const int depth = 3 + trial % 15;
    CandidateMatrix m;
    for (std::size_t i = 0; i < count; ++i) {
      m.push_back(make_record(int(u01(rng) * depth), u01(rng) * extent, u01(rng) * extent,
                              u01(rng)));
    }
    const std::size_t span = 1 + trial % 6;
    select_focused(m, span);

    bool closed = true, optimal = true;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i].focal_status == FocalStatus::untraversed) closed = false;
      if (m[i].focal_status != FocalStatus::focused) continue;
      bool witnessed = false;
      for (std::size_t a = 0; a < m.size() && !witnessed; ++a) {
        const auto g = gather_group(m, a, span, 6.0);
        if (std::find(g.begin(), g.end(), i) == g.end()) continue;
        witnessed = std::all_of(g.begin(), g.end(),
                                [&](std::size_t k) { return m[i].metric <= m[k].metric; });
      }
      optimal = optimal && witnessed;
    }
    closure_ok += closed;
    optimal_ok += optimal;

    // V-shaped run: one detection, at the minimum.
    const int length = 3 + trial % 9;
    const int bottom = int(u01(rng) * length);
    CandidateMatrix run;
    for (int s = 0; s < length; ++s) {
      run.push_back(make_record(s, 50, 50, 0.1 + 0.02 * std::abs(s - bottom)));
    }
    std::shuffle(run.begin(), run.end(), rng);
    const CandidateMatrix f = select_focused(run, std::size_t(length));
    v_ok += f.size() == 1 && f[0].slice_index == bottom;
  }
  o.require(closure_ok == 1000, std::to_string(closure_ok) + "/1000 with no untraversed record");
  o.require(optimal_ok == 1000, std::to_string(optimal_ok) + "/1000 metric-optimal");
  o.require(v_ok == 1000, std::to_string(v_ok) + "/1000 V runs at the minimum");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"resolution_triple", resolution_triple},
      {"count_error_rows", count_error_rows},
      {"two_layer_sweep", two_layer_sweep},
      {"dense_counting", dense_counting},
      {"propagator_properties", propagator_properties},
      {"morphology_oracles", morphology_oracles},
      {"calibration_sweep", calibration_sweep},
      {"selection_state_machine", selection_state_machine},
  };
  std::vector<std::string> wanted(argv + 1, argv + argc);
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), name) == wanted.end()) continue;
    Outcome result;
    try {
      result = check();
    } catch (const std::exception& e) {
      result.pass = false;
      result.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s %s: %s\n", result.pass ? "PASS" : "FAIL", name.c_str(), result.detail.c_str());
    std::fflush(stdout);
    failures += result.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
