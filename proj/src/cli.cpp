#include "holofocus/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "holofocus/autofocus.hpp"
#include "holofocus/calibration.hpp"
#include "holofocus/config.hpp"
#include "holofocus/error.hpp"
#include "holofocus/evaluate.hpp"
#include "holofocus/io.hpp"
#include "holofocus/propagation.hpp"
#include "holofocus/resolution.hpp"
#include "holofocus/simulator.hpp"

namespace holofocus::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config_path;
  std::string holo_path;
  std::string out_path;
  std::string truth_path;
  std::string pred_path;
  std::string format = "png";
  std::string method = "greedy";
  double z_mm = 0.0;
  double lateral_px = 6.0;
  std::optional<double> axial_gate_mm;
  double axial_tol_mm = 0.1;
};

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

std::string general(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

void ensure_dir(const std::string& path) {
  std::error_code ec;
  fs::create_directories(path, ec);
  if (ec) throw IoError("cannot create directory '" + path + "': " + ec.message());
}

HologramFrame load_hologram(const std::string& path) { return {io::read_image(path)}; }

bool is_image(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".f32" || ext == ".raw";
}

int cmd_simulate(const Options& o, std::ostream& out) {
  const ToolkitConfig config = load_config(o.config_path);
  const ParticleField field = sample_field(scene_sampling_spec(config));
  const HologramFrame holo = synthesize_hologram(field, config.optics, config.scene.noise_level);
  ensure_dir(o.out_path);
  const fs::path dir(o.out_path);
  io::write_png16((dir / "hologram.png").string(), holo.intensity);
  io::write_raw_f32((dir / "hologram.f32").string(), holo.intensity);
  const std::string truth = (dir / "truth.csv").string();
  io::write_particles_csv(truth, field.particles);
  io::Sidecar meta;
  meta.config_hash = config_hash(config);
  meta.seed = config.scene.seed;
  meta.pixel_pitch = config.optics.pixel_pitch;
  meta.axial_resolution = grouping_axial_resolution(config.optics);
  meta.kind = "truth";
  io::write_sidecar(truth, meta);
  out << "particles = " << field.particles.size() << '\n'
      << "hologram = " << (dir / "hologram.png").string() << '\n'
      << "truth = " << truth << '\n';
  return 0;
}

int cmd_reconstruct(const Options& o, std::ostream& out) {
  const ToolkitConfig config = load_config(o.config_path);
  if (o.format != "png" && o.format != "f32") throw ParameterError("--format must be png or f32");
  const ReconstructionStack stack = reconstruct_stack(load_hologram(o.holo_path), config.optics);
  ensure_dir(o.out_path);
  const fs::path dir(o.out_path);
  std::ofstream index(dir / "index.csv");
  if (!index) throw IoError("cannot write the stack index in '" + o.out_path + "'");
  index << "file,slice_index,reim_index,distance_m\n" << std::setprecision(17);
  for (std::size_t i = 0; i < stack.size(); ++i) {
    std::ostringstream name;
    name << "slice_" << std::setw(4) << std::setfill('0') << i << '.' << o.format;
    io::write_image((dir / name.str()).string(), stack.slices[i]);
    index << name.str() << ',' << stack.slice_index[i] << ',' << stack.reim_index(i) << ','
          << stack.distances[i] << '\n';
  }
  out << "slices = " << stack.size() << '\n';
  return 0;
}

int cmd_calibrate(const Options& o, std::ostream& out) {
  const ToolkitConfig config = load_config(o.config_path);
  const ReconstructionStack stack = reconstruct_stack(load_hologram(o.holo_path), config.optics);
  const CalibrationResult result = find_constrained_intensity(stack, config.optics.calibration);
  out << "fixed_intensity = " << general(result.fixed_intensity) << '\n';
  for (std::size_t i = 0; i < result.particles.size(); ++i) {
    const ParticleThreshold& p = result.particles[i];
    out << "sample " << i << ": rows " << p.box.row0 << '-' << p.box.row1 << " cols "
        << p.box.col0 << '-' << p.box.col1 << " threshold " << fixed(p.best_threshold, 4)
        << " grad_mean " << general(p.best_grad_mean) << '\n';
  }
  return 0;
}

void detect_one(const ToolkitConfig& config, const std::string& holo_path,
                const std::string& csv_path, std::size_t& count) {
  const AutofocusResult result = autofocus_pipeline(load_hologram(holo_path), config.optics);
  io::write_detections_csv(csv_path, result.detections);
  io::Sidecar meta;
  meta.config_hash = config_hash(config);
  meta.seed = config.scene.seed;
  meta.pixel_pitch = config.optics.pixel_pitch;
  meta.axial_resolution = grouping_axial_resolution(config.optics);
  meta.kind = "detections";
  io::write_sidecar(csv_path, meta);
  count = result.detections.size();
}

int cmd_detect(const Options& o, std::ostream& out, std::ostream& err) {
  const ToolkitConfig config = load_config(o.config_path);
  if (!fs::is_directory(o.holo_path)) {
    std::size_t count = 0;
    detect_one(config, o.holo_path, o.out_path, count);
    out << "detections = " << count << '\n';
    return 0;
  }

  std::vector<fs::path> inputs;
  for (const auto& entry : fs::directory_iterator(o.holo_path)) {
    if (entry.is_regular_file() && is_image(entry.path())) inputs.push_back(entry.path());
  }
  std::sort(inputs.begin(), inputs.end());
  ensure_dir(o.out_path);
  std::vector<std::size_t> counts(inputs.size(), 0);
  std::vector<std::string> errors(inputs.size());
  const long n = static_cast<long>(inputs.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    const fs::path& in = inputs[static_cast<std::size_t>(i)];
    const fs::path csv = fs::path(o.out_path) / (in.stem().string() + ".csv");
    try {
      detect_one(config, in.string(), csv.string(), counts[static_cast<std::size_t>(i)]);
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(i)] = e.what();
    }
  }
  int status = 0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (!errors[i].empty()) {
      err << "holofocus detect: " << inputs[i].string() << ": " << errors[i] << '\n';
      status = 1;
    } else {
      out << inputs[i].filename().string() << ": detections = " << counts[i] << '\n';
    }
  }
  return status;
}

int cmd_evaluate(const Options& o, std::ostream& out, std::ostream& err) {
  const std::vector<Particle> truth = io::read_particles_csv(o.truth_path);
  const std::vector<ParticleDetection> pred = io::read_detections_csv(o.pred_path);
  const std::optional<io::Sidecar> truth_meta = io::read_sidecar(o.truth_path);
  const std::optional<io::Sidecar> pred_meta = io::read_sidecar(o.pred_path);
  if (truth_meta && pred_meta && truth_meta->config_hash != pred_meta->config_hash) {
    err << "holofocus evaluate: warning: truth and detections come from different configs\n";
  }

  double pixel_pitch = 0.0;
  std::optional<double> axial_cell;
  if (!o.config_path.empty()) {
    const ToolkitConfig config = load_config(o.config_path);
    pixel_pitch = config.optics.pixel_pitch;
    axial_cell = grouping_axial_resolution(config.optics);
  } else {
    for (const auto& meta : {pred_meta, truth_meta}) {
      if (!meta) continue;
      if (pixel_pitch == 0.0) pixel_pitch = meta->pixel_pitch;
      if (!axial_cell) axial_cell = meta->axial_resolution;
    }
  }
  if (!(pixel_pitch > 0.0)) {
    throw ParameterError("pixel pitch unknown: pass --config or keep the JSON sidecars");
  }

  MatchTolerances tol;
  tol.lateral_gate = o.lateral_px * pixel_pitch;
  if (o.axial_gate_mm) {
    tol.axial_gate = *o.axial_gate_mm * 1e-3;
  } else if (axial_cell) {
    tol.axial_gate = *axial_cell;
  } else {
    throw ParameterError("axial gate unknown: pass --axial-gate-mm or --config");
  }
  if (o.method == "optimal") {
    tol.method = MatchMethod::optimal;
  } else if (o.method != "greedy") {
    throw ParameterError("--method must be greedy or optimal");
  }

  const EvaluationReport report = evaluate(truth, pred, tol);
  std::size_t within = 0;
  double max_axial = 0.0, sum_axial = 0.0, sum_lateral = 0.0;
  for (std::size_t i = 0; i < report.axial_errors.size(); ++i) {
    const double a = std::abs(report.axial_errors[i]);
    if (a <= o.axial_tol_mm * 1e-3 * (1.0 + 1e-12)) ++within;
    max_axial = std::max(max_axial, a);
    sum_axial += a;
    sum_lateral += report.lateral_errors[i];
  }
  const std::size_t matched = report.matched_pairs.size();
  out << "truth_count = " << report.truth_count << '\n'
      << "detected_count = " << report.detected_count << '\n'
      << "deviation = " << report.deviation << '\n'
      << "relative_error_pct = " << format_percent(report.deviation, report.truth_count) << '\n'
      << "matched = " << matched << '\n'
      << "axial_within_" << general(o.axial_tol_mm) << "mm = " << within << '/' << matched << '\n';
  if (matched > 0) {
    const double m = static_cast<double>(matched);
    out << "mean_abs_axial_error_mm = " << fixed(sum_axial / m * 1e3, 4) << '\n'
        << "max_abs_axial_error_mm = " << fixed(max_axial * 1e3, 4) << '\n'
        << "mean_lateral_error_um = " << fixed(sum_lateral / m * 1e6, 3) << '\n';
  }
  return 0;
}

int cmd_resolution(const Options& o, std::ostream& out) {
  const ToolkitConfig config = load_config(o.config_path);
  const ResolutionReport r = resolution_report(config.optics, o.z_mm * 1e-3);
  out << "z_mm = " << general(o.z_mm) << '\n'
      << "na_holo = " << fixed(r.na_holo, 6) << '\n'
      << "na_sensor = " << fixed(r.na_sensor, 6) << '\n'
      << "na_dhs = " << fixed(r.na_dhs, 6) << '\n'
      << "lateral_res_um = " << fixed(r.lateral_res * 1e6, 3) << '\n'
      << "axial_res_mm = " << fixed(r.axial_res * 1e3, 4) << '\n'
      << "axial_slice_num = " << r.axial_slice_num << '\n';
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Holographic particle autofocus toolkit", "holofocus"};
  app.require_subcommand(1);
  Options o;

  auto* simulate = app.add_subcommand("simulate", "Write a synthetic hologram and its ground truth");
  simulate->add_option("--config", o.config_path, "Config file")->required()->check(CLI::ExistingFile);
  simulate->add_option("--out", o.out_path, "Output directory")->required();

  auto* reconstruct = app.add_subcommand("reconstruct", "Write the reconstructed slice stack");
  reconstruct->add_option("--holo", o.holo_path, "Hologram image")->required()->check(CLI::ExistingFile);
  reconstruct->add_option("--config", o.config_path, "Config file")->required()->check(CLI::ExistingFile);
  reconstruct->add_option("--out", o.out_path, "Output directory")->required();
  reconstruct->add_option("--format", o.format, "Slice format: png or f32")->capture_default_str();

  auto* calibrate = app.add_subcommand("calibrate", "Print the calibrated fixed_intensity");
  calibrate->add_option("--holo", o.holo_path, "Hologram image")->required()->check(CLI::ExistingFile);
  calibrate->add_option("--config", o.config_path, "Config file")->required()->check(CLI::ExistingFile);

  auto* detect = app.add_subcommand("detect", "Run the full pipeline and write detections");
  detect->add_option("--holo", o.holo_path, "Hologram image or directory of images")
      ->required()
      ->check(CLI::ExistingPath);
  detect->add_option("--config", o.config_path, "Config file")->required()->check(CLI::ExistingFile);
  detect->add_option("--out", o.out_path, "Detections CSV (directory in batch mode)")->required();

  auto* eval = app.add_subcommand("evaluate", "Compare detections with ground truth");
  eval->add_option("--truth", o.truth_path, "Ground-truth CSV")->required()->check(CLI::ExistingFile);
  eval->add_option("--pred", o.pred_path, "Detections CSV")->required()->check(CLI::ExistingFile);
  eval->add_option("--config", o.config_path, "Config file (else the JSON sidecars are used)")
      ->check(CLI::ExistingFile);
  eval->add_option("--lateral-px", o.lateral_px, "Lateral match gate in pixels")->capture_default_str();
  eval->add_option("--axial-gate-mm", o.axial_gate_mm, "Axial match gate (default: one axial-resolution cell)");
  eval->add_option("--axial-tol-mm", o.axial_tol_mm, "Tolerance reported for axial errors")->capture_default_str();
  eval->add_option("--method", o.method, "Matching: greedy or optimal")->capture_default_str();

  auto* resolution = app.add_subcommand("resolution", "Print numerical apertures and resolutions");
  resolution->add_option("--config", o.config_path, "Config file")->required()->check(CLI::ExistingFile);
  resolution->add_option("--z", o.z_mm, "Distance in mm")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*simulate) return cmd_simulate(o, out);
    if (*reconstruct) return cmd_reconstruct(o, out);
    if (*calibrate) return cmd_calibrate(o, out);
    if (*detect) return cmd_detect(o, out, err);
    if (*eval) return cmd_evaluate(o, out, err);
    if (*resolution) return cmd_resolution(o, out);
  } catch (const std::exception& e) {
    err << "holofocus " << app.get_subcommands().front()->get_name() << ": " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace holofocus::cli
