#include "holofocus/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>

#include "holofocus/error.hpp"

namespace holofocus {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ParameterError(what);
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ParameterError("config key '" + key + "': expected a number, got '" + value + "'");
  }
}

std::uint64_t to_uint(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    if (!value.empty() && value[0] == '-') throw std::invalid_argument(value);
    const unsigned long long v = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ParameterError("config key '" + key + "': expected a non-negative integer, got '" +
                         value + "'");
  }
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ParameterError("config key '" + key + "': expected true/false, got '" + value + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(to_double(key, item));
  }
  return out;
}

ReconstructionInput to_input(const std::string& key, const std::string& value) {
  if (value == "intensity") return ReconstructionInput::intensity;
  if (value == "amplitude") return ReconstructionInput::amplitude;
  throw ParameterError("config key '" + key + "': expected intensity or amplitude, got '" +
                       value + "'");
}

using Setter = std::function<void(ToolkitConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"wavelength_m", [](auto& c, auto& k, auto& v) { c.optics.wavelength = to_double(k, v); }},
      {"pixel_pitch_m", [](auto& c, auto& k, auto& v) { c.optics.pixel_pitch = to_double(k, v); }},
      {"grid_rows", [](auto& c, auto& k, auto& v) { c.optics.grid_rows = to_uint(k, v); }},
      {"grid_cols", [](auto& c, auto& k, auto& v) { c.optics.grid_cols = to_uint(k, v); }},
      {"aperture_height_m",
       [](auto& c, auto& k, auto& v) { c.optics.aperture_height = to_double(k, v); }},
      {"dis1_m", [](auto& c, auto& k, auto& v) { c.optics.dis1 = to_double(k, v); }},
      {"dis_end_m", [](auto& c, auto& k, auto& v) { c.optics.dis_end = to_double(k, v); }},
      {"depth_spacing_m",
       [](auto& c, auto& k, auto& v) { c.optics.depth_spacing = to_double(k, v); }},
      {"reconstruction_input",
       [](auto& c, auto& k, auto& v) { c.optics.reconstruction_input = to_input(k, v); }},
      {"min_dia_m", [](auto& c, auto& k, auto& v) { c.optics.min_dia = to_double(k, v); }},
      {"max_dia_m", [](auto& c, auto& k, auto& v) { c.optics.max_dia = to_double(k, v); }},
      {"fixed_intensity",
       [](auto& c, auto& k, auto& v) { c.optics.fixed_intensity = to_double(k, v); }},
      {"axial_resolution_m",
       [](auto& c, auto& k, auto& v) { c.optics.axial_resolution = to_double(k, v); }},
      {"gaussian_sigma_px",
       [](auto& c, auto& k, auto& v) { c.optics.detection.gaussian_sigma_px = to_double(k, v); }},
      {"canny_low_quantile",
       [](auto& c, auto& k, auto& v) { c.optics.detection.canny_low_quantile = to_double(k, v); }},
      {"canny_high_quantile",
       [](auto& c, auto& k, auto& v) {
         c.optics.detection.canny_high_quantile = to_double(k, v);
       }},
      {"morph_radius_px",
       [](auto& c, auto& k, auto& v) {
         c.optics.detection.morph_radius_px = static_cast<int>(to_uint(k, v));
       }},
      {"lateral_window_px",
       [](auto& c, auto& k, auto& v) { c.optics.detection.lateral_window_px = to_double(k, v); }},
      {"calib_v1", [](auto& c, auto& k, auto& v) { c.optics.calibration.v1 = to_double(k, v); }},
      {"calib_v2", [](auto& c, auto& k, auto& v) { c.optics.calibration.v2 = to_double(k, v); }},
      {"calib_step",
       [](auto& c, auto& k, auto& v) { c.optics.calibration.step = to_double(k, v); }},
      {"calib_sample_count",
       [](auto& c, auto& k, auto& v) { c.optics.calibration.sample_count = to_uint(k, v); }},
      {"sim_count", [](auto& c, auto& k, auto& v) { c.scene.count = to_uint(k, v); }},
      {"sim_z_min_m", [](auto& c, auto& k, auto& v) { c.scene.z_min = to_double(k, v); }},
      {"sim_z_max_m", [](auto& c, auto& k, auto& v) { c.scene.z_max = to_double(k, v); }},
      {"sim_planes_m", [](auto& c, auto& k, auto& v) { c.scene.planes = to_list(k, v); }},
      {"sim_min_dia_m", [](auto& c, auto& k, auto& v) { c.scene.min_dia = to_double(k, v); }},
      {"sim_max_dia_m", [](auto& c, auto& k, auto& v) { c.scene.max_dia = to_double(k, v); }},
      {"sim_min_lateral_sep_px",
       [](auto& c, auto& k, auto& v) { c.scene.min_lateral_sep_px = to_double(k, v); }},
      {"sim_min_axial_sep_m",
       [](auto& c, auto& k, auto& v) { c.scene.min_axial_sep = to_double(k, v); }},
      {"sim_margin_px", [](auto& c, auto& k, auto& v) { c.scene.margin_px = to_double(k, v); }},
      {"sim_noise_level",
       [](auto& c, auto& k, auto& v) { c.scene.noise_level = to_double(k, v); }},
      {"sim_enforce_separation",
       [](auto& c, auto& k, auto& v) { c.scene.enforce_separation = to_bool(k, v); }},
      {"sim_seed", [](auto& c, auto& k, auto& v) { c.scene.seed = to_uint(k, v); }},
  };
  return table;
}

}  // namespace

double OpticalConfig::effective_aperture() const {
  return aperture_height.value_or(static_cast<double>(grid_rows) * pixel_pitch);
}

std::size_t OpticalConfig::slice_count() const {
  const double steps = (dis_end - dis1) / depth_spacing;
  return static_cast<std::size_t>(std::floor(steps + 1e-9)) + 1;
}

void OpticalConfig::validate() const {
  require(positive(wavelength), "wavelength must be positive");
  require(positive(pixel_pitch), "pixel pitch must be positive");
  require(grid_rows >= 2 && grid_cols >= 2, "grid must be at least 2x2");
  require(positive(effective_aperture()), "aperture height must be positive");
  require(positive(dis1) && std::isfinite(dis_end) && dis1 < dis_end,
          "reconstruction range needs 0 < dis1 < dis_end");
  require(positive(depth_spacing), "depth spacing must be positive");
  require(dis_end - dis1 >= depth_spacing * (1.0 - 1e-9),
          "reconstruction range is shorter than one depth spacing");
  require(positive(min_dia) && std::isfinite(max_dia) && min_dia < max_dia,
          "diameter bounds need 0 < min_dia < max_dia");
  if (fixed_intensity) {
    require(std::isfinite(*fixed_intensity) && *fixed_intensity > 0.0 && *fixed_intensity <= 1.0,
            "fixed_intensity must lie in (0, 1]");
  }
  if (axial_resolution) require(positive(*axial_resolution), "axial resolution must be positive");
  require(detection.gaussian_sigma_px >= 0.0 && std::isfinite(detection.gaussian_sigma_px),
          "gaussian sigma must be >= 0");
  require(detection.canny_low_quantile >= 0.0 &&
              detection.canny_low_quantile < detection.canny_high_quantile &&
              detection.canny_high_quantile <= 1.0,
          "canny quantiles need 0 <= low < high <= 1");
  require(detection.morph_radius_px >= 1, "morphology radius must be >= 1");
  require(positive(detection.lateral_window_px), "lateral window must be positive");
  require(calibration.v1 >= 0.0 && calibration.v1 < calibration.v2 && calibration.v2 <= 1.0,
          "calibration range needs 0 <= v1 < v2 <= 1");
  require(positive(calibration.step), "calibration step must be positive");
  require(calibration.sample_count >= 1, "calibration sample count must be >= 1");
}

ToolkitConfig parse_config(std::istream& in) {
  ToolkitConfig config;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParameterError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ParameterError("unknown config key '" + key + "'");
    it->second(config, key, value);
  }
  return config;
}

ToolkitConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  return parse_config(in);
}

void write_config(std::ostream& out, const ToolkitConfig& config) {
  const OpticalConfig& o = config.optics;
  const SceneConfig& s = config.scene;
  std::ostringstream os;
  os << std::setprecision(17);
  os << "wavelength_m = " << o.wavelength << '\n'
     << "pixel_pitch_m = " << o.pixel_pitch << '\n'
     << "grid_rows = " << o.grid_rows << '\n'
     << "grid_cols = " << o.grid_cols << '\n';
  if (o.aperture_height) os << "aperture_height_m = " << *o.aperture_height << '\n';
  os << "dis1_m = " << o.dis1 << '\n'
     << "dis_end_m = " << o.dis_end << '\n'
     << "depth_spacing_m = " << o.depth_spacing << '\n'
     << "reconstruction_input = "
     << (o.reconstruction_input == ReconstructionInput::intensity ? "intensity" : "amplitude")
     << '\n'
     << "min_dia_m = " << o.min_dia << '\n'
     << "max_dia_m = " << o.max_dia << '\n';
  if (o.fixed_intensity) os << "fixed_intensity = " << *o.fixed_intensity << '\n';
  if (o.axial_resolution) os << "axial_resolution_m = " << *o.axial_resolution << '\n';
  os << "gaussian_sigma_px = " << o.detection.gaussian_sigma_px << '\n'
     << "canny_low_quantile = " << o.detection.canny_low_quantile << '\n'
     << "canny_high_quantile = " << o.detection.canny_high_quantile << '\n'
     << "morph_radius_px = " << o.detection.morph_radius_px << '\n'
     << "lateral_window_px = " << o.detection.lateral_window_px << '\n'
     << "calib_v1 = " << o.calibration.v1 << '\n'
     << "calib_v2 = " << o.calibration.v2 << '\n'
     << "calib_step = " << o.calibration.step << '\n'
     << "calib_sample_count = " << o.calibration.sample_count << '\n'
     << "sim_count = " << s.count << '\n'
     << "sim_z_min_m = " << s.z_min << '\n'
     << "sim_z_max_m = " << s.z_max << '\n';
  if (!s.planes.empty()) {
    os << "sim_planes_m = ";
    for (std::size_t i = 0; i < s.planes.size(); ++i) os << (i ? ", " : "") << s.planes[i];
    os << '\n';
  }
  if (s.min_dia) os << "sim_min_dia_m = " << *s.min_dia << '\n';
  if (s.max_dia) os << "sim_max_dia_m = " << *s.max_dia << '\n';
  os << "sim_min_lateral_sep_px = " << s.min_lateral_sep_px << '\n';
  if (s.min_axial_sep) os << "sim_min_axial_sep_m = " << *s.min_axial_sep << '\n';
  os << "sim_margin_px = " << s.margin_px << '\n'
     << "sim_noise_level = " << s.noise_level << '\n'
     << "sim_enforce_separation = " << (s.enforce_separation ? "true" : "false") << '\n'
     << "sim_seed = " << s.seed << '\n';
  out << os.str();
}

void save_config(const std::string& path, const ToolkitConfig& config) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write config file '" + path + "'");
  write_config(out, config);
}

std::uint64_t config_hash(const ToolkitConfig& config) {
  std::ostringstream os;
  write_config(os, config);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : os.str()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace holofocus
