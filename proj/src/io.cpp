#include "holofocus/io.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "holofocus/error.hpp"

namespace holofocus::io {

namespace {

constexpr char kScaleKey[] = "holofocus:scale";
constexpr std::array<char, 8> kRawMagic = {'H', 'O', 'L', 'O', 'F', '3', '2', '\0'};

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::string& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw IoError("cannot open '" + path + "'");
  return f;
}

std::string extension(const std::string& path) {
  std::string ext = std::filesystem::path(path).extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext;
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

void put_u32_le(std::ostream& out, std::uint32_t v) {
  const std::array<char, 4> b = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                                 static_cast<char>((v >> 16) & 0xff),
                                 static_cast<char>((v >> 24) & 0xff)};
  out.write(b.data(), 4);
}

std::uint32_t get_u32_le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

std::vector<std::array<double, 4>> read_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw IoError("'" + path + "' is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "id,x_m,y_m,z_m,diameter_m") {
    throw IoError("'" + path + "': unexpected header '" + line + "'");
  }
  std::vector<std::array<double, 4>> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 5) {
      throw IoError("'" + path + "' line " + std::to_string(line_no) + ": expected 5 columns");
    }
    std::array<double, 4> row{};
    for (std::size_t k = 0; k < 4; ++k) {
      const std::string& cell = cells[k + 1];
      const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), row[k]);
      if (ec != std::errc() || end != cell.data() + cell.size()) {
        throw IoError("'" + path + "' line " + std::to_string(line_no) + ": bad number");
      }
    }
    rows.push_back(row);
  }
  return rows;
}

void write_rows(const std::string& path, const std::vector<std::array<double, 4>>& rows) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "id,x_m,y_m,z_m,diameter_m\n" << std::setprecision(17);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out << i << ',' << rows[i][0] << ',' << rows[i][1] << ',' << rows[i][2] << ','
        << rows[i][3] << '\n';
  }
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace

void write_png16(const std::string& path, const GrayImage& img) {
  if (img.empty()) throw IoError("cannot write an empty image");
  double scale = 0.0;
  for (double v : img.values()) {
    if (!std::isfinite(v) || v < 0.0) throw IoError("PNG export needs finite values >= 0");
    scale = std::max(scale, v);
  }
  if (scale == 0.0) scale = 1.0;

  FilePtr file = open_file(path, "wb");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw IoError("libpng initialisation failed");
  }
  std::vector<png_byte> row(img.cols() * 2);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("failed writing PNG '" + path + "'");
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.cols()), static_cast<png_uint_32>(img.rows()),
               16, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  std::string scale_text = format_double(scale);
  png_text text{};
  text.compression = PNG_TEXT_COMPRESSION_NONE;
  text.key = const_cast<char*>(kScaleKey);
  text.text = scale_text.data();
  png_set_text(png, info, &text, 1);
  png_write_info(png, info);
  for (std::size_t r = 0; r < img.rows(); ++r) {
    for (std::size_t c = 0; c < img.cols(); ++c) {
      const auto q = static_cast<std::uint16_t>(std::lround(img(r, c) / scale * 65535.0));
      row[2 * c] = static_cast<png_byte>(q >> 8);
      row[2 * c + 1] = static_cast<png_byte>(q & 0xff);
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

GrayImage read_png16(const std::string& path) {
  FilePtr file = open_file(path, "rb");
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("libpng initialisation failed");
  }
  GrayImage img;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("failed reading PNG '" + path + "'");
  }
  png_init_io(png, file.get());
  png_read_info(png, info);
  const png_uint_32 width = png_get_image_width(png, info);
  const png_uint_32 height = png_get_image_height(png, info);
  const int depth = png_get_bit_depth(png, info);
  const int color = png_get_color_type(png, info);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_RGB || color == PNG_COLOR_TYPE_RGB_ALPHA ||
      color == PNG_COLOR_TYPE_PALETTE) {
    png_set_rgb_to_gray_fixed(png, 1, -1, -1);
  }
  if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  if (depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  png_read_update_info(png, info);
  const int out_depth = png_get_bit_depth(png, info);

  double scale = 1.0;
  png_textp texts = nullptr;
  int n_text = 0;
  if (png_get_text(png, info, &texts, &n_text) > 0) {
    for (int i = 0; i < n_text; ++i) {
      if (std::strcmp(texts[i].key, kScaleKey) == 0) scale = std::strtod(texts[i].text, nullptr);
    }
  }
  const double full = out_depth == 16 ? 65535.0 : 255.0;
  img = GrayImage(height, width);
  std::vector<png_byte> row(png_get_rowbytes(png, info));
  for (png_uint_32 r = 0; r < height; ++r) {
    png_read_row(png, row.data(), nullptr);
    for (png_uint_32 c = 0; c < width; ++c) {
      const double q = out_depth == 16
                           ? static_cast<double>((row[2 * c] << 8) | row[2 * c + 1])
                           : static_cast<double>(row[c]);
      img(r, c) = q / full * scale;
    }
  }
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

void write_raw_f32(const std::string& path, const GrayImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out.write(kRawMagic.data(), kRawMagic.size());
  put_u32_le(out, static_cast<std::uint32_t>(img.rows()));
  put_u32_le(out, static_cast<std::uint32_t>(img.cols()));
  for (double v : img.values()) {
    put_u32_le(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  }
  if (!out) throw IoError("failed writing '" + path + "'");
}

GrayImage read_raw_f32(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::array<unsigned char, 16> header{};
  in.read(reinterpret_cast<char*>(header.data()), header.size());
  if (!in || std::memcmp(header.data(), kRawMagic.data(), kRawMagic.size()) != 0) {
    throw IoError("'" + path + "' is not a raw float32 image");
  }
  const std::uint32_t rows = get_u32_le(header.data() + 8);
  const std::uint32_t cols = get_u32_le(header.data() + 12);
  GrayImage img(rows, cols);
  std::vector<unsigned char> buf(static_cast<std::size_t>(rows) * cols * 4);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!in) throw IoError("'" + path + "' is truncated");
  for (std::size_t i = 0; i < img.size(); ++i) {
    img[i] = static_cast<double>(std::bit_cast<float>(get_u32_le(buf.data() + 4 * i)));
  }
  return img;
}

void write_image(const std::string& path, const GrayImage& img) {
  const std::string ext = extension(path);
  if (ext == ".png") return write_png16(path, img);
  if (ext == ".raw" || ext == ".f32") return write_raw_f32(path, img);
  throw IoError("unsupported image extension '" + ext + "' (use .png, .raw or .f32)");
}

GrayImage read_image(const std::string& path) {
  const std::string ext = extension(path);
  if (ext == ".png") return read_png16(path);
  if (ext == ".raw" || ext == ".f32") return read_raw_f32(path);
  throw IoError("unsupported image extension '" + ext + "' (use .png, .raw or .f32)");
}

void write_particles_csv(const std::string& path, const std::vector<Particle>& particles) {
  std::vector<std::array<double, 4>> rows;
  for (const Particle& p : particles) rows.push_back({p.x, p.y, p.z, p.diameter});
  write_rows(path, rows);
}

std::vector<Particle> read_particles_csv(const std::string& path) {
  std::vector<Particle> out;
  for (const auto& r : read_rows(path)) out.push_back({r[0], r[1], r[2], r[3]});
  return out;
}

void write_detections_csv(const std::string& path,
                          const std::vector<ParticleDetection>& detections) {
  std::vector<std::array<double, 4>> rows;
  for (const ParticleDetection& d : detections) rows.push_back({d.x, d.y, d.z, d.diameter});
  write_rows(path, rows);
}

std::vector<ParticleDetection> read_detections_csv(const std::string& path) {
  std::vector<ParticleDetection> out;
  for (const auto& r : read_rows(path)) out.push_back({r[0], r[1], r[2], r[3]});
  return out;
}

std::string sidecar_path(const std::string& csv_path) { return csv_path + ".json"; }

void write_sidecar(const std::string& csv_path, const Sidecar& sidecar) {
  nlohmann::json j;
  std::ostringstream hash;
  hash << std::hex << std::setw(16) << std::setfill('0') << sidecar.config_hash;
  j["config_hash"] = hash.str();
  j["seed"] = sidecar.seed;
  j["pixel_pitch_m"] = sidecar.pixel_pitch;
  if (sidecar.axial_resolution) j["axial_resolution_m"] = *sidecar.axial_resolution;
  j["kind"] = sidecar.kind;
  std::ofstream out(sidecar_path(csv_path));
  if (!out) throw IoError("cannot write '" + sidecar_path(csv_path) + "'");
  out << j.dump(2) << '\n';
}

std::optional<Sidecar> read_sidecar(const std::string& csv_path) {
  std::ifstream in(sidecar_path(csv_path));
  if (!in) return std::nullopt;
  try {
    const nlohmann::json j = nlohmann::json::parse(in);
    Sidecar s;
    s.config_hash = std::stoull(j.at("config_hash").get<std::string>(), nullptr, 16);
    s.seed = j.at("seed").get<std::uint64_t>();
    s.pixel_pitch = j.at("pixel_pitch_m").get<double>();
    if (j.contains("axial_resolution_m")) s.axial_resolution = j["axial_resolution_m"].get<double>();
    s.kind = j.value("kind", "");
    return s;
  } catch (const std::exception& e) {
    throw IoError("malformed sidecar '" + sidecar_path(csv_path) + "': " + e.what());
  }
}

}  // namespace holofocus::io
