#include "fmcw/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json_codec.hpp"

static_assert(std::endian::native == std::endian::little,
              "binary writers assume a little-endian host");

namespace fmcw {

namespace {

using codec::json;

[[noreturn]] void fail_io(const std::filesystem::path& path, const char* what) {
  throw std::runtime_error(std::string(what) + ": " + path.string());
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_io(path, "cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

void spit(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail_io(path, "cannot open for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) fail_io(path, "write failed");
}

std::string shortest_repr(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::size_t significant_digits(const std::string& repr) {
  std::size_t digits = 0;
  bool leading_zero = true;
  for (const char ch : repr) {
    if (ch == 'e' || ch == 'E') break;
    if (ch < '0' || ch > '9') continue;
    if (ch == '0' && leading_zero) continue;
    leading_zero = false;
    ++digits;
  }
  return digits;
}

// Split one CSV line on commas (fields in this project never contain commas
// or quotes, so no escaping is needed).
std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

std::vector<std::string> read_lines(const std::string& content) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < content.size()) {
    std::size_t pos = content.find('\n', start);
    if (pos == std::string::npos) pos = content.size();
    std::string line = content.substr(start, pos - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    start = pos + 1;
  }
  return lines;
}

int parse_int(const std::string& token, const char* what) {
  int value = 0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
    throw std::invalid_argument(std::string("invalid integer for ") + what + ": '" +
                                token + "'");
  }
  return value;
}

void append_float32_le(std::string& out, double v) {
  const float f = static_cast<float>(v);
  char bytes[sizeof(float)];
  std::memcpy(bytes, &f, sizeof(float));
  out.append(bytes, sizeof(float));
}

float read_float32_le(const char* data) {
  float f;
  std::memcpy(&f, data, sizeof(float));
  return f;
}

json load_sidecar(const std::filesystem::path& path, const char* expected_format) {
  json j;
  try {
    j = json::parse(slurp(path));
  } catch (const json::parse_error& e) {
    throw std::runtime_error("malformed JSON sidecar " + path.string() + ": " +
                             e.what());
  }
  if (!j.is_object() || j.value("format", "") != expected_format) {
    throw std::runtime_error("sidecar " + path.string() + " is not a " +
                             expected_format + " file");
  }
  return j;
}

}  // namespace

std::string format_double(double value) {
  if (!std::isfinite(value)) {
    throw std::invalid_argument("format_double: non-finite value");
  }
  std::string repr = shortest_repr(value);
  if (significant_digits(repr) <= 9) return repr;

  // Round to 9 significant digits, then re-shorten the rounded value. The
  // result never needs more than 9 digits (the 9-digit string identifies it),
  // so a second pass always terminates with a stable representation.
  char buf[64];
  const auto res =
      std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 9);
  double rounded = 0.0;
  std::from_chars(buf, res.ptr, rounded);
  return shortest_repr(rounded);
}

double parse_double(const std::string& token) {
  double value = 0.0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
  // Writers only ever emit finite values, so "nan"/"inf" means corruption.
  if (res.ec != std::errc{} || res.ptr != token.data() + token.size() ||
      !std::isfinite(value)) {
    throw std::invalid_argument("invalid number: '" + token + "'");
  }
  return value;
}

// ---- point clouds ----------------------------------------------------------

void write_point_cloud_csv(const std::filesystem::path& path,
                           std::span<const PointRecord> records) {
  std::string out = "frame,x_m,y_m,v_mps,magnitude,cluster,track_id\n";
  for (const PointRecord& rec : records) {
    out += std::to_string(rec.frame);
    out += ',';
    out += format_double(rec.point.x_m);
    out += ',';
    out += format_double(rec.point.y_m);
    out += ',';
    out += format_double(rec.point.v_mps);
    out += ',';
    out += format_double(rec.point.magnitude);
    out += ',';
    out += std::to_string(rec.cluster);
    out += ',';
    if (rec.track_id) out += std::to_string(*rec.track_id);
    out += '\n';
  }
  spit(path, out);
}

std::vector<PointRecord> read_point_cloud_csv(const std::filesystem::path& path) {
  const std::vector<std::string> lines = read_lines(slurp(path));
  if (lines.empty() || lines[0] != "frame,x_m,y_m,v_mps,magnitude,cluster,track_id") {
    fail_io(path, "not a point-cloud CSV (bad header)");
  }
  std::vector<PointRecord> records;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const std::vector<std::string> f = split_csv(lines[i]);
    if (f.size() != 7) fail_io(path, "point-cloud CSV row with wrong field count");
    PointRecord rec;
    rec.frame = parse_int(f[0], "frame");
    rec.point.x_m = parse_double(f[1]);
    rec.point.y_m = parse_double(f[2]);
    rec.point.v_mps = parse_double(f[3]);
    rec.point.magnitude = parse_double(f[4]);
    rec.cluster = parse_int(f[5], "cluster");
    if (!f[6].empty()) rec.track_id = parse_int(f[6], "track_id");
    records.push_back(rec);
  }
  return records;
}

// ---- track logs --------------------------------------------------------------

void write_tracks_csv(const std::filesystem::path& path,
                      std::span<const TrackRecord> records) {
  std::string out = "frame,track_id,status,x_m,y_m,vx_mps,vy_mps,hits,misses\n";
  for (const TrackRecord& rec : records) {
    out += std::to_string(rec.frame);
    out += ',';
    out += std::to_string(rec.track_id);
    out += ',';
    out += codec::status_to_string(rec.status);
    out += ',';
    out += format_double(rec.x_m);
    out += ',';
    out += format_double(rec.y_m);
    out += ',';
    out += format_double(rec.vx_mps);
    out += ',';
    out += format_double(rec.vy_mps);
    out += ',';
    out += std::to_string(rec.hits);
    out += ',';
    out += std::to_string(rec.misses);
    out += '\n';
  }
  spit(path, out);
}

std::vector<TrackRecord> read_tracks_csv(const std::filesystem::path& path) {
  const std::vector<std::string> lines = read_lines(slurp(path));
  if (lines.empty() ||
      lines[0] != "frame,track_id,status,x_m,y_m,vx_mps,vy_mps,hits,misses") {
    fail_io(path, "not a tracks CSV (bad header)");
  }
  std::vector<TrackRecord> records;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const std::vector<std::string> f = split_csv(lines[i]);
    if (f.size() != 9) fail_io(path, "tracks CSV row with wrong field count");
    TrackRecord rec;
    rec.frame = parse_int(f[0], "frame");
    rec.track_id = parse_int(f[1], "track_id");
    rec.status = codec::status_from_string(f[2]);
    rec.x_m = parse_double(f[3]);
    rec.y_m = parse_double(f[4]);
    rec.vx_mps = parse_double(f[5]);
    rec.vy_mps = parse_double(f[6]);
    rec.hits = parse_int(f[7], "hits");
    rec.misses = parse_int(f[8], "misses");
    records.push_back(rec);
  }
  return records;
}

// ---- range-Doppler maps ------------------------------------------------------

namespace {

const char* const kRdmapMagic = "# fmcw-rdmap v1";

void append_geometry_comments(std::string& out, const CubeGeometry& g) {
  const auto line = [&out](const char* key, const std::string& value) {
    out += "# ";
    out += key;
    out += ' ';
    out += value;
    out += '\n';
  };
  line("range_fft_size", std::to_string(g.range_fft_size));
  line("doppler_fft_size", std::to_string(g.doppler_fft_size));
  line("angle_fft_size", std::to_string(g.angle_fft_size));
  line("sample_rate_hz", format_double(g.sample_rate_hz));
  line("slope_hz_per_s", format_double(g.slope_hz_per_s));
  line("chirp_duration_s", format_double(g.chirp_duration_s));
  line("bandwidth_hz", format_double(g.bandwidth_hz));
  line("carrier_frequency_hz", format_double(g.carrier_frequency_hz));
  line("rx_count", std::to_string(g.rx_count));
  line("rx_spacing_wavelengths", format_double(g.rx_spacing_wavelengths));
  line("c_mps", format_double(g.c_mps));
}

}  // namespace

void write_rdmap_csv(const std::filesystem::path& path, const RangeDopplerMap& map) {
  std::string out = kRdmapMagic;
  out += '\n';
  append_geometry_comments(out, map.geometry);
  out += "# rows(range_bins) ";
  out += std::to_string(map.magnitudes.rows());
  out += "\n# cols(doppler_bins) ";
  out += std::to_string(map.magnitudes.cols());
  out += '\n';
  for (std::size_t r = 0; r < map.magnitudes.rows(); ++r) {
    for (std::size_t d = 0; d < map.magnitudes.cols(); ++d) {
      if (d != 0) out += ',';
      out += format_double(map.magnitudes(r, d));
    }
    out += '\n';
  }
  spit(path, out);
}

RangeDopplerMap read_rdmap_csv(const std::filesystem::path& path) {
  const std::vector<std::string> lines = read_lines(slurp(path));
  if (lines.empty() || lines[0] != kRdmapMagic) {
    fail_io(path, "not an fmcw-rdmap CSV");
  }

  CubeGeometry g;
  std::size_t rows = 0, cols = 0;
  std::size_t first_data = lines.size();
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty()) continue;
    if (line[0] != '#') {
      first_data = i;
      break;
    }
    std::istringstream ss(line.substr(1));
    std::string key, value;
    ss >> key >> value;
    if (key == "range_fft_size") g.range_fft_size = parse_int(value, key.c_str());
    else if (key == "doppler_fft_size") g.doppler_fft_size = parse_int(value, key.c_str());
    else if (key == "angle_fft_size") g.angle_fft_size = parse_int(value, key.c_str());
    else if (key == "sample_rate_hz") g.sample_rate_hz = parse_double(value);
    else if (key == "slope_hz_per_s") g.slope_hz_per_s = parse_double(value);
    else if (key == "chirp_duration_s") g.chirp_duration_s = parse_double(value);
    else if (key == "bandwidth_hz") g.bandwidth_hz = parse_double(value);
    else if (key == "carrier_frequency_hz") g.carrier_frequency_hz = parse_double(value);
    else if (key == "rx_count") g.rx_count = parse_int(value, key.c_str());
    else if (key == "rx_spacing_wavelengths") g.rx_spacing_wavelengths = parse_double(value);
    else if (key == "c_mps") g.c_mps = parse_double(value);
    else if (key == "rows(range_bins)") rows = parse_int(value, "rows");
    else if (key == "cols(doppler_bins)") cols = parse_int(value, "cols");
    else fail_io(path, "unknown rdmap metadata key");
  }
  if (rows == 0 || cols == 0) fail_io(path, "rdmap CSV missing dimensions");

  RangeDopplerMap map;
  map.geometry = g;
  map.magnitudes = Array2D<double>(rows, cols);
  std::size_t r = 0;
  for (std::size_t i = first_data; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    if (r >= rows) fail_io(path, "rdmap CSV has more rows than declared");
    const std::vector<std::string> f = split_csv(lines[i]);
    if (f.size() != cols) fail_io(path, "rdmap CSV row with wrong column count");
    for (std::size_t d = 0; d < cols; ++d) map.magnitudes(r, d) = parse_double(f[d]);
    ++r;
  }
  if (r != rows) fail_io(path, "rdmap CSV has fewer rows than declared");
  return map;
}

void write_rdmap_binary(const std::filesystem::path& data_path,
                        const std::filesystem::path& meta_path,
                        const RangeDopplerMap& map) {
  std::string blob;
  blob.reserve(map.magnitudes.size() * sizeof(float));
  for (const double v : map.magnitudes.storage()) append_float32_le(blob, v);
  spit(data_path, blob);

  json meta;
  meta["format"] = "fmcw-rdmap";
  meta["version"] = 1;
  meta["rows"] = map.magnitudes.rows();
  meta["cols"] = map.magnitudes.cols();
  meta["dtype"] = "float32-le";
  meta["geometry"] = codec::geometry_to_json(map.geometry);
  spit(meta_path, meta.dump(2) + "\n");
}

RangeDopplerMap read_rdmap_binary(const std::filesystem::path& data_path,
                                  const std::filesystem::path& meta_path) {
  const json meta = load_sidecar(meta_path, "fmcw-rdmap");
  const std::size_t rows = meta.at("rows").get<std::size_t>();
  const std::size_t cols = meta.at("cols").get<std::size_t>();

  const std::string blob = slurp(data_path);
  if (blob.size() != rows * cols * sizeof(float)) {
    fail_io(data_path, "rdmap binary size does not match sidecar dimensions");
  }

  RangeDopplerMap map;
  map.geometry = codec::geometry_from_json(meta.at("geometry"));
  map.magnitudes = Array2D<double>(rows, cols);
  for (std::size_t i = 0; i < rows * cols; ++i) {
    map.magnitudes.storage()[i] =
        static_cast<double>(read_float32_le(blob.data() + i * sizeof(float)));
  }
  return map;
}

// ---- heatmaps ----------------------------------------------------------------

void write_heatmap_pgm(const std::filesystem::path& path, const Heatmap& heatmap) {
  const std::size_t rows = heatmap.values.rows();
  const std::size_t cols = heatmap.values.cols();
  if (rows == 0 || cols == 0) fail_io(path, "empty heatmap");

  std::string out = "P2\n";
  out += std::to_string(cols);
  out += ' ';
  out += std::to_string(rows);
  out += "\n255\n";
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const double v = heatmap.values(r, c);
      if (!(v >= 0.0 && v <= 1.0)) {
        throw std::invalid_argument("heatmap value outside [0, 1]: " +
                                    shortest_repr(v));
      }
      // Round half up so 1.0 maps to 255 and 0.0 to 0.
      const int gray = static_cast<int>(std::floor(v * 255.0 + 0.5));
      if (c != 0) out += ' ';
      out += std::to_string(gray);
    }
    out += '\n';
  }
  spit(path, out);
}

Heatmap read_heatmap_pgm(const std::filesystem::path& path) {
  const std::string content = slurp(path);
  std::istringstream ss(content);
  std::string magic;
  std::size_t cols = 0, rows = 0;
  int maxval = 0;
  ss >> magic >> cols >> rows >> maxval;
  if (magic != "P2" || cols == 0 || rows == 0 || maxval != 255) {
    fail_io(path, "not an 8-bit P2 PGM");
  }
  Heatmap hm;
  hm.values = Array2D<double>(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      int gray = -1;
      if (!(ss >> gray) || gray < 0 || gray > 255) fail_io(path, "bad PGM pixel");
      hm.values(r, c) = static_cast<double>(gray) / 255.0;
    }
  }
  return hm;
}

// ---- raw cubes -----------------------------------------------------------------

void write_cube(const std::filesystem::path& data_path,
                const std::filesystem::path& meta_path, const RawFrameCube& cube) {
  std::string blob;
  blob.reserve(cube.samples.size() * 2 * sizeof(float));
  for (const std::complex<double>& s : cube.samples.storage()) {
    append_float32_le(blob, s.real());
    append_float32_le(blob, s.imag());
  }
  spit(data_path, blob);

  json meta;
  meta["format"] = "fmcw-cube";
  meta["version"] = 1;
  meta["rx_count"] = cube.samples.dim0();
  meta["num_chirps"] = cube.samples.dim1();
  meta["samples_per_chirp"] = cube.samples.dim2();
  meta["dtype"] = "complex64-le";
  meta["domain"] = codec::representation_to_string(cube.domain);
  meta["chirp"] = codec::chirp_to_json(cube.chirp_params);
  if (cube.scene_meta) meta["scene"] = codec::scene_to_json(*cube.scene_meta);
  spit(meta_path, meta.dump(2) + "\n");
}

RawFrameCube read_cube(const std::filesystem::path& data_path,
                       const std::filesystem::path& meta_path) {
  const json meta = load_sidecar(meta_path, "fmcw-cube");
  const std::size_t n_rx = meta.at("rx_count").get<std::size_t>();
  const std::size_t n_chirps = meta.at("num_chirps").get<std::size_t>();
  const std::size_t n_samples = meta.at("samples_per_chirp").get<std::size_t>();

  const std::string blob = slurp(data_path);
  if (blob.size() != n_rx * n_chirps * n_samples * 2 * sizeof(float)) {
    fail_io(data_path, "cube binary size does not match sidecar dimensions");
  }

  RawFrameCube cube;
  cube.domain = codec::representation_from_string(meta.at("domain").get<std::string>());
  cube.chirp_params = codec::chirp_from_json(meta.at("chirp"));
  if (meta.contains("scene")) {
    cube.scene_meta = codec::scene_from_json(meta.at("scene"));
  }
  cube.samples = Array3D<std::complex<double>>(n_rx, n_chirps, n_samples);
  const char* p = blob.data();
  for (std::complex<double>& s : cube.samples.storage()) {
    const float re = read_float32_le(p);
    const float im = read_float32_le(p + sizeof(float));
    s = {static_cast<double>(re), static_cast<double>(im)};
    p += 2 * sizeof(float);
  }
  return cube;
}

}  // namespace fmcw
