#include "fmcw/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json_codec.hpp"

namespace fmcw {

namespace {

using codec::json;

// Position of a byte offset in the original text, for parse-error messages.
std::pair<std::size_t, std::size_t> line_and_column(const std::string& text,
                                                    std::size_t byte_offset) {
  std::size_t line = 1, column = 1;
  const std::size_t end = std::min(byte_offset, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

std::string join_path(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

// Wraps one JSON object during parsing: typed getters mark keys as consumed,
// finish() reports whatever remains as unknown (error, or warning when
// lenient).
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path, bool lenient,
               std::vector<std::string>* warnings)
      : obj_(obj), path_(std::move(path)), lenient_(lenient), warnings_(warnings) {
    if (!obj_.is_object()) {
      throw ConfigError("config key '" + (path_.empty() ? "<root>" : path_) +
                        "' must be a JSON object");
    }
  }

  bool has(const char* key) const {
    const auto it = obj_.find(key);
    return it != obj_.end() && !it->is_null();
  }

  const json* consume(const char* key) {
    consumed_.push_back(key);
    const auto it = obj_.find(key);
    if (it == obj_.end() || it->is_null()) return nullptr;
    return &*it;
  }

  [[noreturn]] void type_fail(const char* key, const char* expected) const {
    throw ConfigError("config key '" + join_path(path_, key) + "' must be " +
                      std::string(expected));
  }

  double number_or(const char* key, double fallback) {
    const json* v = consume(key);
    if (v == nullptr) return fallback;
    if (!v->is_number()) type_fail(key, "a number");
    return v->get<double>();
  }
  int int_or(const char* key, int fallback) {
    const json* v = consume(key);
    if (v == nullptr) return fallback;
    if (!v->is_number_integer() && !v->is_number_unsigned()) {
      type_fail(key, "an integer");
    }
    return v->get<int>();
  }
  std::size_t size_or(const char* key, std::size_t fallback) {
    const json* v = consume(key);
    if (v == nullptr) return fallback;
    if ((!v->is_number_integer() && !v->is_number_unsigned()) ||
        (v->is_number_integer() && v->get<long long>() < 0)) {
      type_fail(key, "a non-negative integer");
    }
    return v->get<std::size_t>();
  }
  std::uint64_t uint64_or(const char* key, std::uint64_t fallback) {
    const json* v = consume(key);
    if (v == nullptr) return fallback;
    if ((!v->is_number_integer() && !v->is_number_unsigned()) ||
        (v->is_number_integer() && v->get<long long>() < 0)) {
      type_fail(key, "a non-negative integer");
    }
    return v->get<std::uint64_t>();
  }
  bool bool_or(const char* key, bool fallback) {
    const json* v = consume(key);
    if (v == nullptr) return fallback;
    if (!v->is_boolean()) type_fail(key, "a boolean");
    return v->get<bool>();
  }
  std::string string_or(const char* key, std::string fallback) {
    const json* v = consume(key);
    if (v == nullptr) return fallback;
    if (!v->is_string()) type_fail(key, "a string");
    return v->get<std::string>();
  }

  void finish() {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      bool known = false;
      for (const char* k : consumed_) {
        if (it.key() == k) {
          known = true;
          break;
        }
      }
      if (known) continue;
      const std::string msg = "unknown config key '" + join_path(path_, it.key()) + "'";
      if (lenient_) {
        if (warnings_ != nullptr) warnings_->push_back(msg + " (ignored)");
      } else {
        throw ConfigError(msg + "; pass --lenient to ignore unknown keys");
      }
    }
  }

  const std::string& path() const { return path_; }
  bool lenient() const { return lenient_; }
  std::vector<std::string>* warnings() const { return warnings_; }

 private:
  const json& obj_;
  std::string path_;
  bool lenient_;
  std::vector<std::string>* warnings_;
  std::vector<const char*> consumed_;
};

ChirpParams parse_chirp(const json& j, bool lenient, std::vector<std::string>* warnings) {
  ObjectReader r(j, "chirp", lenient, warnings);
  ChirpParams p;
  p.f_start_hz = r.number_or("f_start_hz", p.f_start_hz);
  p.bandwidth_hz = r.number_or("bandwidth_hz", p.bandwidth_hz);
  p.duration_s = r.number_or("duration_s", p.duration_s);
  p.sample_rate_hz = r.number_or("sample_rate_hz", p.sample_rate_hz);
  p.num_chirps = r.int_or("num_chirps", p.num_chirps);
  r.finish();
  return p;
}

Target parse_target(const json& j, const std::string& path, bool lenient,
                    std::vector<std::string>* warnings) {
  ObjectReader r(j, path, lenient, warnings);
  Target t;
  t.range_m = r.number_or("range_m", t.range_m);
  t.radial_velocity_mps = r.number_or("radial_velocity_mps", t.radial_velocity_mps);
  t.azimuth_deg = r.number_or("azimuth_deg", t.azimuth_deg);
  t.amplitude = r.number_or("amplitude", t.amplitude);
  r.finish();
  return t;
}

SceneConfig parse_scene(const json& j, bool lenient, std::vector<std::string>* warnings) {
  ObjectReader r(j, "scene", lenient, warnings);
  SceneConfig s;
  if (const json* targets = r.consume("targets")) {
    if (!targets->is_array()) {
      throw ConfigError("config key 'scene.targets' must be an array");
    }
    for (std::size_t i = 0; i < targets->size(); ++i) {
      s.targets.push_back(parse_target((*targets)[i],
                                       "scene.targets[" + std::to_string(i) + "]",
                                       lenient, warnings));
    }
  }
  s.carrier_frequency_hz = r.number_or("carrier_frequency_hz", s.carrier_frequency_hz);
  s.rx_count = r.int_or("rx_count", s.rx_count);
  s.rx_spacing_wavelengths = r.number_or("rx_spacing_wavelengths", s.rx_spacing_wavelengths);
  s.noise_std = r.number_or("noise_std", s.noise_std);
  s.rng_seed = r.uint64_or("rng_seed", s.rng_seed);
  // Accepted both here (where it lives on SceneConfig, and where the
  // canonical form emits it) and at the top level; top level wins.
  s.c_mps = r.number_or("c_mps", s.c_mps);
  r.finish();
  return s;
}

DspOptions parse_dsp(const json& j, bool lenient, std::vector<std::string>* warnings) {
  ObjectReader r(j, "dsp", lenient, warnings);
  DspOptions d;
  d.range_fft_size = r.size_or("range_fft_size", d.range_fft_size);
  d.doppler_fft_size = r.size_or("doppler_fft_size", d.doppler_fft_size);
  d.angle_fft_size = r.size_or("angle_fft_size", d.angle_fft_size);
  const std::string window = r.string_or("window", "rectangular");
  try {
    d.window = codec::window_from_string(window);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config key 'dsp.window': ") + e.what());
  }
  r.finish();
  return d;
}

DetectPolicy parse_detect(const json& j, bool lenient,
                          std::vector<std::string>* warnings) {
  ObjectReader r(j, "detect", lenient, warnings);
  DetectPolicy d;
  d.threshold_factor = r.number_or("threshold_factor", d.threshold_factor);
  d.max_peaks = r.size_or("max_peaks", d.max_peaks);
  r.finish();
  return d;
}

ClusterOptions parse_cluster(const json& j, bool lenient,
                             std::vector<std::string>* warnings) {
  ObjectReader r(j, "cluster", lenient, warnings);
  ClusterOptions c;
  if (const json* eps = r.consume("eps")) {
    if (!eps->is_number()) throw ConfigError("config key 'cluster.eps' must be a number or null");
    c.eps = eps->get<double>();
  }
  c.min_pts = r.int_or("min_pts", c.min_pts);
  if (const json* scales = r.consume("axis_scales")) {
    if (!scales->is_array() || scales->size() != 3) {
      throw ConfigError("config key 'cluster.axis_scales' must be an array of 3 numbers or null");
    }
    std::array<double, 3> a{};
    for (int i = 0; i < 3; ++i) {
      if (!(*scales)[i].is_number()) {
        throw ConfigError("config key 'cluster.axis_scales' must be an array of 3 numbers or null");
      }
      a[i] = (*scales)[i].get<double>();
    }
    c.axis_scales = a;
  }
  c.use_grid_index = r.bool_or("use_grid_index", c.use_grid_index);
  r.finish();
  return c;
}

TrackerConfig parse_track(const json& j, bool lenient,
                          std::vector<std::string>* warnings, bool* dt_given) {
  ObjectReader r(j, "track", lenient, warnings);
  TrackerConfig t;
  *dt_given = r.has("dt_s");
  t.kalman.dt_s = r.number_or("dt_s", t.kalman.dt_s);
  t.kalman.process_noise_scale =
      r.number_or("process_noise_scale", t.kalman.process_noise_scale);
  t.kalman.initial_covariance_scale =
      r.number_or("initial_covariance_scale", t.kalman.initial_covariance_scale);
  t.kalman.joseph_form = r.bool_or("joseph_form", t.kalman.joseph_form);
  if (const json* noise = r.consume("measurement_noise")) {
    if (noise->is_number()) {
      // Scalar shorthand: R = value * I2.
      t.kalman.measurement_noise = noise->get<double>() * Eigen::Matrix2d::Identity();
    } else if (noise->is_array() && noise->size() == 2 && (*noise)[0].is_array() &&
               (*noise)[1].is_array() && (*noise)[0].size() == 2 &&
               (*noise)[1].size() == 2) {
      for (int row = 0; row < 2; ++row) {
        for (int col = 0; col < 2; ++col) {
          const json& cell = (*noise)[row][col];
          if (!cell.is_number()) {
            throw ConfigError(
                "config key 'track.measurement_noise' must be a number or a 2x2 matrix");
          }
          t.kalman.measurement_noise(row, col) = cell.get<double>();
        }
      }
    } else {
      throw ConfigError(
          "config key 'track.measurement_noise' must be a number or a 2x2 matrix");
    }
  }
  t.confirm_threshold = r.int_or("confirm_threshold", t.confirm_threshold);
  t.delete_threshold = r.int_or("delete_threshold", t.delete_threshold);
  if (const json* gate = r.consume("gate")) {
    if (!gate->is_number()) throw ConfigError("config key 'track.gate' must be a number or null");
    t.gate = gate->get<double>();
  }
  const std::string assoc = r.string_or("association", "optimal");
  try {
    t.association = codec::association_from_string(assoc);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config key 'track.association': ") + e.what());
  }
  r.finish();
  return t;
}

}  // namespace

DbscanParams ClusterOptions::dbscan_params(double resolved_eps) const {
  DbscanParams p;
  p.eps = resolved_eps;
  p.min_pts = min_pts;
  p.axis_scales = axis_scales;
  p.use_grid_index = use_grid_index;
  return p;
}

void ClusterOptions::validate() const {
  if (eps && (!(*eps > 0.0) || !std::isfinite(*eps))) {
    throw std::invalid_argument("cluster.eps must be positive when set");
  }
  // Remaining constraints are shared with DbscanParams; validate through it
  // with a placeholder eps.
  dbscan_params(eps.value_or(1.0)).validate();
}

void PipelineConfig::validate() const {
  chirp.validate();
  scene.validate();
  detect.validate();
  cluster.validate();
  track.validate();
  if (num_frames < 1) {
    throw std::invalid_argument("num_frames must be >= 1, got " +
                                std::to_string(num_frames));
  }
  // Catch unsimulatable targets up front (simulate_frame re-checks per frame
  // since ranges advance over time).
  const double slope = chirp_slope(chirp);
  for (std::size_t i = 0; i < scene.targets.size(); ++i) {
    const double beat = beat_frequency(slope, scene.targets[i].range_m, scene.c_mps);
    if (beat >= chirp.sample_rate_hz) {
      throw std::invalid_argument(
          "scene.targets[" + std::to_string(i) + "]: beat frequency " +
          std::to_string(beat) + " Hz is not below chirp.sample_rate_hz");
    }
  }
  if (dsp.range_fft_size != 0 && dsp.range_fft_size < chirp.samples_per_chirp()) {
    throw std::invalid_argument("dsp.range_fft_size must be 0 (auto) or >= samples per chirp");
  }
  if (dsp.doppler_fft_size != 0 &&
      dsp.doppler_fft_size < static_cast<std::size_t>(chirp.num_chirps)) {
    throw std::invalid_argument("dsp.doppler_fft_size must be 0 (auto) or >= num_chirps");
  }
  if (dsp.angle_fft_size != 0 &&
      dsp.angle_fft_size < static_cast<std::size_t>(scene.rx_count)) {
    throw std::invalid_argument("dsp.angle_fft_size must be 0 (auto) or >= scene.rx_count");
  }
}

PipelineConfig parse_config(const std::string& json_text, bool lenient,
                            std::vector<std::string>* warnings) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_and_column(json_text, e.byte > 0 ? e.byte - 1 : 0);
    throw ConfigError("config JSON syntax error at line " + std::to_string(line) +
                      ", column " + std::to_string(column) + ": " + e.what());
  }

  ObjectReader r(root, "", lenient, warnings);
  PipelineConfig cfg;
  bool dt_given = false;

  if (const json* chirp = r.consume("chirp")) {
    cfg.chirp = parse_chirp(*chirp, lenient, warnings);
  }
  if (const json* scene = r.consume("scene")) {
    cfg.scene = parse_scene(*scene, lenient, warnings);
  }
  if (const json* dsp = r.consume("dsp")) {
    cfg.dsp = parse_dsp(*dsp, lenient, warnings);
  }
  if (const json* detect = r.consume("detect")) {
    cfg.detect = parse_detect(*detect, lenient, warnings);
  }
  if (const json* cluster = r.consume("cluster")) {
    cfg.cluster = parse_cluster(*cluster, lenient, warnings);
  }
  if (const json* track = r.consume("track")) {
    cfg.track = parse_track(*track, lenient, warnings, &dt_given);
  }
  cfg.num_frames = r.int_or("num_frames", cfg.num_frames);
  cfg.write_rdmap_binary = r.bool_or("write_rdmap_binary", cfg.write_rdmap_binary);
  cfg.scene.c_mps = r.number_or("c_mps", cfg.scene.c_mps);
  r.finish();

  // Default tracker step to the frame period when dt was not specified.
  if (!dt_given) cfg.track.kalman.dt_s = cfg.frame_period_s();

  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path, bool lenient,
                           std::vector<std::string>* warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(std::move(ss).str(), lenient, warnings);
}

std::string canonical_config_json(const PipelineConfig& config) {
  // nlohmann objects keep keys sorted, so dump() is canonical by itself.
  return codec::pipeline_to_json(config).dump();
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 14695981039346656037ull;
  for (const char ch : bytes) {
    hash ^= static_cast<unsigned char>(ch);
    hash *= 1099511628211ull;
  }
  return hash;
}

std::uint64_t param_hash(const PipelineConfig& config) {
  return fnv1a64(canonical_config_json(config));
}

std::string param_hash_hex(const PipelineConfig& config) {
  const std::uint64_t h = param_hash(config);
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf, 16);
}

}  // namespace fmcw
