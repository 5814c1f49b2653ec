#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fmcw/cluster.hpp"
#include "fmcw/detect.hpp"
#include "fmcw/dsp.hpp"
#include "fmcw/scene.hpp"
#include "fmcw/track.hpp"
#include "fmcw/waveform.hpp"

namespace fmcw {

// Clustering stage knobs (DbscanParams plus the auto-eps switch).
struct ClusterOptions {
  // Neighborhood radius; unset = derive per frame from the k-distance knee.
  std::optional<double> eps;
  int min_pts = 6;  // default_min_pts(3): points are (x, y, v)
  std::optional<std::array<double, 3>> axis_scales;
  bool use_grid_index = false;

  DbscanParams dbscan_params(double resolved_eps) const;
  void validate() const;
};

// Full parameter set for one end-to-end run.
struct PipelineConfig {
  ChirpParams chirp;
  SceneConfig scene;
  DspOptions dsp;
  DetectPolicy detect;
  ClusterOptions cluster;
  TrackerConfig track;
  int num_frames = 1;
  bool write_rdmap_binary = false;

  // Frame period: one frame spans num_chirps sweeps.
  double frame_period_s() const {
    return static_cast<double>(chirp.num_chirps) * chirp.duration_s;
  }
  void validate() const;
};

// Raised for malformed or invalid configuration (JSON syntax errors carry
// line/column; schema errors carry the offending key path).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parse a JSON config. Keys are optional and fall back to the documented
// defaults; track.dt_s falls back to the frame period. Unknown keys are an
// error (the message names the full key path) unless `lenient`, in which
// case they are collected into `warnings` (one message per key) and ignored.
PipelineConfig parse_config(const std::string& json_text, bool lenient = false,
                            std::vector<std::string>* warnings = nullptr);
PipelineConfig load_config(const std::filesystem::path& path, bool lenient = false,
                           std::vector<std::string>* warnings = nullptr);

// Canonical JSON rendering of the semantic parameters (sorted keys, fixed
// field set, no output paths). Two configs hash equal iff this string is
// byte-equal.
std::string canonical_config_json(const PipelineConfig& config);

// FNV-1a 64-bit over canonical_config_json.
std::uint64_t param_hash(const PipelineConfig& config);
std::string param_hash_hex(const PipelineConfig& config);

// FNV-1a 64-bit over arbitrary bytes (exposed for tests and manifests).
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace fmcw
