#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fmcw/config.hpp"

namespace fmcw {

// Seed used by frame `frame_index` of a run seeded with `base_seed`. Frames
// get decorrelated noise streams while staying a pure function of the base
// seed.
std::uint64_t frame_seed(std::uint64_t base_seed, int frame_index);

// Scene as it looks `frame_index` frame periods after the configured one:
// each target's range advances by v * frame_period * frame_index (clamped at
// zero); velocity, azimuth, and amplitude are unchanged. The scene seed is
// replaced with frame_seed(...).
SceneConfig scene_at_frame(const PipelineConfig& config, int frame_index);

struct FrameSummary {
  int frame = 0;
  std::size_t detections = 0;
  std::size_t points = 0;
  int clusters = 0;
  std::size_t noise_points = 0;
  double eps_used = 0.0;
  bool eps_auto_degenerate = false;
  int live_tracks = 0;
  int confirmed_tracks = 0;
};

struct PipelineResult {
  std::vector<FrameSummary> frames;
  int final_confirmed_tracks = 0;
  std::string param_hash;
  std::filesystem::path manifest_path;
};

// Run simulate -> process -> detect -> cluster -> track for every frame,
// writing per frame into out_dir:
//   rdmap_NNNN.csv            range-Doppler magnitudes + geometry comments
//   rdmap_NNNN.f32 / .json    optional binary map (write_rdmap_binary)
//   heatmap_NNNN.pgm          peak-normalized map as 8-bit PGM
//   points_NNNN.csv           point cloud with cluster and track_id columns
// plus, across frames:
//   tracks.csv                one row per live track per frame
//   manifest.json             seed, parameter hash, versions, per-frame stats
// Every artifact is a pure function of (config, seed); no timestamps or
// machine identifiers are written anywhere.
PipelineResult run_pipeline(const PipelineConfig& config,
                            const std::filesystem::path& out_dir);

}  // namespace fmcw
