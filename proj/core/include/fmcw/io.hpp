#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fmcw/cluster.hpp"
#include "fmcw/detect.hpp"
#include "fmcw/dsp.hpp"
#include "fmcw/scene.hpp"
#include "fmcw/track.hpp"

namespace fmcw {

// Locale-independent decimal formatting used by every text writer: shortest
// representation that round-trips, capped at 9 significant digits. Values
// needing more digits are first rounded to 9 and then re-shortened, so
// formatting the parsed value reproduces the exact same string (text files
// survive write -> read -> write byte-identically).
std::string format_double(double value);

// Strict counterpart (full-string match); throws std::invalid_argument.
double parse_double(const std::string& token);

// ---- point clouds ---------------------------------------------------------

struct PointRecord {
  int frame = 0;
  RadarPoint point;
  int cluster = kNoiseLabel;
  std::optional<int> track_id;  // empty CSV field when unset
};

// Header: frame,x_m,y_m,v_mps,magnitude,cluster,track_id
void write_point_cloud_csv(const std::filesystem::path& path,
                           std::span<const PointRecord> records);
std::vector<PointRecord> read_point_cloud_csv(const std::filesystem::path& path);

// ---- track logs ------------------------------------------------------------

struct TrackRecord {
  int frame = 0;
  int track_id = 0;
  TrackStatus status = TrackStatus::kTentative;
  double x_m = 0.0;
  double y_m = 0.0;
  double vx_mps = 0.0;
  double vy_mps = 0.0;
  int hits = 0;
  int misses = 0;
};

// Header: frame,track_id,status,x_m,y_m,vx_mps,vy_mps,hits,misses
void write_tracks_csv(const std::filesystem::path& path,
                      std::span<const TrackRecord> records);
std::vector<TrackRecord> read_tracks_csv(const std::filesystem::path& path);

// ---- range-Doppler maps ----------------------------------------------------

// CSV layout: a leading block of "# key value" metadata comments carrying the
// full CubeGeometry, then one row of magnitudes per range bin (columns are
// center-shifted Doppler bins).
void write_rdmap_csv(const std::filesystem::path& path, const RangeDopplerMap& map);
RangeDopplerMap read_rdmap_csv(const std::filesystem::path& path);

// Binary layout: little-endian float32, row-major [range][doppler], with a
// JSON sidecar describing dimensions and geometry. float32 storage is lossy
// relative to the CSV; the pair of files still round-trips byte-identically.
void write_rdmap_binary(const std::filesystem::path& data_path,
                        const std::filesystem::path& meta_path,
                        const RangeDopplerMap& map);
RangeDopplerMap read_rdmap_binary(const std::filesystem::path& data_path,
                                  const std::filesystem::path& meta_path);

// ---- heatmaps --------------------------------------------------------------

// 8-bit ASCII PGM (P2), gray = floor(value * 255 + 0.5); values are expected
// in [0, 1] (validated).
void write_heatmap_pgm(const std::filesystem::path& path, const Heatmap& heatmap);
// Returns gray levels mapped back to [0, 1] (gray / 255).
Heatmap read_heatmap_pgm(const std::filesystem::path& path);

// ---- raw cubes -------------------------------------------------------------

// Binary layout: little-endian float32 interleaved (re, im), row-major
// [rx][chirp][sample], plus a JSON sidecar with dimensions, chirp parameters,
// domain, and the scene snapshot needed to process the cube later.
void write_cube(const std::filesystem::path& data_path,
                const std::filesystem::path& meta_path, const RawFrameCube& cube);
RawFrameCube read_cube(const std::filesystem::path& data_path,
                       const std::filesystem::path& meta_path);

}  // namespace fmcw
