#include "fmcw/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>

#include "fmcw/cluster.hpp"
#include "fmcw/detect.hpp"
#include "fmcw/io.hpp"
#include "fmcw/rng.hpp"
#include "fmcw/track.hpp"
#include "fmcw/version.hpp"
#include "json_codec.hpp"

namespace fmcw {

namespace {

std::string frame_tag(int frame_index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d", frame_index);
  return buf;
}

// Re-throw stage failures with the stage and frame named, so a pipeline
// abort always says where it happened.
template <typename F>
auto run_stage(const char* name, int frame, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const std::exception& e) {
    throw std::runtime_error("stage " + std::string(name) + " (frame " +
                             std::to_string(frame) + "): " + e.what());
  }
}

struct ClusterOutcome {
  Labeling labeling;
  double eps_used = 0.0;
  bool degenerate = false;
};

// Resolve eps (fixed or k-distance knee) and run DBSCAN. In auto mode the
// curve uses k = min_pts - 1 (the number of OTHER points a core point needs,
// since neighborhoods count the point itself). Fewer than min_pts points
// cannot form any core point, so such frames short-circuit to all-noise.
ClusterOutcome cluster_frame(const std::vector<RadarPoint>& points,
                             const ClusterOptions& options) {
  ClusterOutcome out;
  if (options.eps) {
    out.eps_used = *options.eps;
    out.labeling = dbscan(std::span<const RadarPoint>(points),
                          options.dbscan_params(*options.eps));
    return out;
  }

  if (points.size() < static_cast<std::size_t>(options.min_pts)) {
    out.labeling.labels.assign(points.size(), kNoiseLabel);
    out.labeling.core_flags.assign(points.size(), false);
    out.labeling.cluster_count = 0;
    out.degenerate = true;
    return out;
  }

  const int k = std::max(1, options.min_pts - 1);
  const std::vector<double> curve =
      k_distance(std::span<const RadarPoint>(points), k, options.axis_scales);
  const EpsSuggestion suggestion = suggest_eps(curve);
  out.eps_used = suggestion.eps;
  out.degenerate = suggestion.degenerate;
  if (!(out.eps_used > 0.0)) {
    // All k-distances zero (coincident points): any positive eps keeps the
    // coincident groups together.
    out.eps_used = 1e-9;
    out.degenerate = true;
  }
  out.labeling = dbscan(std::span<const RadarPoint>(points),
                        options.dbscan_params(out.eps_used));
  return out;
}

}  // namespace

std::uint64_t frame_seed(std::uint64_t base_seed, int frame_index) {
  return mix64(base_seed ^
               mix64(0x66726d65ull + static_cast<std::uint64_t>(frame_index)));
}

SceneConfig scene_at_frame(const PipelineConfig& config, int frame_index) {
  SceneConfig scene = config.scene;
  const double elapsed = config.frame_period_s() * static_cast<double>(frame_index);
  for (Target& target : scene.targets) {
    target.range_m =
        std::max(0.0, target.range_m + target.radial_velocity_mps * elapsed);
  }
  scene.rng_seed = frame_seed(config.scene.rng_seed, frame_index);
  return scene;
}

PipelineResult run_pipeline(const PipelineConfig& config,
                            const std::filesystem::path& out_dir) {
  config.validate();
  std::filesystem::create_directories(out_dir);

  PipelineResult result;
  result.param_hash = param_hash_hex(config);

  Tracker tracker(config.track);
  std::vector<TrackRecord> track_rows;
  codec::json frames_meta = codec::json::array();

  for (int frame = 0; frame < config.num_frames; ++frame) {
    const std::string tag = frame_tag(frame);
    const SceneConfig scene = scene_at_frame(config, frame);
    const RawFrameCube cube = run_stage("simulate", frame, [&] {
      return simulate_frame(scene, config.chirp);
    });
    const ProcessedFrame processed = run_stage("process", frame, [&] {
      return process_frame(cube, config.dsp);
    });

    const std::vector<Detection> detections = run_stage("detect", frame, [&] {
      return detect_peaks(processed.cube, config.detect);
    });
    const std::vector<RadarPoint> points =
        to_point_cloud(detections, processed.cube.geometry);

    const ClusterOutcome clusters = run_stage("cluster", frame, [&] {
      return cluster_frame(points, config.cluster);
    });

    // Track on cluster centroids (x, y), ordered by cluster id so that the
    // detection index seen by the tracker equals the cluster id.
    std::vector<Eigen::Vector2d> centroids(
        static_cast<std::size_t>(clusters.labeling.cluster_count),
        Eigen::Vector2d::Zero());
    std::vector<int> members(clusters.labeling.cluster_count, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
      const int label = clusters.labeling.labels[i];
      if (label == kNoiseLabel) continue;
      centroids[label] += Eigen::Vector2d(points[i].x_m, points[i].y_m);
      members[label] += 1;
    }
    for (int c = 0; c < clusters.labeling.cluster_count; ++c) {
      centroids[c] /= static_cast<double>(members[c]);
    }

    const std::vector<std::pair<int, std::size_t>> assignments =
        run_stage("track", frame, [&] { return tracker.step(centroids); });
    std::map<int, int> cluster_to_track;  // cluster id -> track id
    for (const auto& [track_id, det_index] : assignments) {
      cluster_to_track[static_cast<int>(det_index)] = track_id;
    }

    // Per-frame artifacts.
    const std::filesystem::path rdmap_csv = out_dir / ("rdmap_" + tag + ".csv");
    write_rdmap_csv(rdmap_csv, processed.rd_map);
    if (config.write_rdmap_binary) {
      write_rdmap_binary(out_dir / ("rdmap_" + tag + ".f32"),
                         out_dir / ("rdmap_" + tag + ".json"), processed.rd_map);
    }
    write_heatmap_pgm(out_dir / ("heatmap_" + tag + ".pgm"),
                      normalize_heatmap(processed.rd_map));

    std::vector<PointRecord> records(points.size());
    std::size_t noise_points = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      records[i].frame = frame;
      records[i].point = points[i];
      records[i].cluster = clusters.labeling.labels[i];
      if (records[i].cluster == kNoiseLabel) {
        ++noise_points;
      } else if (const auto it = cluster_to_track.find(records[i].cluster);
                 it != cluster_to_track.end()) {
        records[i].track_id = it->second;
      }
    }
    write_point_cloud_csv(out_dir / ("points_" + tag + ".csv"), records);

    for (const Track& track : tracker.tracks()) {
      TrackRecord row;
      row.frame = frame;
      row.track_id = track.id;
      row.status = track.status;
      row.x_m = track.state(0);
      row.y_m = track.state(1);
      row.vx_mps = track.state(2);
      row.vy_mps = track.state(3);
      row.hits = track.hits;
      row.misses = track.misses;
      track_rows.push_back(row);
    }

    FrameSummary summary;
    summary.frame = frame;
    summary.detections = detections.size();
    summary.points = points.size();
    summary.clusters = clusters.labeling.cluster_count;
    summary.noise_points = noise_points;
    summary.eps_used = clusters.eps_used;
    summary.eps_auto_degenerate = clusters.degenerate;
    summary.live_tracks = static_cast<int>(tracker.tracks().size());
    summary.confirmed_tracks = tracker.confirmed_count();
    result.frames.push_back(summary);

    codec::json fm;
    fm["index"] = frame;
    fm["detections"] = summary.detections;
    fm["points"] = summary.points;
    fm["clusters"] = summary.clusters;
    fm["noise_points"] = summary.noise_points;
    fm["eps_used"] = summary.eps_used;
    fm["eps_auto_degenerate"] = summary.eps_auto_degenerate;
    fm["live_tracks"] = summary.live_tracks;
    fm["confirmed_tracks"] = summary.confirmed_tracks;
    codec::json files;
    files["rdmap_csv"] = "rdmap_" + tag + ".csv";
    if (config.write_rdmap_binary) {
      files["rdmap_binary"] = "rdmap_" + tag + ".f32";
      files["rdmap_binary_meta"] = "rdmap_" + tag + ".json";
    }
    files["heatmap_pgm"] = "heatmap_" + tag + ".pgm";
    files["points_csv"] = "points_" + tag + ".csv";
    fm["files"] = std::move(files);
    frames_meta.push_back(std::move(fm));
  }

  write_tracks_csv(out_dir / "tracks.csv", track_rows);
  result.final_confirmed_tracks = tracker.confirmed_count();

  codec::json manifest;
  manifest["format"] = "fmcw-manifest";
  manifest["version"] = 1;
  manifest["tool_version"] = kVersionString;
  manifest["param_hash"] = result.param_hash;
  manifest["seed"] = config.scene.rng_seed;
  manifest["num_frames"] = config.num_frames;
  manifest["config"] = codec::pipeline_to_json(config);
  manifest["frames"] = std::move(frames_meta);
  manifest["tracks_csv"] = "tracks.csv";
  manifest["final_confirmed_tracks"] = result.final_confirmed_tracks;

  result.manifest_path = out_dir / "manifest.json";
  {
    std::ofstream out(result.manifest_path, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot open for writing: " +
                               result.manifest_path.string());
    }
    const std::string text = manifest.dump(2) + "\n";
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
  }
  return result;
}

}  // namespace fmcw
