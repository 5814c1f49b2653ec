// fmcw: deterministic FMCW radar simulation and processing pipeline.
//
// Subcommands: simulate, process, detect, cluster, track, kdist, pipeline,
// version. Exit codes: 0 success, 2 configuration error, 3 runtime error.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fmcw/cluster.hpp"
#include "fmcw/config.hpp"
#include "fmcw/detect.hpp"
#include "fmcw/io.hpp"
#include "fmcw/pipeline.hpp"
#include "fmcw/track.hpp"
#include "fmcw/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct SeedSources {
  std::optional<std::uint64_t> cli_seed;
  bool config_has_seed = false;
};

// Whether the config document itself sets scene.rng_seed (a successful parse
// is assumed; errors here mean "no").
bool config_mentions_seed(const std::string& config_text) {
  try {
    const nlohmann::json j = nlohmann::json::parse(config_text);
    return j.is_object() && j.contains("scene") && j["scene"].is_object() &&
           j["scene"].contains("rng_seed") && !j["scene"]["rng_seed"].is_null();
  } catch (...) {
    return false;
  }
}

// Seed precedence: --seed > config scene.rng_seed > FMCW_SEED env > 0.
std::uint64_t resolve_seed(const SeedSources& sources, std::uint64_t config_seed) {
  if (sources.cli_seed) return *sources.cli_seed;
  if (sources.config_has_seed) return config_seed;
  if (const char* env = std::getenv("FMCW_SEED")) {
    try {
      return std::stoull(env);
    } catch (...) {
      throw fmcw::ConfigError(std::string("FMCW_SEED is not an unsigned integer: '") +
                              env + "'");
    }
  }
  return 0;
}

std::string slurp_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw fmcw::ConfigError("cannot open config file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const std::string& w : warnings) std::cerr << "fmcw: warning: " << w << "\n";
}

fmcw::PipelineConfig load_pipeline_config(const std::string& config_path, bool lenient,
                                          const std::optional<std::uint64_t>& cli_seed) {
  const std::string text = slurp_file(config_path);
  std::vector<std::string> warnings;
  fmcw::PipelineConfig cfg = fmcw::parse_config(text, lenient, &warnings);
  print_warnings(warnings);

  SeedSources sources;
  sources.cli_seed = cli_seed;
  sources.config_has_seed = config_mentions_seed(text);
  cfg.scene.rng_seed = resolve_seed(sources, cfg.scene.rng_seed);
  return cfg;
}

std::filesystem::path sidecar_for(const std::filesystem::path& data_path) {
  std::filesystem::path p = data_path;
  p.replace_extension(".json");
  return p;
}

// ---- subcommand bodies -------------------------------------------------------

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 bool lenient, const std::optional<std::uint64_t>& seed) {
  const fmcw::PipelineConfig cfg = load_pipeline_config(config_path, lenient, seed);
  std::filesystem::create_directories(out_dir);
  for (int frame = 0; frame < cfg.num_frames; ++frame) {
    const fmcw::SceneConfig scene = fmcw::scene_at_frame(cfg, frame);
    const fmcw::RawFrameCube cube = fmcw::simulate_frame(scene, cfg.chirp);
    char tag[16];
    std::snprintf(tag, sizeof(tag), "%04d", frame);
    const std::filesystem::path base = std::filesystem::path(out_dir) /
                                       (std::string("cube_") + tag);
    fmcw::write_cube(base.string() + ".f32", base.string() + ".json", cube);
    std::cout << "wrote " << base.string() << ".f32 (" << cube.samples.dim0() << " rx x "
              << cube.samples.dim1() << " chirps x " << cube.samples.dim2()
              << " samples)\n";
  }
  return kExitOk;
}

int cmd_process(const std::string& cube_path, const std::string& out_dir,
                std::size_t range_fft, std::size_t doppler_fft, std::size_t angle_fft,
                const std::string& window) {
  fmcw::DspOptions options;
  options.range_fft_size = range_fft;
  options.doppler_fft_size = doppler_fft;
  options.angle_fft_size = angle_fft;
  if (window == "hann") {
    options.window = fmcw::WindowKind::kHann;
  } else if (window != "rectangular") {
    throw fmcw::ConfigError("--window must be rectangular or hann, got '" + window +
                            "'");
  }

  const fmcw::RawFrameCube cube =
      fmcw::read_cube(cube_path, sidecar_for(cube_path));
  const fmcw::ProcessedFrame processed = fmcw::process_frame(cube, options);

  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  fmcw::write_rdmap_csv(dir / "rdmap.csv", processed.rd_map);
  fmcw::write_heatmap_pgm(dir / "heatmap.pgm", fmcw::normalize_heatmap(processed.rd_map));
  std::cout << "wrote " << (dir / "rdmap.csv").string() << " ("
            << processed.rd_map.magnitudes.rows() << " range bins x "
            << processed.rd_map.magnitudes.cols() << " doppler bins)\n";
  std::cout << "wrote " << (dir / "heatmap.pgm").string() << "\n";
  return kExitOk;
}

int cmd_detect(const std::string& rdmap_path, const std::string& out_path,
               double threshold_factor, std::size_t max_peaks) {
  fmcw::DetectPolicy policy;
  policy.threshold_factor = threshold_factor;
  policy.max_peaks = max_peaks;

  const fmcw::RangeDopplerMap map = fmcw::read_rdmap_csv(rdmap_path);
  const std::vector<fmcw::Detection> detections = fmcw::detect_peaks(map, policy);
  const std::vector<fmcw::RadarPoint> points =
      fmcw::to_point_cloud(detections, map.geometry);

  std::vector<fmcw::PointRecord> records(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    records[i].frame = 0;
    records[i].point = points[i];
  }
  fmcw::write_point_cloud_csv(out_path, records);
  std::cout << "wrote " << out_path << " (" << records.size() << " points)\n";
  return kExitOk;
}

int cmd_cluster(const std::string& points_path, const std::string& out_path,
                std::optional<double> eps, int min_pts) {
  std::vector<fmcw::PointRecord> records = fmcw::read_point_cloud_csv(points_path);
  std::vector<fmcw::RadarPoint> points(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) points[i] = records[i].point;

  fmcw::ClusterOptions options;
  options.eps = eps;
  options.min_pts = min_pts;

  double eps_used = 0.0;
  fmcw::Labeling labeling;
  if (options.eps) {
    eps_used = *options.eps;
    labeling = fmcw::dbscan(std::span<const fmcw::RadarPoint>(points),
                            options.dbscan_params(eps_used));
  } else {
    if (points.size() < static_cast<std::size_t>(min_pts)) {
      labeling.labels.assign(points.size(), fmcw::kNoiseLabel);
      labeling.cluster_count = 0;
    } else {
      const int k = std::max(1, min_pts - 1);
      const std::vector<double> curve =
          fmcw::k_distance(std::span<const fmcw::RadarPoint>(points), k);
      const fmcw::EpsSuggestion s = fmcw::suggest_eps(curve);
      eps_used = s.eps > 0.0 ? s.eps : 1e-9;
      labeling = fmcw::dbscan(std::span<const fmcw::RadarPoint>(points),
                              options.dbscan_params(eps_used));
    }
  }

  for (std::size_t i = 0; i < records.size(); ++i) {
    records[i].cluster = labeling.labels[i];
    records[i].track_id.reset();
  }
  fmcw::write_point_cloud_csv(out_path, records);
  std::cout << "wrote " << out_path << " (" << labeling.cluster_count
            << " clusters, eps " << fmcw::format_double(eps_used) << ")\n";
  return kExitOk;
}

int cmd_track(const std::string& points_path, const std::string& out_dir, double dt,
              double gate, bool nearest_neighbor) {
  std::vector<fmcw::PointRecord> records = fmcw::read_point_cloud_csv(points_path);

  fmcw::TrackerConfig config;
  config.kalman.dt_s = dt;
  if (gate > 0.0) config.gate = gate;
  config.association = nearest_neighbor ? fmcw::AssociationStrategy::kNearestNeighbor
                                        : fmcw::AssociationStrategy::kOptimal;

  // Group rows by frame (rows arrive frame-sorted from our writers, but cope
  // with gaps); clusters become centroid detections.
  std::vector<int> frames;
  for (const fmcw::PointRecord& rec : records) {
    if (frames.empty() || frames.back() != rec.frame) frames.push_back(rec.frame);
  }

  fmcw::Tracker tracker(config);
  std::vector<fmcw::TrackRecord> track_rows;
  for (const int frame : frames) {
    std::map<int, std::pair<Eigen::Vector2d, int>> sums;
    for (const fmcw::PointRecord& rec : records) {
      if (rec.frame != frame || rec.cluster == fmcw::kNoiseLabel) continue;
      auto& [sum, count] = sums[rec.cluster];
      sum += Eigen::Vector2d(rec.point.x_m, rec.point.y_m);
      count += 1;
    }
    std::vector<Eigen::Vector2d> centroids;
    std::vector<int> cluster_ids;
    for (const auto& [cluster_id, entry] : sums) {
      centroids.push_back(entry.first / static_cast<double>(entry.second));
      cluster_ids.push_back(cluster_id);
    }

    const auto assignments = tracker.step(centroids);
    std::map<int, int> cluster_to_track;
    for (const auto& [track_id, det_index] : assignments) {
      cluster_to_track[cluster_ids[det_index]] = track_id;
    }
    for (fmcw::PointRecord& rec : records) {
      if (rec.frame != frame) continue;
      const auto it = cluster_to_track.find(rec.cluster);
      if (rec.cluster != fmcw::kNoiseLabel && it != cluster_to_track.end()) {
        rec.track_id = it->second;
      }
    }
    for (const fmcw::Track& track : tracker.tracks()) {
      track_rows.push_back({frame, track.id, track.status, track.state(0),
                            track.state(1), track.state(2), track.state(3),
                            track.hits, track.misses});
    }
  }

  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  fmcw::write_tracks_csv(dir / "tracks.csv", track_rows);
  fmcw::write_point_cloud_csv(dir / "points_tracked.csv", records);
  std::cout << "wrote " << (dir / "tracks.csv").string() << " and "
            << (dir / "points_tracked.csv").string() << "\n";
  return kExitOk;
}

int cmd_kdist(const std::string& points_path, int k) {
  const std::vector<fmcw::PointRecord> records =
      fmcw::read_point_cloud_csv(points_path);
  std::vector<fmcw::RadarPoint> points(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) points[i] = records[i].point;

  const std::vector<double> curve =
      fmcw::k_distance(std::span<const fmcw::RadarPoint>(points), k);
  for (const double d : curve) std::cout << fmcw::format_double(d) << "\n";
  const fmcw::EpsSuggestion s = fmcw::suggest_eps(curve);
  std::cout << "suggested_eps " << fmcw::format_double(s.eps);
  if (s.degenerate) std::cout << " degenerate";
  std::cout << "\n";
  return kExitOk;
}

int cmd_pipeline(const std::string& config_path, const std::string& out_dir,
                 bool lenient, const std::optional<std::uint64_t>& seed) {
  const fmcw::PipelineConfig cfg = load_pipeline_config(config_path, lenient, seed);
  const fmcw::PipelineResult result = fmcw::run_pipeline(cfg, out_dir);
  for (const fmcw::FrameSummary& f : result.frames) {
    std::cout << "frame " << f.frame << ": " << f.points << " points, " << f.clusters
              << " clusters, " << f.confirmed_tracks << " confirmed tracks\n";
  }
  std::cout << "param_hash " << result.param_hash << "\n";
  std::cout << "wrote " << result.manifest_path.string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic FMCW radar simulation and processing toolkit"};
  app.require_subcommand(1);

  // simulate
  std::string sim_config, sim_out;
  bool sim_lenient = false;
  std::optional<std::uint64_t> sim_seed;
  CLI::App* simulate = app.add_subcommand("simulate", "Synthesize raw frame cubes");
  simulate->add_option("-c,--config", sim_config, "Pipeline config JSON")->required();
  simulate->add_option("-o,--output", sim_out, "Output directory")->required();
  simulate->add_flag("--lenient", sim_lenient, "Warn on unknown config keys");
  simulate->add_option("--seed", sim_seed, "Override the RNG seed");

  // process
  std::string proc_cube, proc_out, proc_window = "rectangular";
  std::size_t proc_range_fft = 0, proc_doppler_fft = 0, proc_angle_fft = 0;
  CLI::App* process = app.add_subcommand("process", "Range/Doppler/angle FFT a cube");
  process->add_option("-i,--input", proc_cube, "Cube .f32 file (sidecar .json)")
      ->required();
  process->add_option("-o,--output", proc_out, "Output directory")->required();
  process->add_option("--range-fft", proc_range_fft, "Range FFT size (0 = auto)");
  process->add_option("--doppler-fft", proc_doppler_fft, "Doppler FFT size (0 = auto)");
  process->add_option("--angle-fft", proc_angle_fft, "Angle FFT size (0 = auto)");
  process->add_option("--window", proc_window, "Window: rectangular|hann");

  // detect
  std::string det_in, det_out;
  double det_factor = 8.0;
  std::size_t det_max_peaks = 64;
  CLI::App* detect = app.add_subcommand("detect", "Extract peaks from an RD map CSV");
  detect->add_option("-i,--input", det_in, "RD map CSV")->required();
  detect->add_option("-o,--output", det_out, "Point-cloud CSV to write")->required();
  detect->add_option("--threshold-factor", det_factor,
                     "Sigmas above the median noise floor");
  detect->add_option("--max-peaks", det_max_peaks, "Keep at most N peaks");

  // cluster
  std::string clu_in, clu_out;
  double clu_eps = 0.0;
  int clu_min_pts = fmcw::default_min_pts(3);
  CLI::App* cluster = app.add_subcommand("cluster", "DBSCAN a point-cloud CSV");
  cluster->add_option("-i,--input", clu_in, "Point-cloud CSV")->required();
  cluster->add_option("-o,--output", clu_out, "Clustered CSV to write")->required();
  cluster->add_option("--eps", clu_eps, "Neighborhood radius (0 = auto knee)");
  cluster->add_option("--min-pts", clu_min_pts, "Minimum neighborhood size");

  // track
  std::string trk_in, trk_out;
  double trk_dt = 1.0, trk_gate = 0.0;
  bool trk_nn = false;
  CLI::App* track = app.add_subcommand("track", "Track clustered points across frames");
  track->add_option("-i,--input", trk_in, "Clustered point-cloud CSV")->required();
  track->add_option("-o,--output", trk_out, "Output directory")->required();
  track->add_option("--dt", trk_dt, "Seconds between frames");
  track->add_option("--gate", trk_gate, "Association gate in meters (0 = auto)");
  track->add_flag("--nearest-neighbor", trk_nn,
                  "Greedy nearest-neighbor association (default: optimal)");

  // kdist
  std::string kd_in;
  int kd_k = 0;
  CLI::App* kdist = app.add_subcommand("kdist", "Sorted k-distances and suggested eps");
  kdist->add_option("-i,--input", kd_in, "Point-cloud CSV")->required();
  kdist->add_option("-k", kd_k, "Neighbor rank")->required();

  // pipeline
  std::string pipe_config, pipe_out;
  bool pipe_lenient = false;
  std::optional<std::uint64_t> pipe_seed;
  CLI::App* pipeline = app.add_subcommand("pipeline", "Full simulate->track run");
  pipeline->add_option("-c,--config", pipe_config, "Pipeline config JSON")->required();
  pipeline->add_option("-o,--output", pipe_out, "Output directory")->required();
  pipeline->add_option("--seed", pipe_seed, "Override the RNG seed");
  pipeline->add_flag("--lenient", pipe_lenient, "Warn on unknown config keys");

  // version
  CLI::App* version = app.add_subcommand("version", "Print the tool version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim_config, sim_out, sim_lenient, sim_seed);
    if (process->parsed()) {
      return cmd_process(proc_cube, proc_out, proc_range_fft, proc_doppler_fft,
                         proc_angle_fft, proc_window);
    }
    if (detect->parsed()) return cmd_detect(det_in, det_out, det_factor, det_max_peaks);
    if (cluster->parsed()) {
      return cmd_cluster(clu_in, clu_out,
                         clu_eps > 0.0 ? std::optional<double>(clu_eps) : std::nullopt,
                         clu_min_pts);
    }
    if (track->parsed()) return cmd_track(trk_in, trk_out, trk_dt, trk_gate, trk_nn);
    if (kdist->parsed()) return cmd_kdist(kd_in, kd_k);
    if (pipeline->parsed()) return cmd_pipeline(pipe_config, pipe_out, pipe_lenient, pipe_seed);
    if (version->parsed()) {
      std::cout << "fmcw " << fmcw::kVersionString << "\n";
      return kExitOk;
    }
  } catch (const fmcw::ConfigError& e) {
    std::cerr << "fmcw: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "fmcw: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "fmcw: error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
