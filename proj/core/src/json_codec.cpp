#include "json_codec.hpp"

#include <stdexcept>

namespace fmcw::codec {

std::string window_to_string(WindowKind kind) {
  switch (kind) {
    case WindowKind::kRectangular: return "rectangular";
    case WindowKind::kHann: return "hann";
  }
  throw std::logic_error("unreachable window kind");
}

WindowKind window_from_string(const std::string& s) {
  if (s == "rectangular") return WindowKind::kRectangular;
  if (s == "hann") return WindowKind::kHann;
  throw std::invalid_argument("unknown window '" + s + "' (rectangular|hann)");
}

std::string representation_to_string(ChirpRepresentation r) {
  switch (r) {
    case ChirpRepresentation::kComplexBaseband: return "complex_baseband";
    case ChirpRepresentation::kReal: return "real";
    case ChirpRepresentation::kBasebandReal: return "baseband_real";
  }
  throw std::logic_error("unreachable chirp representation");
}

ChirpRepresentation representation_from_string(const std::string& s) {
  if (s == "complex_baseband") return ChirpRepresentation::kComplexBaseband;
  if (s == "real") return ChirpRepresentation::kReal;
  if (s == "baseband_real") return ChirpRepresentation::kBasebandReal;
  throw std::invalid_argument(
      "unknown representation '" + s + "' (complex_baseband|real|baseband_real)");
}

std::string association_to_string(AssociationStrategy s) {
  switch (s) {
    case AssociationStrategy::kNearestNeighbor: return "nearest_neighbor";
    case AssociationStrategy::kOptimal: return "optimal";
  }
  throw std::logic_error("unreachable association strategy");
}

AssociationStrategy association_from_string(const std::string& s) {
  if (s == "nearest_neighbor") return AssociationStrategy::kNearestNeighbor;
  if (s == "optimal") return AssociationStrategy::kOptimal;
  throw std::invalid_argument("unknown association '" + s +
                              "' (nearest_neighbor|optimal)");
}

std::string status_to_string(TrackStatus s) {
  switch (s) {
    case TrackStatus::kTentative: return "tentative";
    case TrackStatus::kConfirmed: return "confirmed";
    case TrackStatus::kDeleted: return "deleted";
  }
  throw std::logic_error("unreachable track status");
}

TrackStatus status_from_string(const std::string& s) {
  if (s == "tentative") return TrackStatus::kTentative;
  if (s == "confirmed") return TrackStatus::kConfirmed;
  if (s == "deleted") return TrackStatus::kDeleted;
  throw std::invalid_argument("unknown track status '" + s + "'");
}

json chirp_to_json(const ChirpParams& p) {
  return json{{"f_start_hz", p.f_start_hz},
              {"bandwidth_hz", p.bandwidth_hz},
              {"duration_s", p.duration_s},
              {"sample_rate_hz", p.sample_rate_hz},
              {"num_chirps", p.num_chirps}};
}

json target_to_json(const Target& t) {
  return json{{"range_m", t.range_m},
              {"radial_velocity_mps", t.radial_velocity_mps},
              {"azimuth_deg", t.azimuth_deg},
              {"amplitude", t.amplitude}};
}

json scene_to_json(const SceneConfig& s) {
  json targets = json::array();
  for (const Target& t : s.targets) targets.push_back(target_to_json(t));
  return json{{"targets", std::move(targets)},
              {"carrier_frequency_hz", s.carrier_frequency_hz},
              {"rx_count", s.rx_count},
              {"rx_spacing_wavelengths", s.rx_spacing_wavelengths},
              {"noise_std", s.noise_std},
              {"rng_seed", s.rng_seed},
              {"c_mps", s.c_mps}};
}

json geometry_to_json(const CubeGeometry& g) {
  return json{{"range_fft_size", g.range_fft_size},
              {"doppler_fft_size", g.doppler_fft_size},
              {"angle_fft_size", g.angle_fft_size},
              {"sample_rate_hz", g.sample_rate_hz},
              {"slope_hz_per_s", g.slope_hz_per_s},
              {"chirp_duration_s", g.chirp_duration_s},
              {"bandwidth_hz", g.bandwidth_hz},
              {"carrier_frequency_hz", g.carrier_frequency_hz},
              {"rx_count", g.rx_count},
              {"rx_spacing_wavelengths", g.rx_spacing_wavelengths},
              {"c_mps", g.c_mps}};
}

json dsp_to_json(const DspOptions& d) {
  return json{{"range_fft_size", d.range_fft_size},
              {"doppler_fft_size", d.doppler_fft_size},
              {"angle_fft_size", d.angle_fft_size},
              {"window", window_to_string(d.window)}};
}

json detect_to_json(const DetectPolicy& d) {
  return json{{"threshold_factor", d.threshold_factor}, {"max_peaks", d.max_peaks}};
}

json cluster_to_json(const ClusterOptions& c) {
  json j{{"min_pts", c.min_pts}, {"use_grid_index", c.use_grid_index}};
  j["eps"] = c.eps ? json(*c.eps) : json(nullptr);
  if (c.axis_scales) {
    j["axis_scales"] = json::array({(*c.axis_scales)[0], (*c.axis_scales)[1],
                                    (*c.axis_scales)[2]});
  } else {
    j["axis_scales"] = nullptr;
  }
  return j;
}

json track_to_json(const TrackerConfig& t) {
  json j{{"dt_s", t.kalman.dt_s},
         {"process_noise_scale", t.kalman.process_noise_scale},
         {"initial_covariance_scale", t.kalman.initial_covariance_scale},
         {"joseph_form", t.kalman.joseph_form},
         {"confirm_threshold", t.confirm_threshold},
         {"delete_threshold", t.delete_threshold},
         {"association", association_to_string(t.association)}};
  const Eigen::Matrix2d& r = t.kalman.measurement_noise;
  j["measurement_noise"] =
      json::array({json::array({r(0, 0), r(0, 1)}), json::array({r(1, 0), r(1, 1)})});
  j["gate"] = t.gate ? json(*t.gate) : json(nullptr);
  return j;
}

json pipeline_to_json(const PipelineConfig& c) {
  return json{{"chirp", chirp_to_json(c.chirp)},
              {"scene", scene_to_json(c.scene)},
              {"dsp", dsp_to_json(c.dsp)},
              {"detect", detect_to_json(c.detect)},
              {"cluster", cluster_to_json(c.cluster)},
              {"track", track_to_json(c.track)},
              {"num_frames", c.num_frames},
              {"write_rdmap_binary", c.write_rdmap_binary}};
}

CubeGeometry geometry_from_json(const json& j) {
  CubeGeometry g;
  g.range_fft_size = j.at("range_fft_size").get<std::size_t>();
  g.doppler_fft_size = j.at("doppler_fft_size").get<std::size_t>();
  g.angle_fft_size = j.at("angle_fft_size").get<std::size_t>();
  g.sample_rate_hz = j.at("sample_rate_hz").get<double>();
  g.slope_hz_per_s = j.at("slope_hz_per_s").get<double>();
  g.chirp_duration_s = j.at("chirp_duration_s").get<double>();
  g.bandwidth_hz = j.at("bandwidth_hz").get<double>();
  g.carrier_frequency_hz = j.at("carrier_frequency_hz").get<double>();
  g.rx_count = j.at("rx_count").get<int>();
  g.rx_spacing_wavelengths = j.at("rx_spacing_wavelengths").get<double>();
  g.c_mps = j.at("c_mps").get<double>();
  return g;
}

ChirpParams chirp_from_json(const json& j) {
  ChirpParams p;
  p.f_start_hz = j.at("f_start_hz").get<double>();
  p.bandwidth_hz = j.at("bandwidth_hz").get<double>();
  p.duration_s = j.at("duration_s").get<double>();
  p.sample_rate_hz = j.at("sample_rate_hz").get<double>();
  p.num_chirps = j.at("num_chirps").get<int>();
  return p;
}

Target target_from_json(const json& j) {
  Target t;
  t.range_m = j.at("range_m").get<double>();
  t.radial_velocity_mps = j.at("radial_velocity_mps").get<double>();
  t.azimuth_deg = j.at("azimuth_deg").get<double>();
  t.amplitude = j.at("amplitude").get<double>();
  return t;
}

SceneConfig scene_from_json(const json& j) {
  SceneConfig s;
  s.targets.clear();
  for (const json& t : j.at("targets")) s.targets.push_back(target_from_json(t));
  s.carrier_frequency_hz = j.at("carrier_frequency_hz").get<double>();
  s.rx_count = j.at("rx_count").get<int>();
  s.rx_spacing_wavelengths = j.at("rx_spacing_wavelengths").get<double>();
  s.noise_std = j.at("noise_std").get<double>();
  s.rng_seed = j.at("rng_seed").get<std::uint64_t>();
  s.c_mps = j.at("c_mps").get<double>();
  return s;
}

}  // namespace fmcw::codec
