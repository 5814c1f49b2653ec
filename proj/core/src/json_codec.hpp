#pragma once

// Private JSON (de)serializers shared by io.cpp and config.cpp. Kept out of
// the public headers so the installed library interface does not depend on
// the vendored json single-header.

#include <string>

#include <json.hpp>

#include "fmcw/cluster.hpp"
#include "fmcw/config.hpp"
#include "fmcw/detect.hpp"
#include "fmcw/dsp.hpp"
#include "fmcw/scene.hpp"
#include "fmcw/track.hpp"
#include "fmcw/waveform.hpp"

namespace fmcw::codec {

using nlohmann::json;

std::string window_to_string(WindowKind kind);
WindowKind window_from_string(const std::string& s);

std::string representation_to_string(ChirpRepresentation r);
ChirpRepresentation representation_from_string(const std::string& s);

std::string association_to_string(AssociationStrategy s);
AssociationStrategy association_from_string(const std::string& s);

std::string status_to_string(TrackStatus s);
TrackStatus status_from_string(const std::string& s);

json chirp_to_json(const ChirpParams& p);
json target_to_json(const Target& t);
json scene_to_json(const SceneConfig& s);
json geometry_to_json(const CubeGeometry& g);
json dsp_to_json(const DspOptions& d);
json detect_to_json(const DetectPolicy& d);
json cluster_to_json(const ClusterOptions& c);
json track_to_json(const TrackerConfig& t);
json pipeline_to_json(const PipelineConfig& c);

// Sidecar readers: every key is required (we wrote the file).
CubeGeometry geometry_from_json(const json& j);
ChirpParams chirp_from_json(const json& j);
Target target_from_json(const json& j);
SceneConfig scene_from_json(const json& j);

}  // namespace fmcw::codec
