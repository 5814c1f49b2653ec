#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

namespace fmcw {

// Constant-velocity Kalman filter over state [x, y, vx, vy] with position
// measurements [x, y].
struct KalmanConfig {
  // Time between tracker steps (one frame).
  double dt_s = 1.0;
  // Q = process_noise_scale * I4.
  double process_noise_scale = 1.0;
  // Measurement covariance R (2x2, symmetric positive definite).
  Eigen::Matrix2d measurement_noise = 5.0 * Eigen::Matrix2d::Identity();
  // P0 = initial_covariance_scale * I4 for freshly spawned tracks.
  double initial_covariance_scale = 1000.0;
  // Use the Joseph-form covariance update (better conditioned, same result
  // in exact arithmetic).
  bool joseph_form = false;

  Eigen::Matrix4d transition() const;                 // F
  static Eigen::Matrix<double, 2, 4> measurement();   // H
  Eigen::Matrix4d process_noise() const;              // Q

  void validate() const;
};

enum class TrackStatus { kTentative, kConfirmed, kDeleted };

struct Track {
  int id = 0;
  Eigen::Vector4d state = Eigen::Vector4d::Zero();        // [x, y, vx, vy]
  Eigen::Matrix4d covariance = Eigen::Matrix4d::Identity();
  int hits = 0;    // total associated detections
  int misses = 0;  // consecutive frames without a detection
  TrackStatus status = TrackStatus::kTentative;
};

// x' = F x (no control input), P' = F P F^T + Q. The returned covariance is
// re-symmetrized to damp floating-point drift.
Track kf_predict(const Track& track, const KalmanConfig& config);

// Standard measurement update with z = [x, y]. Covariance update is
// (I - K H) P, or the Joseph form when configured.
Track kf_update(const Track& track, const Eigen::Vector2d& z, const KalmanConfig& config);

// Result of matching predicted tracks against detections.
struct Assignment {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (track idx, det idx)
  std::vector<std::size_t> unassigned_tracks;
  std::vector<std::size_t> unassigned_detections;
};

// Greedy nearest neighbor: repeatedly commit the globally smallest remaining
// (track, detection) distance that passes the gate; ties break on the lower
// track index, then the lower detection index.
Assignment associate_nn(const std::vector<Eigen::Vector2d>& predicted_positions,
                        const std::vector<Eigen::Vector2d>& detections, double gate);

// Optimal assignment: maximum number of gated pairs, minimum total distance
// among those. Backed by solve_assignment below.
Assignment associate_optimal(const std::vector<Eigen::Vector2d>& predicted_positions,
                             const std::vector<Eigen::Vector2d>& detections, double gate);

// Rectangular assignment solver (Jonker-Volgenant shortest augmenting path).
// Returns row_to_col (-1 = unassigned). Entries with cost > forbid_above are
// excluded; among assignments of maximum cardinality the total cost is
// minimal. Complexity O(n^3).
std::vector<int> solve_assignment(const std::vector<std::vector<double>>& cost,
                                  double forbid_above);

enum class AssociationStrategy { kNearestNeighbor, kOptimal };

struct TrackerConfig {
  KalmanConfig kalman;
  // A tentative track is confirmed once hits >= confirm_threshold.
  int confirm_threshold = 3;
  // Any track is deleted once consecutive misses >= delete_threshold.
  int delete_threshold = 3;
  // Association gate (max position distance). When unset, each track uses
  // 3 * sqrt(max eigenvalue of (H P' H^T + R)) from its own prediction.
  std::optional<double> gate;
  AssociationStrategy association = AssociationStrategy::kOptimal;

  void validate() const;
};

// One tracker step over an existing track list (pure function):
//   1. predict every live track,
//   2. associate predictions with detections,
//   3. update matched tracks (hit) / count misses on unmatched ones,
//   4. apply confirm/delete thresholds,
//   5. spawn a tentative track per unmatched detection at (x, y, 0, 0).
// Deleted tracks stay in the returned list with status kDeleted so callers
// can observe the transition; they are skipped by later steps.
struct TrackerStep {
  std::vector<Track> tracks;
  // (track id, detection index) for every association made this step,
  // including the implicit self-association of freshly spawned tracks.
  std::vector<std::pair<int, std::size_t>> assignments;
  int next_track_id = 0;
};
TrackerStep step_tracker(const std::vector<Track>& tracks,
                         const std::vector<Eigen::Vector2d>& detections,
                         const TrackerConfig& config, int next_track_id);

// Stateful convenience wrapper around step_tracker. Track ids are never
// reused; deleted tracks are dropped from the live list after each step.
class Tracker {
 public:
  explicit Tracker(TrackerConfig config);

  // Runs one step and returns the (track id, detection index) assignments.
  std::vector<std::pair<int, std::size_t>> step(
      const std::vector<Eigen::Vector2d>& detections);

  const std::vector<Track>& tracks() const { return tracks_; }
  int confirmed_count() const;

 private:
  TrackerConfig config_;
  std::vector<Track> tracks_;
  int next_id_ = 0;
};

}  // namespace fmcw
