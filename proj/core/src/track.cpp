#include "fmcw/track.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fmcw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Hungarian / Jonker-Volgenant shortest augmenting path over a square cost
// matrix with forbidden cells marked +inf internally. Forbidden cells carry a
// finite big-M larger than the sum of all allowed costs, which makes the
// solver first maximize the number of allowed pairs and then minimize their
// total cost.
std::vector<int> solve_square(const std::vector<std::vector<double>>& cost_in,
                              std::vector<std::vector<char>> const& allowed,
                              std::size_t rows, std::size_t cols) {
  const std::size_t n = std::max(rows, cols);

  double allowed_sum = 1.0;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (allowed[r][c]) allowed_sum += cost_in[r][c];
    }
  }
  const double big = allowed_sum;

  // a[i][j], 1-indexed for the classic potential formulation.
  std::vector<std::vector<double>> a(n + 1, std::vector<double>(n + 1, big));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (allowed[r][c]) a[r + 1][c + 1] = cost_in[r][c];
    }
  }

  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0);  // match[j] = row assigned to column j
  std::vector<std::size_t> way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> min_reduced(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      std::size_t j1 = 0;
      double delta = kInf;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = a[i0][j] - u[i0] - v[j];
        if (cur < min_reduced[j]) {
          min_reduced[j] = cur;
          way[j] = j0;
        }
        if (min_reduced[j] < delta) {
          delta = min_reduced[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          min_reduced[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    // Augment along the alternating path.
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> row_to_col(rows, -1);
  for (std::size_t j = 1; j <= n; ++j) {
    const std::size_t i = match[j];
    if (i >= 1 && i <= rows && j <= cols && allowed[i - 1][j - 1]) {
      row_to_col[i - 1] = static_cast<int>(j - 1);
    }
  }
  return row_to_col;
}

std::vector<int> solve_masked(const std::vector<std::vector<double>>& cost,
                              const std::vector<std::vector<char>>& allowed) {
  const std::size_t rows = cost.size();
  if (rows == 0) return {};
  const std::size_t cols = cost[0].size();
  if (cols == 0) return std::vector<int>(rows, -1);
  return solve_square(cost, allowed, rows, cols);
}

Eigen::Matrix2d innovation_covariance(const Track& track, const KalmanConfig& config) {
  const Eigen::Matrix<double, 2, 4> h = KalmanConfig::measurement();
  return h * track.covariance * h.transpose() + config.measurement_noise;
}

double auto_gate(const Track& predicted, const KalmanConfig& config) {
  const Eigen::Matrix2d s = innovation_covariance(predicted, config);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(s);
  return 3.0 * std::sqrt(solver.eigenvalues().maxCoeff());
}

Eigen::Vector2d position_of(const Track& track) { return track.state.head<2>(); }

}  // namespace

Eigen::Matrix4d KalmanConfig::transition() const {
  Eigen::Matrix4d f = Eigen::Matrix4d::Identity();
  f(0, 2) = dt_s;
  f(1, 3) = dt_s;
  return f;
}

Eigen::Matrix<double, 2, 4> KalmanConfig::measurement() {
  Eigen::Matrix<double, 2, 4> h = Eigen::Matrix<double, 2, 4>::Zero();
  h(0, 0) = 1.0;
  h(1, 1) = 1.0;
  return h;
}

Eigen::Matrix4d KalmanConfig::process_noise() const {
  return process_noise_scale * Eigen::Matrix4d::Identity();
}

void KalmanConfig::validate() const {
  if (!std::isfinite(dt_s) || !(dt_s > 0.0)) {
    throw std::invalid_argument("track.dt_s must be positive");
  }
  if (process_noise_scale < 0.0 || !std::isfinite(process_noise_scale)) {
    throw std::invalid_argument("track.process_noise_scale must be >= 0");
  }
  if (!(initial_covariance_scale > 0.0) || !std::isfinite(initial_covariance_scale)) {
    throw std::invalid_argument("track.initial_covariance_scale must be positive");
  }
  const Eigen::Matrix2d& r = measurement_noise;
  const bool symmetric = std::abs(r(0, 1) - r(1, 0)) <=
                         1e-12 * std::max(1.0, std::abs(r(0, 1)));
  if (!symmetric || !(r(0, 0) > 0.0) || !(r.determinant() > 0.0)) {
    throw std::invalid_argument(
        "track.measurement_noise must be symmetric positive definite");
  }
}

void TrackerConfig::validate() const {
  kalman.validate();
  if (confirm_threshold < 1) {
    throw std::invalid_argument("track.confirm_threshold must be >= 1");
  }
  if (delete_threshold < 1) {
    throw std::invalid_argument("track.delete_threshold must be >= 1");
  }
  if (gate && (!(*gate > 0.0) || !std::isfinite(*gate))) {
    throw std::invalid_argument("track.gate must be positive when set");
  }
}

Track kf_predict(const Track& track, const KalmanConfig& config) {
  const Eigen::Matrix4d f = config.transition();
  Track out = track;
  out.state = f * track.state;
  Eigen::Matrix4d p = f * track.covariance * f.transpose() + config.process_noise();
  out.covariance = 0.5 * (p + p.transpose());
  return out;
}

Track kf_update(const Track& track, const Eigen::Vector2d& z, const KalmanConfig& config) {
  const Eigen::Matrix<double, 2, 4> h = KalmanConfig::measurement();
  const Eigen::Matrix2d s = innovation_covariance(track, config);
  // K = P H^T S^-1, via a solve rather than an explicit inverse.
  const Eigen::Matrix<double, 4, 2> k =
      (s.ldlt().solve(h * track.covariance)).transpose();

  Track out = track;
  out.state = track.state + k * (z - h * track.state);
  const Eigen::Matrix4d identity = Eigen::Matrix4d::Identity();
  Eigen::Matrix4d p;
  if (config.joseph_form) {
    const Eigen::Matrix4d ikh = identity - k * h;
    p = ikh * track.covariance * ikh.transpose() +
        k * config.measurement_noise * k.transpose();
  } else {
    p = (identity - k * h) * track.covariance;
  }
  out.covariance = 0.5 * (p + p.transpose());
  return out;
}

Assignment associate_nn(const std::vector<Eigen::Vector2d>& predicted_positions,
                        const std::vector<Eigen::Vector2d>& detections, double gate) {
  const std::size_t n_tracks = predicted_positions.size();
  const std::size_t n_dets = detections.size();

  Assignment out;
  std::vector<char> track_used(n_tracks, 0), det_used(n_dets, 0);
  while (true) {
    double best = kInf;
    std::size_t best_t = 0, best_d = 0;
    for (std::size_t t = 0; t < n_tracks; ++t) {
      if (track_used[t]) continue;
      for (std::size_t d = 0; d < n_dets; ++d) {
        if (det_used[d]) continue;
        const double dist = (predicted_positions[t] - detections[d]).norm();
        if (dist > gate) continue;
        // Strictly-smaller keeps the earliest (track, detection) pair on ties.
        if (dist < best) {
          best = dist;
          best_t = t;
          best_d = d;
        }
      }
    }
    if (best == kInf) break;
    track_used[best_t] = 1;
    det_used[best_d] = 1;
    out.pairs.emplace_back(best_t, best_d);
  }

  for (std::size_t t = 0; t < n_tracks; ++t) {
    if (!track_used[t]) out.unassigned_tracks.push_back(t);
  }
  for (std::size_t d = 0; d < n_dets; ++d) {
    if (!det_used[d]) out.unassigned_detections.push_back(d);
  }
  return out;
}

Assignment associate_optimal(const std::vector<Eigen::Vector2d>& predicted_positions,
                             const std::vector<Eigen::Vector2d>& detections, double gate) {
  const std::size_t n_tracks = predicted_positions.size();
  const std::size_t n_dets = detections.size();

  std::vector<std::vector<double>> cost(n_tracks, std::vector<double>(n_dets, 0.0));
  std::vector<std::vector<char>> allowed(n_tracks, std::vector<char>(n_dets, 0));
  for (std::size_t t = 0; t < n_tracks; ++t) {
    for (std::size_t d = 0; d < n_dets; ++d) {
      const double dist = (predicted_positions[t] - detections[d]).norm();
      cost[t][d] = dist;
      allowed[t][d] = dist <= gate ? 1 : 0;
    }
  }

  const std::vector<int> row_to_col = solve_masked(cost, allowed);
  Assignment out;
  std::vector<char> det_used(n_dets, 0);
  for (std::size_t t = 0; t < n_tracks; ++t) {
    if (t < row_to_col.size() && row_to_col[t] >= 0) {
      out.pairs.emplace_back(t, static_cast<std::size_t>(row_to_col[t]));
      det_used[static_cast<std::size_t>(row_to_col[t])] = 1;
    } else {
      out.unassigned_tracks.push_back(t);
    }
  }
  for (std::size_t d = 0; d < n_dets; ++d) {
    if (!det_used[d]) out.unassigned_detections.push_back(d);
  }
  return out;
}

std::vector<int> solve_assignment(const std::vector<std::vector<double>>& cost,
                                  double forbid_above) {
  const std::size_t rows = cost.size();
  std::vector<std::vector<char>> allowed(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    if (r > 0 && cost[r].size() != cost[0].size()) {
      throw std::invalid_argument("solve_assignment: ragged cost matrix");
    }
    allowed[r].resize(cost[r].size());
    for (std::size_t c = 0; c < cost[r].size(); ++c) {
      allowed[r][c] = cost[r][c] <= forbid_above ? 1 : 0;
    }
  }
  return solve_masked(cost, allowed);
}

TrackerStep step_tracker(const std::vector<Track>& tracks,
                         const std::vector<Eigen::Vector2d>& detections,
                         const TrackerConfig& config, int next_track_id) {
  config.validate();

  TrackerStep result;
  result.next_track_id = next_track_id;

  // Predict live tracks; deleted ones pass through untouched.
  std::vector<std::size_t> live_indices;
  std::vector<Track> predicted;
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    if (tracks[i].status == TrackStatus::kDeleted) continue;
    live_indices.push_back(i);
    predicted.push_back(kf_predict(tracks[i], config.kalman));
  }

  // Associate on predicted positions with per-track gates.
  std::vector<Eigen::Vector2d> positions(predicted.size());
  std::vector<double> gates(predicted.size());
  for (std::size_t t = 0; t < predicted.size(); ++t) {
    positions[t] = position_of(predicted[t]);
    gates[t] = config.gate ? *config.gate : auto_gate(predicted[t], config.kalman);
  }

  Assignment assoc;
  if (config.association == AssociationStrategy::kNearestNeighbor) {
    // Greedy with per-track gates: same loop as associate_nn but each track
    // applies its own gate.
    std::vector<char> track_used(predicted.size(), 0), det_used(detections.size(), 0);
    while (true) {
      double best = kInf;
      std::size_t best_t = 0, best_d = 0;
      for (std::size_t t = 0; t < predicted.size(); ++t) {
        if (track_used[t]) continue;
        for (std::size_t d = 0; d < detections.size(); ++d) {
          if (det_used[d]) continue;
          const double dist = (positions[t] - detections[d]).norm();
          if (dist > gates[t]) continue;
          if (dist < best) {
            best = dist;
            best_t = t;
            best_d = d;
          }
        }
      }
      if (best == kInf) break;
      track_used[best_t] = 1;
      det_used[best_d] = 1;
      assoc.pairs.emplace_back(best_t, best_d);
    }
    for (std::size_t t = 0; t < predicted.size(); ++t) {
      if (!track_used[t]) assoc.unassigned_tracks.push_back(t);
    }
    for (std::size_t d = 0; d < detections.size(); ++d) {
      if (!det_used[d]) assoc.unassigned_detections.push_back(d);
    }
  } else {
    std::vector<std::vector<double>> cost(predicted.size(),
                                          std::vector<double>(detections.size(), 0.0));
    std::vector<std::vector<char>> allowed(predicted.size(),
                                           std::vector<char>(detections.size(), 0));
    for (std::size_t t = 0; t < predicted.size(); ++t) {
      for (std::size_t d = 0; d < detections.size(); ++d) {
        const double dist = (positions[t] - detections[d]).norm();
        cost[t][d] = dist;
        allowed[t][d] = dist <= gates[t] ? 1 : 0;
      }
    }
    const std::vector<int> row_to_col = solve_masked(cost, allowed);
    std::vector<char> det_used(detections.size(), 0);
    for (std::size_t t = 0; t < predicted.size(); ++t) {
      if (t < row_to_col.size() && row_to_col[t] >= 0) {
        assoc.pairs.emplace_back(t, static_cast<std::size_t>(row_to_col[t]));
        det_used[static_cast<std::size_t>(row_to_col[t])] = 1;
      } else {
        assoc.unassigned_tracks.push_back(t);
      }
    }
    for (std::size_t d = 0; d < detections.size(); ++d) {
      if (!det_used[d]) assoc.unassigned_detections.push_back(d);
    }
  }

  // Start from the input list so deleted tracks pass through unchanged.
  result.tracks = tracks;

  std::vector<char> det_matched(detections.size(), 0);
  for (const auto& [t, d] : assoc.pairs) {
    Track updated = kf_update(predicted[t], detections[d], config.kalman);
    updated.hits += 1;
    updated.misses = 0;
    result.tracks[live_indices[t]] = updated;
    result.assignments.emplace_back(updated.id, d);
    det_matched[d] = 1;
  }
  for (const std::size_t t : assoc.unassigned_tracks) {
    Track coasted = predicted[t];
    coasted.misses += 1;
    result.tracks[live_indices[t]] = coasted;
  }

  // Lifecycle transitions: tentative -> confirmed, any -> deleted.
  for (const std::size_t i : live_indices) {
    Track& track = result.tracks[i];
    if (track.status == TrackStatus::kTentative && track.hits >= config.confirm_threshold) {
      track.status = TrackStatus::kConfirmed;
    }
    if (track.misses >= config.delete_threshold) {
      track.status = TrackStatus::kDeleted;
    }
  }

  // Spawn a tentative track per unmatched detection, in detection order.
  for (std::size_t d = 0; d < detections.size(); ++d) {
    if (det_matched[d]) continue;
    Track fresh;
    fresh.id = result.next_track_id++;
    fresh.state << detections[d](0), detections[d](1), 0.0, 0.0;
    fresh.covariance =
        config.kalman.initial_covariance_scale * Eigen::Matrix4d::Identity();
    fresh.hits = 1;
    fresh.misses = 0;
    fresh.status = TrackStatus::kTentative;
    result.assignments.emplace_back(fresh.id, d);
    result.tracks.push_back(fresh);
  }
  return result;
}

Tracker::Tracker(TrackerConfig config) : config_(std::move(config)) {
  config_.validate();
}

std::vector<std::pair<int, std::size_t>> Tracker::step(
    const std::vector<Eigen::Vector2d>& detections) {
  TrackerStep result = step_tracker(tracks_, detections, config_, next_id_);
  next_id_ = result.next_track_id;
  tracks_.clear();
  for (Track& track : result.tracks) {
    if (track.status != TrackStatus::kDeleted) tracks_.push_back(std::move(track));
  }
  return std::move(result.assignments);
}

int Tracker::confirmed_count() const {
  int count = 0;
  for (const Track& track : tracks_) {
    if (track.status == TrackStatus::kConfirmed) ++count;
  }
  return count;
}

}  // namespace fmcw
