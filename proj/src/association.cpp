#include "depthtrack/association.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace depthtrack {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int clamp_to(long v, int hi) {
  return static_cast<int>(std::clamp(v, 0L, static_cast<long>(hi)));
}

// Min-cost assignment over an n x m matrix with n <= m, shortest augmenting
// paths with potentials. Returns per-row matched column (or -1).
std::vector<int> hungarian_rows(const std::vector<std::vector<double>>& a,
                                int n, int m) {
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(m + 1, kInf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = a[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= m; ++j) {
    if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
  }
  return row_to_col;
}

}  // namespace

double box_depth(const BBox& box, const DepthGrid& d, BoxDepthMode mode) {
  if (d.width <= 0 || d.height <= 0) {
    throw std::invalid_argument("box_depth: empty depth grid");
  }
  if (box.x1 < 0.0 || box.y1 < 0.0 || box.x0 > d.width - 1.0 ||
      box.y0 > d.height - 1.0) {
    throw std::invalid_argument("box_depth: box entirely outside the grid");
  }
  const int x_lo = clamp_to(std::lround(box.x0), d.width - 1);
  const int x_hi = clamp_to(std::lround(box.x1), d.width - 1);
  const int y_hi = clamp_to(std::lround(box.y1), d.height - 1);
  const int y_lo = mode == BoxDepthMode::kFullBox
                       ? clamp_to(std::lround(box.y0), d.height - 1)
                       : y_hi;

  double sum = 0.0;
  long count = 0;
  for (int y = y_lo; y <= y_hi; ++y) {
    for (int x = x_lo; x <= x_hi; ++x) {
      sum += d.at(x, y);
      ++count;
    }
  }
  return sum / static_cast<double>(count);
}

double iou(const BBox& a, const BBox& b) {
  const double ix0 = std::max(a.x0, b.x0);
  const double iy0 = std::max(a.y0, b.y0);
  const double ix1 = std::min(a.x1, b.x1);
  const double iy1 = std::min(a.y1, b.y1);
  const double iw = ix1 - ix0;
  const double ih = iy1 - iy0;
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) return 0.0;
  return inter / uni;
}

MatchResult linear_assignment(const std::vector<std::vector<double>>& cost,
                              double gate) {
  MatchResult res;
  const int n_rows = static_cast<int>(cost.size());
  const int n_cols = n_rows > 0 ? static_cast<int>(cost.front().size()) : 0;
  for (const auto& row : cost) {
    if (static_cast<int>(row.size()) != n_cols) {
      throw std::invalid_argument("linear_assignment: ragged cost matrix");
    }
  }
  if (n_rows == 0 || n_cols == 0) {
    for (int i = 0; i < n_rows; ++i) res.unmatched_tracks.push_back(i);
    for (int j = 0; j < n_cols; ++j) res.unmatched_detections.push_back(j);
    return res;
  }

  // Forbidden entries become a finite sentinel larger than any full
  // assignment of real costs, so the solver only uses them when forced.
  double max_finite = 0.0;
  for (const auto& row : cost) {
    for (double c : row) {
      if (std::isfinite(c)) max_finite = std::max(max_finite, std::abs(c));
    }
  }
  const double big = (max_finite + 1.0) * (std::min(n_rows, n_cols) + 1);

  const bool transposed = n_rows > n_cols;
  const int n = transposed ? n_cols : n_rows;
  const int m = transposed ? n_rows : n_cols;
  std::vector<std::vector<double>> a(n, std::vector<double>(m));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      const double c = transposed ? cost[j][i] : cost[i][j];
      a[i][j] = std::isfinite(c) ? c : big;
    }
  }

  const std::vector<int> row_to_col = hungarian_rows(a, n, m);

  std::vector<char> row_matched(n_rows, 0), col_matched(n_cols, 0);
  for (int i = 0; i < n; ++i) {
    const int j = row_to_col[i];
    if (j < 0) continue;
    const int r = transposed ? j : i;
    const int c = transposed ? i : j;
    const double orig = cost[r][c];
    if (!std::isfinite(orig) || orig > gate) continue;
    res.matches.emplace_back(r, c);
    row_matched[r] = 1;
    col_matched[c] = 1;
  }
  std::sort(res.matches.begin(), res.matches.end());
  for (int i = 0; i < n_rows; ++i) {
    if (!row_matched[i]) res.unmatched_tracks.push_back(i);
  }
  for (int j = 0; j < n_cols; ++j) {
    if (!col_matched[j]) res.unmatched_detections.push_back(j);
  }
  return res;
}

MatchResult depth_cascade_match(const std::vector<BBox>& track_boxes,
                                const std::vector<double>& track_depths,
                                const std::vector<BBox>& det_boxes,
                                const std::vector<double>& det_depths,
                                int n_levels, double iou_gate) {
  if (n_levels < 1) {
    throw std::invalid_argument("depth_cascade_match: n_levels must be >= 1");
  }
  if (track_boxes.size() != track_depths.size() ||
      det_boxes.size() != det_depths.size()) {
    throw std::invalid_argument("depth_cascade_match: boxes and depths must pair up");
  }

  MatchResult res;
  const int n_tracks = static_cast<int>(track_boxes.size());
  const int n_dets = static_cast<int>(det_boxes.size());
  if (n_tracks == 0 || n_dets == 0) {
    for (int i = 0; i < n_tracks; ++i) res.unmatched_tracks.push_back(i);
    for (int j = 0; j < n_dets; ++j) res.unmatched_detections.push_back(j);
    return res;
  }

  double d_lo = kInf, d_hi = -kInf;
  for (double d : track_depths) {
    d_lo = std::min(d_lo, d);
    d_hi = std::max(d_hi, d);
  }
  for (double d : det_depths) {
    d_lo = std::min(d_lo, d);
    d_hi = std::max(d_hi, d);
  }
  const double span = d_hi - d_lo;

  // Level 0 holds the largest disparities (nearest objects).
  const auto level_of = [&](double d) {
    if (span <= 0.0) return 0;
    const int lvl = static_cast<int>((d_hi - d) / span * n_levels);
    return std::clamp(lvl, 0, n_levels - 1);
  };

  std::vector<std::vector<int>> tracks_at(n_levels), dets_at(n_levels);
  for (int i = 0; i < n_tracks; ++i) tracks_at[level_of(track_depths[i])].push_back(i);
  for (int j = 0; j < n_dets; ++j) dets_at[level_of(det_depths[j])].push_back(j);

  std::vector<int> pool_tracks, pool_dets;
  const double gate = 1.0 - iou_gate;
  for (int lvl = 0; lvl < n_levels; ++lvl) {
    pool_tracks.insert(pool_tracks.end(), tracks_at[lvl].begin(), tracks_at[lvl].end());
    pool_dets.insert(pool_dets.end(), dets_at[lvl].begin(), dets_at[lvl].end());
    if (pool_tracks.empty() || pool_dets.empty()) continue;

    std::vector<std::vector<double>> cost(pool_tracks.size(),
                                          std::vector<double>(pool_dets.size()));
    for (std::size_t r = 0; r < pool_tracks.size(); ++r) {
      for (std::size_t c = 0; c < pool_dets.size(); ++c) {
        cost[r][c] = 1.0 - iou(track_boxes[pool_tracks[r]], det_boxes[pool_dets[c]]);
      }
    }
    const MatchResult level_res = linear_assignment(cost, gate);

    std::vector<int> next_tracks, next_dets;
    for (const auto& [r, c] : level_res.matches) {
      res.matches.emplace_back(pool_tracks[r], pool_dets[c]);
    }
    for (int r : level_res.unmatched_tracks) next_tracks.push_back(pool_tracks[r]);
    for (int c : level_res.unmatched_detections) next_dets.push_back(pool_dets[c]);
    pool_tracks = std::move(next_tracks);
    pool_dets = std::move(next_dets);
  }

  std::sort(res.matches.begin(), res.matches.end());
  res.unmatched_tracks = std::move(pool_tracks);
  res.unmatched_detections = std::move(pool_dets);
  std::sort(res.unmatched_tracks.begin(), res.unmatched_tracks.end());
  std::sort(res.unmatched_detections.begin(), res.unmatched_detections.end());
  return res;
}

std::vector<TrackOutput> DepthTracker::step(
    const std::vector<Detection>& detections, const DepthGrid& depth,
    const Pose6DoF& pose, const CameraIntrinsics& k, StepDiagnostics* diag) {
  const RigidTransform motion = pose_to_transform(pose);

  // 1-2) Kalman prediction, then camera-motion compensation of the predicted
  // box at the track's stored depth. The compensated position replaces the
  // predicted mean so the subsequent update does not re-absorb the camera
  // motion into the object velocity estimate.
  for (Track& t : tracks_) {
    t.state = kf_predict(t.state);
    if (cfg_.compensation) {
      const double disparity = std::clamp(t.depth, 0.0, 1.0);
      const double metric = disparity_to_depth(disparity, cfg_.d_min, cfg_.d_max);
      const BBox comp = compensate_box(t.state.box(), metric, k, motion);
      t.state.mean(0) = comp.cx();
      t.state.mean(1) = comp.cy();
      t.state.mean(2) = comp.width() / comp.height();
      t.state.mean(3) = comp.height();
    }
  }

  // 3) Refresh object depths from the current depth grid.
  for (Track& t : tracks_) {
    const BBox b = t.state.box();
    if (b.x1 < 0.0 || b.y1 < 0.0 || b.x0 > depth.width - 1.0 ||
        b.y0 > depth.height - 1.0) {
      continue;  // off-grid prediction keeps its previous depth
    }
    t.depth = box_depth(b, depth, cfg_.box_depth_mode);
  }
  std::vector<Detection> dets = detections;
  for (Detection& det : dets) {
    if (det.box.x1 < 0.0 || det.box.y1 < 0.0 ||
        det.box.x0 > depth.width - 1.0 || det.box.y0 > depth.height - 1.0) {
      continue;
    }
    det.depth = box_depth(det.box, depth, cfg_.box_depth_mode);
  }

  if (diag) {
    diag->predicted.clear();
    for (const Track& t : tracks_) {
      diag->predicted.push_back({t.id, t.state.box(), t.depth});
    }
  }

  // 4) Confidence split.
  std::vector<int> high, low;
  for (int j = 0; j < static_cast<int>(dets.size()); ++j) {
    if (dets[j].confidence >= cfg_.high_thresh) {
      high.push_back(j);
    } else if (cfg_.byte_split && dets[j].confidence >= cfg_.low_thresh) {
      low.push_back(j);
    }
  }

  // 5) Depth-cascaded association against high-confidence detections.
  std::vector<BBox> track_boxes;
  std::vector<double> track_depths;
  for (const Track& t : tracks_) {
    track_boxes.push_back(t.state.box());
    track_depths.push_back(t.depth);
  }
  std::vector<BBox> high_boxes;
  std::vector<double> high_depths;
  for (int j : high) {
    high_boxes.push_back(dets[j].box);
    high_depths.push_back(dets[j].depth);
  }
  const int levels = cfg_.depth_cascade ? cfg_.n_levels : 1;
  const MatchResult first =
      depth_cascade_match(track_boxes, track_depths, high_boxes, high_depths,
                          levels, cfg_.iou_gate);

  std::vector<char> matched(tracks_.size(), 0);
  const auto apply_match = [&](Track& t, const Detection& det) {
    t.state = kf_update(t.state, det.box);
    t.hits += 1;
    t.misses = 0;
    if (t.status == TrackStatus::kTentative && t.hits >= 2) {
      t.status = TrackStatus::kActive;
    } else if (t.status == TrackStatus::kLost) {
      t.status = TrackStatus::kActive;
    }
  };
  for (const auto& [r, c] : first.matches) {
    apply_match(tracks_[r], dets[high[c]]);
    matched[r] = 1;
  }

  // 7) Optional second stage: leftover active/lost tracks against
  // low-confidence detections with plain IoU matching.
  std::vector<char> det_used(dets.size(), 0);
  for (const auto& [r, c] : first.matches) det_used[high[c]] = 1;
  if (cfg_.byte_split && !low.empty()) {
    std::vector<int> second_tracks;
    for (int r : first.unmatched_tracks) {
      if (tracks_[r].status != TrackStatus::kTentative) second_tracks.push_back(r);
    }
    if (!second_tracks.empty()) {
      std::vector<std::vector<double>> cost(second_tracks.size(),
                                            std::vector<double>(low.size()));
      for (std::size_t r = 0; r < second_tracks.size(); ++r) {
        for (std::size_t c = 0; c < low.size(); ++c) {
          cost[r][c] = 1.0 - iou(tracks_[second_tracks[r]].state.box(), dets[low[c]].box);
        }
      }
      const MatchResult second = linear_assignment(cost, 1.0 - cfg_.iou_gate);
      for (const auto& [r, c] : second.matches) {
        apply_match(tracks_[second_tracks[r]], dets[low[c]]);
        matched[second_tracks[r]] = 1;
        det_used[low[c]] = 1;
      }
    }
  }

  // 8) Spawn tracks from confident unmatched detections.
  std::vector<Track> spawned;
  for (int c : first.unmatched_detections) {
    const Detection& det = dets[high[c]];
    if (det.confidence < cfg_.new_track_thresh) continue;
    Track t;
    t.id = next_id_++;
    t.state = kf_initiate(det.box);
    t.status = TrackStatus::kTentative;
    t.hits = 1;
    t.misses = 0;
    t.depth = det.depth;
    spawned.push_back(t);
  }

  // 9) Lifecycle bookkeeping for unmatched tracks.
  std::vector<Track> survivors;
  for (std::size_t i = 0; i < tracks_.size(); ++i) {
    Track& t = tracks_[i];
    if (matched[i]) {
      survivors.push_back(t);
      continue;
    }
    if (t.status == TrackStatus::kTentative) continue;  // dropped immediately
    t.status = TrackStatus::kLost;
    t.hits = 0;
    t.misses += 1;
    if (t.misses > cfg_.max_age) continue;
    survivors.push_back(t);
  }
  for (Track& t : spawned) survivors.push_back(t);
  tracks_ = std::move(survivors);

  std::vector<TrackOutput> out;
  for (const Track& t : tracks_) {
    if (t.status == TrackStatus::kActive) {
      out.push_back({t.id, t.state.box()});
    }
  }
  return out;
}

}  // namespace depthtrack
