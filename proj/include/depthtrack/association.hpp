#pragma once

#include <utility>
#include <vector>

#include "depthtrack/imaging.hpp"
#include "depthtrack/motion.hpp"

namespace depthtrack {

struct Detection {
  BBox box;
  double confidence{1.0};
  double depth{0.0};  // disparity in [0, 1], filled by box_depth
};

/// Outcome of one assignment round. The three index sets are disjoint and
/// together cover every input track and detection exactly once.
struct MatchResult {
  std::vector<std::pair<int, int>> matches;  // (track index, detection index)
  std::vector<int> unmatched_tracks;
  std::vector<int> unmatched_detections;
};

enum class BoxDepthMode { kBottomEdge, kFullBox };

/// Object disparity: mean of the depth grid along the box's bottom edge row
/// (clipped to the grid), or over the whole clipped box in kFullBox mode.
double box_depth(const BBox& box, const DepthGrid& d,
                 BoxDepthMode mode = BoxDepthMode::kBottomEdge);

/// Intersection over union; degenerate zero-area boxes yield 0.
double iou(const BBox& a, const BBox& b);

/// Minimum-total-cost one-to-one assignment (Hungarian method). Entries may
/// be +infinity (forbidden). Assigned pairs costing more than `gate` are
/// demoted to unmatched. An empty matrix yields an all-unmatched result.
MatchResult linear_assignment(const std::vector<std::vector<double>>& cost,
                              double gate);

/// IoU matching in rounds over depth intervals. The pooled depth range of
/// tracks and detections is split into n_levels equal intervals; rounds run
/// from nearest (largest disparity) to farthest, and unmatched members carry
/// over to the next round. With n_levels == 1 this is plain linear_assignment
/// with cost 1 - IoU.
MatchResult depth_cascade_match(const std::vector<BBox>& track_boxes,
                                const std::vector<double>& track_depths,
                                const std::vector<BBox>& det_boxes,
                                const std::vector<double>& det_depths,
                                int n_levels, double iou_gate);

struct TrackerConfig {
  double high_thresh{0.5};
  double low_thresh{0.1};
  double new_track_thresh{0.6};
  double iou_gate{0.3};
  int n_levels{8};
  int max_age{30};
  bool byte_split{false};
  bool compensation{true};
  bool depth_cascade{true};
  BoxDepthMode box_depth_mode{BoxDepthMode::kBottomEdge};
  double d_min{0.1};
  double d_max{100.0};
};

/// Confirmed track box emitted for one frame.
struct TrackOutput {
  int id{0};
  BBox box;
};

/// Per-step internals exposed for inspection: the motion-compensated
/// predicted box of every live track before matching.
struct StepDiagnostics {
  struct PredictedBox {
    int id{0};
    BBox box;
    double depth{0.0};
  };
  std::vector<PredictedBox> predicted;
};

/// Frame-by-frame tracker: Kalman prediction, camera-motion compensation,
/// depth-cascaded IoU association, and track lifecycle management.
class DepthTracker {
 public:
  explicit DepthTracker(const TrackerConfig& cfg) : cfg_(cfg) {}

  /// Advances the tracker by one frame and returns the confirmed track boxes.
  /// `pose` is the camera motion from the previous frame to this one.
  std::vector<TrackOutput> step(const std::vector<Detection>& detections,
                                const DepthGrid& depth, const Pose6DoF& pose,
                                const CameraIntrinsics& k,
                                StepDiagnostics* diag = nullptr);

  const std::vector<Track>& tracks() const { return tracks_; }
  const TrackerConfig& config() const { return cfg_; }

 private:
  TrackerConfig cfg_;
  std::vector<Track> tracks_;
  int next_id_{1};
};

}  // namespace depthtrack
