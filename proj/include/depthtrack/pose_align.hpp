#pragma once

#include <vector>

#include "depthtrack/geometry.hpp"
#include "depthtrack/imaging.hpp"

namespace depthtrack {

struct AlignConfig {
  int pyramid_levels{3};
  int max_evals_per_level{200};
  double converge_tol{1e-6};
  double alpha{0.85};
  double d_min{0.1};
  double d_max{100.0};
};

struct PoseEstimate {
  Pose6DoF pose;
  double residual{0.0};        // mean photometric error at the optimum
  double valid_fraction{0.0};  // valid-pixel fraction at the optimum
};

/// Best-objective-so-far sequences, one per pyramid level, coarsest first.
struct AlignTrace {
  std::vector<std::vector<double>> level_best;
};

/// Mean photometric error of the target against the view synthesized from
/// the source under `pose` (target's depth, pose as target-to-source motion).
/// Returns +infinity when fewer than 25% of the pixels are valid.
double photometric_objective(const Pose6DoF& pose, const ImageGrid& source,
                             const ImageGrid& target,
                             const DepthGrid& target_depth,
                             const CameraIntrinsics& k, const AlignConfig& cfg);

/// Recovers the 6-DoF motion that maps target-frame points into the source
/// view by coarse-to-fine simplex descent on the photometric objective.
/// Feeding (source = frame t, target = frame t-1, depth of t-1) yields the
/// camera motion from t-1 to t.
PoseEstimate estimate_pose(const ImageGrid& source, const ImageGrid& target,
                           const DepthGrid& target_depth,
                           const CameraIntrinsics& k, const AlignConfig& cfg,
                           AlignTrace* trace = nullptr);

}  // namespace depthtrack
