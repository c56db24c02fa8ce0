#pragma once

#include <Eigen/Dense>

#include "depthtrack/geometry.hpp"

namespace depthtrack {

/// Axis-aligned box, top-left-bottom-right, pixel units.
struct BBox {
  double x0{0.0};
  double y0{0.0};
  double x1{0.0};
  double y1{0.0};

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
  double cx() const { return 0.5 * (x0 + x1); }
  double cy() const { return 0.5 * (y0 + y1); }
};

/// Constant-velocity filter state over (cx, cy, aspect, h) and velocities.
struct KalmanState {
  Eigen::Matrix<double, 8, 1> mean = Eigen::Matrix<double, 8, 1>::Zero();
  Eigen::Matrix<double, 8, 8> covariance = Eigen::Matrix<double, 8, 8>::Zero();

  BBox box() const;
};

enum class TrackStatus { kTentative, kActive, kLost };

struct Track {
  int id{0};
  KalmanState state;
  TrackStatus status{TrackStatus::kTentative};
  int hits{0};    // consecutive matched frames
  int misses{0};  // consecutive missed frames
  double depth{0.0};  // latest object disparity in [0, 1]
};

/// New state centered on the box, zero velocities, diagonal covariance with
/// position noise tied to box height (std h/20, velocity std h/160).
KalmanState kf_initiate(const BBox& box);

/// Constant-velocity transition plus process noise.
KalmanState kf_predict(const KalmanState& s);

/// Standard correction against the box measured as (cx, cy, aspect, h).
KalmanState kf_update(const KalmanState& s, const BBox& box);

/// Reprojects the box's bottom corners at the given metric depth through t,
/// keeping the box height unchanged. With the identity transform this is the
/// exact identity. A corner landing behind the camera leaves the box as is.
BBox compensate_box(const BBox& box, double depth, const CameraIntrinsics& k,
                    const RigidTransform& t);

}  // namespace depthtrack
