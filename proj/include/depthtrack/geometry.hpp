#pragma once

#include <Eigen/Dense>

namespace depthtrack {

/// Pinhole camera parameters (pixel units). Pixel (0,0) is the center of the
/// top-left pixel, x grows rightward, y downward.
struct CameraIntrinsics {
  double fx{100.0};
  double fy{100.0};
  double cx{50.0};
  double cy{50.0};
};

/// Throws std::invalid_argument unless fx, fy > 0 and cx, cy are finite.
void validate(const CameraIntrinsics& k);

/// Camera motion as three rotation angles (radians) plus a translation
/// (scene units). The zero pose is the identity motion.
struct Pose6DoF {
  double theta_x{0.0};
  double theta_y{0.0};
  double theta_z{0.0};
  double t_x{0.0};
  double t_y{0.0};
  double t_z{0.0};
};

/// Rotation + translation acting on camera-frame points: x' = r * x + tau.
struct RigidTransform {
  Eigen::Matrix3d r = Eigen::Matrix3d::Identity();
  Eigen::Vector3d tau = Eigen::Vector3d::Zero();

  RigidTransform inverse() const;
};

/// Composes r = Rz(theta_z) * Ry(theta_y) * Rx(theta_x), tau = (t_x, t_y, t_z).
RigidTransform pose_to_transform(const Pose6DoF& p);

/// Inverse of pose_to_transform for |theta_y| < pi/2 (z-y-x Euler extraction).
Pose6DoF transform_to_pose(const RigidTransform& t);

struct ReprojectedPoint {
  double u{0.0};
  double v{0.0};
  double depth{0.0};  // z in the destination camera frame; <= 0 means behind it
};

/// Maps pixel (u, v) at metric depth into the view reached by t:
/// backproject with k, apply t, project with k again. Sub-pixel output.
/// The returned depth may be <= 0 (point behind the destination camera);
/// callers must treat such results as invalid.
ReprojectedPoint reproject_point(double u, double v, double depth,
                                 const CameraIntrinsics& k,
                                 const RigidTransform& t);

/// Converts a disparity d in [0,1] to metric depth in [d_min, d_max]:
/// 1 / (1/d_max + (1/d_min - 1/d_max) * d). Strictly decreasing in d.
double disparity_to_depth(double d, double d_min, double d_max);

/// Inverse of disparity_to_depth; depth outside [d_min, d_max] is clamped
/// so the result stays in [0, 1].
double depth_to_disparity(double depth, double d_min, double d_max);

}  // namespace depthtrack
