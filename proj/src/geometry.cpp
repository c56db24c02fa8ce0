#include "depthtrack/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace depthtrack {

void validate(const CameraIntrinsics& k) {
  if (!(k.fx > 0.0) || !(k.fy > 0.0)) {
    throw std::invalid_argument("camera focal lengths must be positive");
  }
  if (!std::isfinite(k.cx) || !std::isfinite(k.cy) ||
      !std::isfinite(k.fx) || !std::isfinite(k.fy)) {
    throw std::invalid_argument("camera intrinsics must be finite");
  }
}

RigidTransform RigidTransform::inverse() const {
  RigidTransform inv;
  inv.r = r.transpose();
  inv.tau = -(inv.r * tau);
  return inv;
}

RigidTransform pose_to_transform(const Pose6DoF& p) {
  const double vals[6] = {p.theta_x, p.theta_y, p.theta_z, p.t_x, p.t_y, p.t_z};
  for (double v : vals) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("pose components must be finite");
    }
  }
  const Eigen::Matrix3d rx =
      Eigen::AngleAxisd(p.theta_x, Eigen::Vector3d::UnitX()).toRotationMatrix();
  const Eigen::Matrix3d ry =
      Eigen::AngleAxisd(p.theta_y, Eigen::Vector3d::UnitY()).toRotationMatrix();
  const Eigen::Matrix3d rz =
      Eigen::AngleAxisd(p.theta_z, Eigen::Vector3d::UnitZ()).toRotationMatrix();

  RigidTransform t;
  t.r = rz * ry * rx;
  t.tau = Eigen::Vector3d(p.t_x, p.t_y, p.t_z);
  return t;
}

Pose6DoF transform_to_pose(const RigidTransform& t) {
  // r = Rz * Ry * Rx, so r(2,0) = -sin(theta_y).
  Pose6DoF p;
  p.theta_y = std::asin(std::clamp(-t.r(2, 0), -1.0, 1.0));
  p.theta_x = std::atan2(t.r(2, 1), t.r(2, 2));
  p.theta_z = std::atan2(t.r(1, 0), t.r(0, 0));
  p.t_x = t.tau.x();
  p.t_y = t.tau.y();
  p.t_z = t.tau.z();
  return p;
}

ReprojectedPoint reproject_point(double u, double v, double depth,
                                 const CameraIntrinsics& k,
                                 const RigidTransform& t) {
  if (!(depth > 0.0)) {
    throw std::invalid_argument("reproject_point requires depth > 0");
  }
  const Eigen::Vector3d x(depth * (u - k.cx) / k.fx,
                          depth * (v - k.cy) / k.fy,
                          depth);
  const Eigen::Vector3d y = t.r * x + t.tau;

  ReprojectedPoint out;
  out.u = k.fx * y.x() / y.z() + k.cx;
  out.v = k.fy * y.y() / y.z() + k.cy;
  out.depth = y.z();
  return out;
}

double disparity_to_depth(double d, double d_min, double d_max) {
  if (!(d >= 0.0 && d <= 1.0)) {
    throw std::invalid_argument("disparity must lie in [0, 1]");
  }
  if (!(d_min > 0.0) || !(d_min < d_max)) {
    throw std::invalid_argument("depth bounds require 0 < d_min < d_max");
  }
  return 1.0 / (1.0 / d_max + (1.0 / d_min - 1.0 / d_max) * d);
}

double depth_to_disparity(double depth, double d_min, double d_max) {
  if (!(depth > 0.0)) {
    throw std::invalid_argument("depth must be positive");
  }
  if (!(d_min > 0.0) || !(d_min < d_max)) {
    throw std::invalid_argument("depth bounds require 0 < d_min < d_max");
  }
  const double d =
      (1.0 / depth - 1.0 / d_max) / (1.0 / d_min - 1.0 / d_max);
  return std::clamp(d, 0.0, 1.0);
}

}  // namespace depthtrack
