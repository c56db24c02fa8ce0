#include "depthtrack/motion.hpp"

#include <cmath>
#include <stdexcept>

namespace depthtrack {

namespace {

// Noise scales follow the tracking-by-detection convention: position std
// h/20, velocity std h/160, with fixed stds for the aspect components.
constexpr double kStdWeightPosition = 1.0 / 20.0;
constexpr double kStdWeightVelocity = 1.0 / 160.0;

using Vec4 = Eigen::Matrix<double, 4, 1>;
using Vec8 = Eigen::Matrix<double, 8, 1>;
using Mat8 = Eigen::Matrix<double, 8, 8>;
using Mat4x8 = Eigen::Matrix<double, 4, 8>;

Vec4 box_to_measurement(const BBox& box) {
  return Vec4(box.cx(), box.cy(), box.width() / box.height(), box.height());
}

Mat8 transition_matrix() {
  Mat8 f = Mat8::Identity();
  for (int i = 0; i < 4; ++i) f(i, i + 4) = 1.0;
  return f;
}

}  // namespace

BBox KalmanState::box() const {
  const double cx = mean(0);
  const double cy = mean(1);
  const double a = mean(2);
  const double h = mean(3);
  const double w = a * h;
  return BBox{cx - 0.5 * w, cy - 0.5 * h, cx + 0.5 * w, cy + 0.5 * h};
}

KalmanState kf_initiate(const BBox& box) {
  if (!(box.area() > 0.0)) {
    throw std::invalid_argument("kf_initiate: box must have positive area");
  }
  KalmanState s;
  s.mean.head<4>() = box_to_measurement(box);

  const double h = box.height();
  Vec8 std;
  std << 2 * kStdWeightPosition * h, 2 * kStdWeightPosition * h, 1e-2,
      2 * kStdWeightPosition * h, 10 * kStdWeightVelocity * h,
      10 * kStdWeightVelocity * h, 1e-5, 10 * kStdWeightVelocity * h;
  s.covariance = std.cwiseProduct(std).asDiagonal();
  return s;
}

KalmanState kf_predict(const KalmanState& s) {
  const double h = s.mean(3);
  Vec8 std;
  std << kStdWeightPosition * h, kStdWeightPosition * h, 1e-2,
      kStdWeightPosition * h, kStdWeightVelocity * h, kStdWeightVelocity * h,
      1e-5, kStdWeightVelocity * h;
  const Mat8 q = std.cwiseProduct(std).asDiagonal();
  const Mat8 f = transition_matrix();

  KalmanState out;
  out.mean = f * s.mean;
  out.covariance = f * s.covariance * f.transpose() + q;
  return out;
}

KalmanState kf_update(const KalmanState& s, const BBox& box) {
  if (!(box.area() > 0.0)) {
    throw std::invalid_argument("kf_update: box must have positive area");
  }
  const double h = s.mean(3);
  Vec4 std;
  std << kStdWeightPosition * h, kStdWeightPosition * h, 1e-1,
      kStdWeightPosition * h;
  const Eigen::Matrix4d r = std.cwiseProduct(std).asDiagonal();

  Mat4x8 hm = Mat4x8::Zero();
  hm.block<4, 4>(0, 0) = Eigen::Matrix4d::Identity();

  const Eigen::Matrix4d innovation_cov = hm * s.covariance * hm.transpose() + r;
  const Eigen::Matrix<double, 8, 4> gain =
      innovation_cov.ldlt().solve(hm * s.covariance).transpose();
  const Vec4 innovation = box_to_measurement(box) - hm * s.mean;

  KalmanState out;
  out.mean = s.mean + gain * innovation;
  // Joseph form keeps the posterior covariance symmetric PSD.
  const Mat8 ikh = Mat8::Identity() - gain * hm;
  out.covariance =
      ikh * s.covariance * ikh.transpose() + gain * r * gain.transpose();
  return out;
}

BBox compensate_box(const BBox& box, double depth, const CameraIntrinsics& k,
                    const RigidTransform& t) {
  if (!(depth > 0.0)) {
    throw std::invalid_argument("compensate_box: depth must be positive");
  }
  const ReprojectedPoint bl = reproject_point(box.x0, box.y1, depth, k, t);
  const ReprojectedPoint br = reproject_point(box.x1, box.y1, depth, k, t);
  if (bl.depth <= 0.0 || br.depth <= 0.0) {
    return box;
  }
  const double height = box.height();
  const double new_y1 = 0.5 * (bl.v + br.v);
  BBox out;
  out.x0 = std::min(bl.u, br.u);
  out.x1 = std::max(bl.u, br.u);
  out.y1 = new_y1;
  out.y0 = new_y1 - height;
  return out;
}

}  // namespace depthtrack
