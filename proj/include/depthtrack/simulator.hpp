#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "depthtrack/geometry.hpp"
#include "depthtrack/imaging.hpp"
#include "depthtrack/motion.hpp"

namespace depthtrack {

/// Moving billboard: a textured upright rectangle whose bottom edge rests on
/// the ground plane. Position is the footprint center on the plane and moves
/// with (vx, vy) per frame once spawned.
struct ObjectSpec {
  int spawn_frame{0};
  double x{0.0};
  double y{0.0};
  double vx{0.0};
  double vy{0.0};
  double width{1.0};
  double height{1.0};
};

/// Step offset injected into the camera trajectory at one frame.
struct JerkSpec {
  int frame{0};
  double dx{0.0};
  double dy{0.0};
  double dyaw{0.0};
};

struct SceneSpec {
  int width{256};
  int height{160};
  int frame_count{2};
  CameraIntrinsics intrinsics{200.0, 200.0, 127.5, 79.5};
  double cam_height{10.0};  // above the ground plane
  double cam_pitch{0.5};    // radians forward from straight down
  double cam_x{0.0};
  double cam_y{0.0};
  double cam_vx{0.0};  // per frame
  double cam_vy{0.0};
  double cam_yaw_rate{0.0};  // radians per frame
  double d_min{0.1};
  double d_max{100.0};
  std::uint64_t texture_seed{1};
  std::vector<ObjectSpec> objects;
  std::vector<JerkSpec> jerks;
};

struct GtBox {
  int id{0};
  BBox box;
};

struct SceneFrame {
  ImageGrid image;
  DepthGrid depth;               // disparity, normalized with d_min/d_max
  Pose6DoF pose;                 // camera motion from the previous frame
  std::vector<GtBox> gt_boxes;   // one per object intersecting the image
};

/// Deterministic synthetic world: a value-noise-textured ground plane seen by
/// a tilted overhead camera, with billboard objects standing on the plane.
/// Identical (spec, seed) inputs build bitwise-identical scenes.
class Scene {
 public:
  static Scene build(const SceneSpec& spec, std::uint64_t seed);

  SceneFrame render(int t) const;

  int frame_count() const { return spec_.frame_count; }
  const SceneSpec& spec() const { return spec_; }
  /// Camera motion from frame t-1 to t (zero for t == 0).
  const Pose6DoF& relative_pose(int t) const { return rel_poses_.at(t); }

 private:
  struct CameraState {
    Eigen::Matrix3d r_wc = Eigen::Matrix3d::Identity();  // camera -> world
    Eigen::Vector3d center = Eigen::Vector3d::Zero();
    double yaw{0.0};
  };

  Scene() = default;

  SceneSpec spec_;
  std::uint64_t seed_{0};
  std::vector<CameraState> cameras_;
  std::vector<Pose6DoF> rel_poses_;
};

}  // namespace depthtrack
