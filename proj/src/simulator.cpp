#include "depthtrack/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace depthtrack {

namespace {

std::uint64_t mix_u64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double lattice_value(std::uint64_t seed, std::int64_t ix, std::int64_t iy) {
  std::uint64_t h = mix_u64(seed ^ mix_u64(static_cast<std::uint64_t>(ix) ^
                                           mix_u64(static_cast<std::uint64_t>(iy))));
  return static_cast<double>(h >> 11) * 0x1.0p-53;  // [0, 1)
}

double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

double value_noise(std::uint64_t seed, double x, double y) {
  const double fx = std::floor(x);
  const double fy = std::floor(y);
  const auto ix = static_cast<std::int64_t>(fx);
  const auto iy = static_cast<std::int64_t>(fy);
  const double tx = smoothstep(x - fx);
  const double ty = smoothstep(y - fy);
  const double v00 = lattice_value(seed, ix, iy);
  const double v10 = lattice_value(seed, ix + 1, iy);
  const double v01 = lattice_value(seed, ix, iy + 1);
  const double v11 = lattice_value(seed, ix + 1, iy + 1);
  const double top = v00 + (v10 - v00) * tx;
  const double bot = v01 + (v11 - v01) * tx;
  return top + (bot - top) * ty;
}

// Multi-octave noise in [0, 1]; cell sizes in world units chosen so the
// finest detail stays a few pixels wide from typical viewing depths.
double fbm(std::uint64_t seed, double x, double y) {
  static constexpr double kCell[5] = {8.0, 4.0, 2.0, 1.0, 0.5};
  static constexpr double kAmp[5] = {1.0, 0.6, 0.35, 0.2, 0.1};
  double total = 0.0, norm = 0.0;
  for (int o = 0; o < 5; ++o) {
    total += kAmp[o] * value_noise(seed + o, x / kCell[o], y / kCell[o]);
    norm += kAmp[o];
  }
  return total / norm;
}

double ground_intensity(std::uint64_t seed, double x, double y) {
  return 0.1 + 0.8 * fbm(seed, x, y);
}

double object_intensity(std::uint64_t seed, int obj_index, double lx, double lz) {
  const std::uint64_t obj_seed = mix_u64(seed ^ (0x5151ULL + obj_index));
  // Per-object intensity band so neighbours read differently.
  const double bias = 0.15 + 0.5 * lattice_value(obj_seed, 7, 13);
  const double n = fbm(obj_seed, lx * 4.0, lz * 4.0);
  return std::clamp(bias + 0.35 * (n - 0.5), 0.05, 0.95);
}

Eigen::Matrix3d base_rotation(double pitch) {
  // Camera axes in world coordinates for a camera looking down, pitched
  // forward (toward +y) by `pitch`: x right, y into the scene's near side,
  // z along the optical axis.
  Eigen::Matrix3d r;
  r.col(0) = Eigen::Vector3d(1.0, 0.0, 0.0);
  r.col(1) = Eigen::Vector3d(0.0, -std::cos(pitch), -std::sin(pitch));
  r.col(2) = Eigen::Vector3d(0.0, std::sin(pitch), -std::cos(pitch));
  return r;
}

Eigen::Matrix3d yaw_rotation(double yaw) {
  return Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitZ()).toRotationMatrix();
}

struct ObjectPose {
  double x{0.0};
  double y{0.0};
};

ObjectPose object_at(const ObjectSpec& o, int t) {
  const int age = t - o.spawn_frame;
  return {o.x + o.vx * age, o.y + o.vy * age};
}

}  // namespace

Scene Scene::build(const SceneSpec& spec, std::uint64_t seed) {
  if (spec.width < 2 || spec.height < 2) {
    throw std::invalid_argument("scene: image must be at least 2x2");
  }
  if (spec.frame_count < 2) {
    throw std::invalid_argument("scene: frame count must be >= 2");
  }
  if (!(spec.cam_height > 0.0)) {
    throw std::invalid_argument("scene: camera height must be positive");
  }
  if (!(spec.cam_pitch >= 0.0 && spec.cam_pitch < 1.4)) {
    throw std::invalid_argument("scene: camera pitch must lie in [0, 1.4) rad");
  }
  if (!(spec.d_min > 0.0 && spec.d_min < spec.d_max)) {
    throw std::invalid_argument("scene: depth bounds require 0 < d_min < d_max");
  }
  validate(spec.intrinsics);
  for (const auto& o : spec.objects) {
    if (!(o.width > 0.0 && o.height > 0.0)) {
      throw std::invalid_argument("scene: object footprints must be positive");
    }
    if (o.spawn_frame < 0 || o.spawn_frame >= spec.frame_count) {
      throw std::invalid_argument("scene: object spawn frame out of range");
    }
  }
  for (const auto& j : spec.jerks) {
    if (j.frame < 0 || j.frame >= spec.frame_count) {
      throw std::invalid_argument("scene: jerk frame out of range");
    }
  }

  Scene s;
  s.spec_ = spec;
  s.seed_ = mix_u64(spec.texture_seed ^ mix_u64(seed));

  double x = spec.cam_x, y = spec.cam_y, yaw = 0.0;
  for (int t = 0; t < spec.frame_count; ++t) {
    if (t > 0) {
      x += spec.cam_vx;
      y += spec.cam_vy;
      yaw += spec.cam_yaw_rate;
    }
    for (const auto& j : spec.jerks) {
      if (j.frame == t) {
        x += j.dx;
        y += j.dy;
        yaw += j.dyaw;
      }
    }
    CameraState cam;
    cam.center = Eigen::Vector3d(x, y, spec.cam_height);
    cam.yaw = yaw;
    cam.r_wc = yaw_rotation(yaw) * base_rotation(spec.cam_pitch);
    s.cameras_.push_back(cam);
  }

  s.rel_poses_.resize(spec.frame_count);
  for (int t = 1; t < spec.frame_count; ++t) {
    const CameraState& prev = s.cameras_[t - 1];
    const CameraState& cur = s.cameras_[t];
    const bool same_center = prev.center.x() == cur.center.x() &&
                             prev.center.y() == cur.center.y() &&
                             prev.center.z() == cur.center.z();
    if (same_center && prev.yaw == cur.yaw) {
      continue;  // static step, exact zero pose
    }
    RigidTransform rel;
    rel.r = cur.r_wc.transpose() * prev.r_wc;
    rel.tau = cur.r_wc.transpose() * (prev.center - cur.center);
    s.rel_poses_[t] = transform_to_pose(rel);
  }
  return s;
}

SceneFrame Scene::render(int t) const {
  if (t < 0 || t >= spec_.frame_count) {
    throw std::invalid_argument("scene: frame index out of range");
  }
  const CameraState& cam = cameras_[t];
  const CameraIntrinsics& k = spec_.intrinsics;

  std::vector<ObjectPose> obj_pos(spec_.objects.size());
  std::vector<char> obj_alive(spec_.objects.size(), 0);
  for (std::size_t i = 0; i < spec_.objects.size(); ++i) {
    obj_alive[i] = spec_.objects[i].spawn_frame <= t;
    if (obj_alive[i]) obj_pos[i] = object_at(spec_.objects[i], t);
  }

  SceneFrame frame;
  frame.image = ImageGrid(spec_.width, spec_.height);
  frame.depth = DepthGrid(spec_.width, spec_.height);
  frame.pose = rel_poses_[t];

  for (int py = 0; py < spec_.height; ++py) {
    for (int px = 0; px < spec_.width; ++px) {
      const Eigen::Vector3d dir_cam((px - k.cx) / k.fx, (py - k.cy) / k.fy, 1.0);
      const Eigen::Vector3d dir_w = cam.r_wc * dir_cam;

      // With dir_cam.z == 1 the ray parameter equals camera-frame depth.
      double best_s = std::numeric_limits<double>::infinity();
      int hit_obj = -1;
      if (dir_w.z() < 0.0) {
        best_s = -cam.center.z() / dir_w.z();
      }
      for (std::size_t i = 0; i < spec_.objects.size(); ++i) {
        if (!obj_alive[i]) continue;
        const ObjectSpec& o = spec_.objects[i];
        if (dir_w.y() == 0.0) continue;
        const double s = (obj_pos[i].y - cam.center.y()) / dir_w.y();
        if (s <= 0.0 || s >= best_s) continue;
        const double hx = cam.center.x() + s * dir_w.x();
        const double hz = cam.center.z() + s * dir_w.z();
        if (std::abs(hx - obj_pos[i].x) <= 0.5 * o.width && hz >= 0.0 &&
            hz <= o.height) {
          best_s = s;
          hit_obj = static_cast<int>(i);
        }
      }

      double intensity = 0.5;
      double disparity = 0.0;
      if (std::isfinite(best_s)) {
        const Eigen::Vector3d hit = cam.center + best_s * dir_w;
        if (hit_obj >= 0) {
          intensity = object_intensity(seed_, hit_obj,
                                       hit.x() - obj_pos[hit_obj].x, hit.z());
        } else {
          intensity = ground_intensity(seed_, hit.x(), hit.y());
        }
        disparity = depth_to_disparity(
            std::max(best_s, spec_.d_min), spec_.d_min, spec_.d_max);
      }
      frame.image.at(px, py) = static_cast<float>(intensity);
      frame.depth.at(px, py) = static_cast<float>(disparity);
    }
  }

  // Ground-truth boxes: projected billboard corners, kept when the box
  // intersects the image.
  for (std::size_t i = 0; i < spec_.objects.size(); ++i) {
    if (!obj_alive[i]) continue;
    const ObjectSpec& o = spec_.objects[i];
    const double xs[2] = {obj_pos[i].x - 0.5 * o.width,
                          obj_pos[i].x + 0.5 * o.width};
    const double zs[2] = {0.0, o.height};
    BBox box{std::numeric_limits<double>::infinity(),
             std::numeric_limits<double>::infinity(),
             -std::numeric_limits<double>::infinity(),
             -std::numeric_limits<double>::infinity()};
    bool ok = true;
    for (double cx : xs) {
      for (double cz : zs) {
        const Eigen::Vector3d pw(cx, obj_pos[i].y, cz);
        const Eigen::Vector3d pc = cam.r_wc.transpose() * (pw - cam.center);
        if (pc.z() <= 0.0) {
          ok = false;
          break;
        }
        const double u = k.fx * pc.x() / pc.z() + k.cx;
        const double v = k.fy * pc.y() / pc.z() + k.cy;
        box.x0 = std::min(box.x0, u);
        box.y0 = std::min(box.y0, v);
        box.x1 = std::max(box.x1, u);
        box.y1 = std::max(box.y1, v);
      }
      if (!ok) break;
    }
    if (!ok) continue;
    if (box.x1 < 0.0 || box.y1 < 0.0 || box.x0 > spec_.width - 1.0 ||
        box.y0 > spec_.height - 1.0) {
      continue;
    }
    frame.gt_boxes.push_back({static_cast<int>(i) + 1, box});
  }
  return frame;
}

}  // namespace depthtrack
