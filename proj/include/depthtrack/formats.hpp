#pragma once

#include <map>
#include <string>
#include <vector>

#include "depthtrack/association.hpp"
#include "depthtrack/geometry.hpp"
#include "depthtrack/imaging.hpp"
#include "depthtrack/metrics.hpp"
#include "depthtrack/pose_align.hpp"
#include "depthtrack/simulator.hpp"

namespace depthtrack {

/// Validated run configuration assembled from `key = value` files.
struct RunConfig {
  CameraIntrinsics camera;
  TrackerConfig tracker;
  AlignConfig align;
  double d_min{0.1};
  double d_max{100.0};
};

/// MOT-style detections: `frame,id,x,y,w,h,conf[,...]`, 1-indexed frames,
/// id -1 allowed, (x, y, w, h) as top-left plus size. Trailing fields are
/// ignored. Throws FormatError naming the offending line.
std::map<int, std::vector<Detection>> read_detections(const std::string& path);

/// Same line format as read_detections but requires ids >= 0 and unique
/// (frame, id) pairs.
TrajectorySet read_trajectories(const std::string& path);

/// Writes `frame,id,x,y,w,h,1,-1,-1,-1` with 6-decimal fixed formatting.
void write_trajectories(const TrajectorySet& set, const std::string& path);

/// Binary container: magic "DPTH", width and height as 32-bit little-endian
/// unsigned integers, then width*height little-endian IEEE-754 floats in
/// [0, 1], row-major. Errors carry the byte offset.
DepthGrid read_depth_grid(const std::string& path);
void write_depth_grid(const DepthGrid& grid, const std::string& path);

/// Binary PGM (P5) or PPM (P6, converted to luma), maxval 255 only.
ImageGrid read_image(const std::string& path);

/// Binary PGM, values rounded to [0, 255].
void write_pgm(const ImageGrid& img, const std::string& path);

/// One pose per line: six space-separated numbers
/// (theta_x theta_y theta_z t_x t_y t_z).
std::vector<Pose6DoF> read_poses(const std::string& path);
void write_poses(const std::vector<Pose6DoF>& poses, const std::string& path);

/// Line-oriented `key = value` configuration with dotted keys and `#`
/// comments. Unknown keys, type mismatches, and out-of-range values raise
/// ConfigError naming the key. Absent keys keep their defaults.
RunConfig read_config(const std::string& path);

/// Layered variant: parses `path` on top of `base`.
RunConfig read_config(const std::string& path, RunConfig base);

/// Writes the subset of keys a synthesized dataset pins down (camera.* and
/// depth.*) so the tracker consumes the same geometry the renderer used.
void write_dataset_config(const RunConfig& cfg, const std::string& path);

/// Scene description in the same `key = value` syntax; `object` and `jerk`
/// keys may repeat, taking comma-separated tuples
/// (spawn,x,y,vx,vy,w,h) and (frame,dx,dy,dyaw).
SceneSpec read_scene_spec(const std::string& path);

}  // namespace depthtrack
