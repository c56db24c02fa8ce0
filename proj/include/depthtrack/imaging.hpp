#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "depthtrack/geometry.hpp"

namespace depthtrack {

namespace detail {

/// Row-major float raster shared by the image and depth grid types.
struct Raster {
  int width{0};
  int height{0};
  std::vector<float> data;

  Raster() = default;
  Raster(int w, int h, float fill = 0.0f)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

  float at(int x, int y) const {
    return data[static_cast<std::size_t>(y) * width + x];
  }
  float& at(int x, int y) {
    return data[static_cast<std::size_t>(y) * width + x];
  }
  std::size_t size() const { return data.size(); }
  bool same_shape(const Raster& o) const {
    return width == o.width && height == o.height;
  }
};

}  // namespace detail

/// Single-channel image, intensities in [0, 1].
struct ImageGrid : detail::Raster {
  using detail::Raster::Raster;
};

/// Disparity field, values in [0, 1]; convert with disparity_to_depth.
struct DepthGrid : detail::Raster {
  using detail::Raster::Raster;
};

/// Per-pixel non-negative error values with a validity mask.
struct ErrorMap {
  int width{0};
  int height{0};
  std::vector<double> data;
  std::vector<std::uint8_t> valid;

  ErrorMap() = default;
  ErrorMap(int w, int h)
      : width(w),
        height(h),
        data(static_cast<std::size_t>(w) * h, 0.0),
        valid(static_cast<std::size_t>(w) * h, 1) {}

  double at(int x, int y) const {
    return data[static_cast<std::size_t>(y) * width + x];
  }
  bool is_valid(int x, int y) const {
    return valid[static_cast<std::size_t>(y) * width + x] != 0;
  }
};

/// Grid of unconstrained per-pixel scores (SSIM values live in [-1, 1]).
struct ScalarField {
  int width{0};
  int height{0};
  std::vector<double> data;

  ScalarField() = default;
  ScalarField(int w, int h)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h, 0.0) {}

  double at(int x, int y) const {
    return data[static_cast<std::size_t>(y) * width + x];
  }
};

/// Interpolated read at continuous coordinates. Integer coordinates return
/// the exact pixel; anything outside [0, w-1] x [0, h-1] returns nullopt.
std::optional<double> bilinear_sample(const ImageGrid& img, double x, double y);

struct SynthesizedView {
  ImageGrid image;
  std::vector<std::uint8_t> valid;

  double valid_fraction() const;
};

/// Reconstructs the target view from the source image: each target pixel's
/// disparity becomes a metric depth, the pixel is reprojected through t into
/// the source view, and the source is sampled there. Pixels that land out of
/// bounds or behind the source camera are marked invalid (image value 0).
SynthesizedView synthesize_view(const ImageGrid& source,
                                const DepthGrid& target_depth,
                                const CameraIntrinsics& k,
                                const RigidTransform& t,
                                double d_min, double d_max);

/// Per-pixel SSIM over a 3x3 box window (C1 = 0.01^2, C2 = 0.03^2), border
/// pixels use edge replication.
ScalarField ssim_map(const ImageGrid& a, const ImageGrid& b);

/// pe = (alpha/2) * (1 - SSIM) + (1 - alpha) * |a - b|, per pixel.
ErrorMap photometric_error(const ImageGrid& a, const ImageGrid& b, double alpha);

/// Per-pixel minimum over the maps, restricted to pixels valid in at least
/// one input; pixels valid nowhere come back invalid.
ErrorMap min_reprojection(const std::vector<ErrorMap>& maps);

/// Edge-aware smoothness: mean of |dx d| * exp(-|dx i|) + |dy d| * exp(-|dy i|)
/// with forward differences (zero along the last row/column).
double smoothness_loss(const DepthGrid& d, const ImageGrid& i);

}  // namespace depthtrack
