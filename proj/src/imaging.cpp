#include "depthtrack/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace depthtrack {

namespace {

constexpr double kSsimC1 = 0.01 * 0.01;
constexpr double kSsimC2 = 0.03 * 0.03;

int clamp_index(int v, int hi) { return std::clamp(v, 0, hi); }

}  // namespace

std::optional<double> bilinear_sample(const ImageGrid& img, double x, double y) {
  if (x < 0.0 || y < 0.0 || x > img.width - 1.0 || y > img.height - 1.0) {
    return std::nullopt;
  }
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const int x1 = std::min(x0 + 1, img.width - 1);
  const int y1 = std::min(y0 + 1, img.height - 1);
  const double fx = x - x0;
  const double fy = y - y0;

  const double v00 = img.at(x0, y0);
  const double v10 = img.at(x1, y0);
  const double v01 = img.at(x0, y1);
  const double v11 = img.at(x1, y1);
  const double top = v00 + (v10 - v00) * fx;
  const double bot = v01 + (v11 - v01) * fx;
  return top + (bot - top) * fy;
}

double SynthesizedView::valid_fraction() const {
  if (valid.empty()) return 0.0;
  std::size_t n = 0;
  for (auto v : valid) n += (v != 0);
  return static_cast<double>(n) / static_cast<double>(valid.size());
}

SynthesizedView synthesize_view(const ImageGrid& source,
                                const DepthGrid& target_depth,
                                const CameraIntrinsics& k,
                                const RigidTransform& t,
                                double d_min, double d_max) {
  if (!source.same_shape(target_depth)) {
    throw std::invalid_argument("synthesize_view: source and depth dimensions differ");
  }
  SynthesizedView out;
  out.image = ImageGrid(source.width, source.height, 0.0f);
  out.valid.assign(source.size(), 0);

  for (int y = 0; y < source.height; ++y) {
    for (int x = 0; x < source.width; ++x) {
      const double depth = disparity_to_depth(target_depth.at(x, y), d_min, d_max);
      const ReprojectedPoint p = reproject_point(x, y, depth, k, t);
      if (p.depth <= 0.0) continue;
      const auto sample = bilinear_sample(source, p.u, p.v);
      if (!sample) continue;
      out.image.at(x, y) = static_cast<float>(*sample);
      out.valid[static_cast<std::size_t>(y) * source.width + x] = 1;
    }
  }
  return out;
}

ScalarField ssim_map(const ImageGrid& a, const ImageGrid& b) {
  if (!a.same_shape(b)) {
    throw std::invalid_argument("ssim_map: image dimensions differ");
  }
  ScalarField out(a.width, a.height);
  for (int y = 0; y < a.height; ++y) {
    for (int x = 0; x < a.width; ++x) {
      double sum_a = 0.0, sum_b = 0.0, sum_aa = 0.0, sum_bb = 0.0, sum_ab = 0.0;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int xs = clamp_index(x + dx, a.width - 1);
          const int ys = clamp_index(y + dy, a.height - 1);
          const double va = a.at(xs, ys);
          const double vb = b.at(xs, ys);
          sum_a += va;
          sum_b += vb;
          sum_aa += va * va;
          sum_bb += vb * vb;
          sum_ab += va * vb;
        }
      }
      const double mu_a = sum_a / 9.0;
      const double mu_b = sum_b / 9.0;
      const double var_a = sum_aa / 9.0 - mu_a * mu_a;
      const double var_b = sum_bb / 9.0 - mu_b * mu_b;
      const double cov = sum_ab / 9.0 - mu_a * mu_b;
      const double num = (2.0 * mu_a * mu_b + kSsimC1) * (2.0 * cov + kSsimC2);
      const double den = (mu_a * mu_a + mu_b * mu_b + kSsimC1) * (var_a + var_b + kSsimC2);
      out.data[static_cast<std::size_t>(y) * a.width + x] = num / den;
    }
  }
  return out;
}

ErrorMap photometric_error(const ImageGrid& a, const ImageGrid& b, double alpha) {
  if (!a.same_shape(b)) {
    throw std::invalid_argument("photometric_error: image dimensions differ");
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("photometric_error: alpha must lie in [0, 1]");
  }
  const ScalarField ssim = ssim_map(a, b);
  ErrorMap out(a.width, a.height);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double l1 = std::abs(static_cast<double>(a.data[i]) - b.data[i]);
    const double e = 0.5 * alpha * (1.0 - ssim.data[i]) + (1.0 - alpha) * l1;
    out.data[i] = std::max(e, 0.0);
  }
  return out;
}

ErrorMap min_reprojection(const std::vector<ErrorMap>& maps) {
  if (maps.empty()) {
    throw std::invalid_argument("min_reprojection: at least one map required");
  }
  for (const auto& m : maps) {
    if (m.width != maps.front().width || m.height != maps.front().height) {
      throw std::invalid_argument("min_reprojection: map dimensions differ");
    }
  }
  ErrorMap out(maps.front().width, maps.front().height);
  const std::size_t n = out.data.size();
  for (std::size_t i = 0; i < n; ++i) {
    double best = 0.0;
    bool any = false;
    for (const auto& m : maps) {
      if (!m.valid[i]) continue;
      if (!any || m.data[i] < best) best = m.data[i];
      any = true;
    }
    out.data[i] = any ? best : 0.0;
    out.valid[i] = any ? 1 : 0;
  }
  return out;
}

double smoothness_loss(const DepthGrid& d, const ImageGrid& i) {
  if (!d.same_shape(i)) {
    throw std::invalid_argument("smoothness_loss: dimensions differ");
  }
  if (d.size() == 0) return 0.0;
  double total = 0.0;
  for (int y = 0; y < d.height; ++y) {
    for (int x = 0; x < d.width; ++x) {
      double term = 0.0;
      if (x + 1 < d.width) {
        const double gd = std::abs(static_cast<double>(d.at(x + 1, y)) - d.at(x, y));
        const double gi = std::abs(static_cast<double>(i.at(x + 1, y)) - i.at(x, y));
        term += gd * std::exp(-gi);
      }
      if (y + 1 < d.height) {
        const double gd = std::abs(static_cast<double>(d.at(x, y + 1)) - d.at(x, y));
        const double gi = std::abs(static_cast<double>(i.at(x, y + 1)) - i.at(x, y));
        term += gd * std::exp(-gi);
      }
      total += term;
    }
  }
  return total / static_cast<double>(d.size());
}

}  // namespace depthtrack
