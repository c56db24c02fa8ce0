#include "depthtrack/loss_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace depthtrack {

HeatmapGrid gaussian_heatmap(const std::vector<std::pair<double, double>>& centers,
                             double sigma, int width, int height) {
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("gaussian_heatmap: sigma must be positive");
  }
  HeatmapGrid m(width, height);
  const double inv = 1.0 / (2.0 * sigma * sigma);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double v = 0.0;
      for (const auto& [cx, cy] : centers) {
        const double dx = x - cx;
        const double dy = y - cy;
        v += std::exp(-(dx * dx + dy * dy) * inv);
      }
      m.at(x, y) = std::min(v, 1.0);
    }
  }
  return m;
}

double focal_heatmap_loss(const HeatmapGrid& pred, const HeatmapGrid& gt,
                          int n_objects, const LossWeights& w) {
  if (pred.width != gt.width || pred.height != gt.height) {
    throw std::invalid_argument("focal_heatmap_loss: heatmap dimensions differ");
  }
  if (n_objects < 1) {
    throw std::invalid_argument("focal_heatmap_loss: n_objects must be >= 1");
  }
  constexpr double kEps = 1e-7;
  double total = 0.0;
  for (std::size_t i = 0; i < pred.data.size(); ++i) {
    const double p = std::clamp(pred.data[i], kEps, 1.0 - kEps);
    const double g = gt.data[i];
    if (g == 1.0) {
      total += std::pow(1.0 - p, w.alpha_focal) * std::log(p);
    } else {
      total += std::pow(1.0 - g, w.beta_focal) * std::pow(p, w.alpha_focal) *
               std::log(1.0 - p);
    }
  }
  return -total / static_cast<double>(n_objects);
}

double box_size_loss(const std::vector<SizedBox>& pred,
                     const std::vector<SizedBox>& gt) {
  if (pred.empty() || pred.size() != gt.size()) {
    throw std::invalid_argument("box_size_loss: box lists must be non-empty and equal length");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    total += std::abs(pred[i].cx - gt[i].cx) + std::abs(pred[i].cy - gt[i].cy);
    total += 0.1 * (std::abs(pred[i].w - gt[i].w) + std::abs(pred[i].h - gt[i].h));
  }
  return total;
}

double detection_loss(double l_heat, double l_box) {
  if (l_heat < 0.0 || l_box < 0.0) {
    throw std::invalid_argument("detection_loss: losses must be non-negative");
  }
  return l_heat + l_box;
}

double depth_loss(const std::vector<double>& reproj,
                  const std::vector<double>& smooth, double lambda) {
  if (reproj.empty() || reproj.size() != smooth.size()) {
    throw std::invalid_argument("depth_loss: scale lists must be non-empty and equal length");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < reproj.size(); ++i) {
    total += reproj[i] + lambda * smooth[i];
  }
  return total;
}

double uncertainty_total(double l_det, double l_depth, const LossWeights& w) {
  if (l_det < 0.0 || l_depth < 0.0) {
    throw std::invalid_argument("uncertainty_total: losses must be non-negative");
  }
  return 0.5 * (std::exp(-w.w1) * l_det + std::exp(-w.w2) * w.gamma * l_depth +
                w.w1 + w.w2);
}

std::pair<double, double> uncertainty_grad_w(double l_det, double l_depth,
                                             const LossWeights& w) {
  if (l_det < 0.0 || l_depth < 0.0) {
    throw std::invalid_argument("uncertainty_grad_w: losses must be non-negative");
  }
  const double dw1 = 0.5 * (1.0 - std::exp(-w.w1) * l_det);
  const double dw2 = 0.5 * (1.0 - std::exp(-w.w2) * w.gamma * l_depth);
  return {dw1, dw2};
}

}  // namespace depthtrack
