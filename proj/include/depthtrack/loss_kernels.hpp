#pragma once

#include <utility>
#include <vector>

namespace depthtrack {

/// Object-center probability grid, values in [0, 1].
struct HeatmapGrid {
  int width{0};
  int height{0};
  std::vector<double> data;

  HeatmapGrid() = default;
  HeatmapGrid(int w, int h)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h, 0.0) {}

  double at(int x, int y) const {
    return data[static_cast<std::size_t>(y) * width + x];
  }
  double& at(int x, int y) {
    return data[static_cast<std::size_t>(y) * width + x];
  }
};

struct LossWeights {
  double alpha_focal{2.0};
  double beta_focal{4.0};
  double sigma{2.0};      // Gaussian radius in pixels
  double lambda{0.001};   // smoothness weight
  double gamma{50.0};     // depth-loss scale
  double w1{0.0};         // detection log-variance
  double w2{0.0};         // depth log-variance
};

/// Sum of unit Gaussians exp(-(dist^2) / (2 sigma^2)) around the centers,
/// clamped to 1.
HeatmapGrid gaussian_heatmap(const std::vector<std::pair<double, double>>& centers,
                             double sigma, int width, int height);

/// Focal loss between a predicted and a ground-truth heatmap, normalized by
/// the object count. Predictions are clamped to [1e-7, 1 - 1e-7] before logs.
double focal_heatmap_loss(const HeatmapGrid& pred, const HeatmapGrid& gt,
                          int n_objects, const LossWeights& w);

/// Center + size of a box, the parameterization the size loss consumes.
struct SizedBox {
  double cx{0.0};
  double cy{0.0};
  double w{0.0};
  double h{0.0};
};

/// Sum over boxes of L1 center difference + 0.1 * L1 size difference.
double box_size_loss(const std::vector<SizedBox>& pred,
                     const std::vector<SizedBox>& gt);

/// l_heat + l_box; rejects negative inputs.
double detection_loss(double l_heat, double l_box);

/// Sum over scales of reproj[i] + lambda * smooth[i].
double depth_loss(const std::vector<double>& reproj,
                  const std::vector<double>& smooth, double lambda);

/// 0.5 * (exp(-w1) * l_det + exp(-w2) * gamma * l_depth + w1 + w2).
double uncertainty_total(double l_det, double l_depth, const LossWeights& w);

/// Analytic partials of uncertainty_total with respect to (w1, w2).
std::pair<double, double> uncertainty_grad_w(double l_det, double l_depth,
                                             const LossWeights& w);

}  // namespace depthtrack
