#include "depthtrack/pose_align.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "depthtrack/errors.hpp"

namespace depthtrack {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMinValidFraction = 0.25;

using PoseVec = std::array<double, 6>;

PoseVec to_vec(const Pose6DoF& p) {
  return {p.theta_x, p.theta_y, p.theta_z, p.t_x, p.t_y, p.t_z};
}

Pose6DoF to_pose(const PoseVec& v) {
  return Pose6DoF{v[0], v[1], v[2], v[3], v[4], v[5]};
}

template <typename Grid>
Grid downsample_half(const Grid& g) {
  const int w2 = std::max(1, g.width / 2);
  const int h2 = std::max(1, g.height / 2);
  Grid out(w2, h2);
  for (int y = 0; y < h2; ++y) {
    for (int x = 0; x < w2; ++x) {
      const int x0 = std::min(2 * x, g.width - 1);
      const int x1 = std::min(2 * x + 1, g.width - 1);
      const int y0 = std::min(2 * y, g.height - 1);
      const int y1 = std::min(2 * y + 1, g.height - 1);
      out.at(x, y) = static_cast<float>(
          0.25 * (static_cast<double>(g.at(x0, y0)) + g.at(x1, y0) +
                  g.at(x0, y1) + g.at(x1, y1)));
    }
  }
  return out;
}

// New pixel centers sit at old coordinate 2x + 0.5, so the projection maps
// as fx' = fx/2, cx' = (cx - 0.5)/2.
CameraIntrinsics downsample_half(const CameraIntrinsics& k) {
  return CameraIntrinsics{k.fx / 2.0, k.fy / 2.0, (k.cx - 0.5) / 2.0,
                          (k.cy - 0.5) / 2.0};
}

double image_variance(const ImageGrid& img) {
  if (img.size() == 0) return 0.0;
  double sum = 0.0, sum2 = 0.0;
  for (float v : img.data) {
    sum += v;
    sum2 += static_cast<double>(v) * v;
  }
  const double n = static_cast<double>(img.size());
  const double mean = sum / n;
  return std::max(0.0, sum2 / n - mean * mean);
}

struct ObjectiveResult {
  double value{kInf};
  double valid_fraction{0.0};
};

ObjectiveResult evaluate_objective(const Pose6DoF& pose, const ImageGrid& source,
                                   const ImageGrid& target,
                                   const DepthGrid& target_depth,
                                   const CameraIntrinsics& k,
                                   const AlignConfig& cfg) {
  const SynthesizedView synth = synthesize_view(
      source, target_depth, k, pose_to_transform(pose), cfg.d_min, cfg.d_max);
  ObjectiveResult res;
  res.valid_fraction = synth.valid_fraction();
  if (res.valid_fraction < kMinValidFraction) return res;

  const ErrorMap pe = photometric_error(target, synth.image, cfg.alpha);
  double sum = 0.0;
  long count = 0;
  for (std::size_t i = 0; i < pe.data.size(); ++i) {
    if (!synth.valid[i]) continue;
    sum += pe.data[i];
    ++count;
  }
  res.value = count > 0 ? sum / static_cast<double>(count) : kInf;
  return res;
}

// Derivative-free simplex descent (reflection/expansion/contraction/shrink).
// Stops when the simplex objective spread drops below `tol` or the evaluation
// budget runs out; restarts with a tighter simplex while budget remains.
// `on_eval` receives the best objective seen so far after every evaluation.
PoseVec nelder_mead(const std::function<double(const PoseVec&)>& f,
                    const PoseVec& start, const PoseVec& steps, int max_evals,
                    double tol, const std::function<void(double)>& on_eval) {
  constexpr double kReflect = 1.0;
  constexpr double kExpand = 2.0;
  constexpr double kContract = 0.5;
  constexpr double kShrink = 0.5;
  constexpr int kDim = 6;

  int evals = 0;
  PoseVec global_best = start;
  double global_best_f = kInf;
  const auto eval = [&](const PoseVec& x) {
    const double v = f(x);
    ++evals;
    if (v < global_best_f) {
      global_best_f = v;
      global_best = x;
    }
    if (on_eval) on_eval(global_best_f);
    return v;
  };

  double scale = 1.0;
  while (evals < max_evals) {
    std::array<PoseVec, kDim + 1> xs;
    std::array<double, kDim + 1> fs;
    xs[0] = global_best_f < kInf ? global_best : start;
    fs[0] = eval(xs[0]);
    for (int i = 0; i < kDim && evals < max_evals; ++i) {
      xs[i + 1] = xs[0];
      xs[i + 1][i] += steps[i] * scale;
      fs[i + 1] = eval(xs[i + 1]);
    }

    while (evals < max_evals) {
      std::array<int, kDim + 1> order;
      for (int i = 0; i <= kDim; ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        return fs[a] < fs[b] || (fs[a] == fs[b] && a < b);
      });
      const int best = order[0];
      const int second_worst = order[kDim - 1];
      const int worst = order[kDim];
      if (std::isfinite(fs[worst]) && fs[worst] - fs[best] <= tol) break;

      PoseVec centroid{};
      for (int i = 0; i <= kDim; ++i) {
        if (i == worst) continue;
        for (int d = 0; d < kDim; ++d) centroid[d] += xs[i][d];
      }
      for (int d = 0; d < kDim; ++d) centroid[d] /= kDim;

      PoseVec reflected;
      for (int d = 0; d < kDim; ++d) {
        reflected[d] = centroid[d] + kReflect * (centroid[d] - xs[worst][d]);
      }
      const double fr = eval(reflected);

      if (fr < fs[best]) {
        PoseVec expanded;
        for (int d = 0; d < kDim; ++d) {
          expanded[d] = centroid[d] + kExpand * (reflected[d] - centroid[d]);
        }
        const double fe = eval(expanded);
        if (fe < fr) {
          xs[worst] = expanded;
          fs[worst] = fe;
        } else {
          xs[worst] = reflected;
          fs[worst] = fr;
        }
      } else if (fr < fs[second_worst]) {
        xs[worst] = reflected;
        fs[worst] = fr;
      } else {
        const bool outside = fr < fs[worst];
        PoseVec contracted;
        const PoseVec& toward = outside ? reflected : xs[worst];
        for (int d = 0; d < kDim; ++d) {
          contracted[d] = centroid[d] + kContract * (toward[d] - centroid[d]);
        }
        const double fc = eval(contracted);
        if (fc < (outside ? fr : fs[worst])) {
          xs[worst] = contracted;
          fs[worst] = fc;
        } else {
          for (int i = 0; i <= kDim && evals < max_evals; ++i) {
            if (i == best) continue;
            for (int d = 0; d < kDim; ++d) {
              xs[i][d] = xs[best][d] + kShrink * (xs[i][d] - xs[best][d]);
            }
            fs[i] = eval(xs[i]);
          }
        }
      }
    }
    scale *= 0.25;  // restart tighter around the incumbent
  }
  return global_best;
}

void validate_config(const AlignConfig& cfg) {
  if (cfg.pyramid_levels < 1) {
    throw std::invalid_argument("align: pyramid_levels must be >= 1");
  }
  if (cfg.max_evals_per_level < 10) {
    throw std::invalid_argument("align: max_evals_per_level must be >= 10");
  }
  if (!(cfg.converge_tol > 0.0)) {
    throw std::invalid_argument("align: converge_tol must be positive");
  }
  if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0)) {
    throw std::invalid_argument("align: alpha must lie in [0, 1]");
  }
}

}  // namespace

double photometric_objective(const Pose6DoF& pose, const ImageGrid& source,
                             const ImageGrid& target,
                             const DepthGrid& target_depth,
                             const CameraIntrinsics& k, const AlignConfig& cfg) {
  if (!source.same_shape(target) || !source.same_shape(target_depth)) {
    throw std::invalid_argument("photometric_objective: dimensions differ");
  }
  validate_config(cfg);
  return evaluate_objective(pose, source, target, target_depth, k, cfg).value;
}

PoseEstimate estimate_pose(const ImageGrid& source, const ImageGrid& target,
                           const DepthGrid& target_depth,
                           const CameraIntrinsics& k, const AlignConfig& cfg,
                           AlignTrace* trace) {
  if (!source.same_shape(target) || !source.same_shape(target_depth)) {
    throw std::invalid_argument("estimate_pose: dimensions differ");
  }
  validate_config(cfg);
  constexpr double kTexVariance = 1e-8;
  if (image_variance(source) < kTexVariance ||
      image_variance(target) < kTexVariance) {
    throw DegenerateInputError("estimate_pose: textureless input images");
  }

  // Pyramid, finest level first.
  std::vector<ImageGrid> src_pyr{source}, tgt_pyr{target};
  std::vector<DepthGrid> dep_pyr{target_depth};
  std::vector<CameraIntrinsics> k_pyr{k};
  for (int l = 1; l < cfg.pyramid_levels; ++l) {
    src_pyr.push_back(downsample_half(src_pyr.back()));
    tgt_pyr.push_back(downsample_half(tgt_pyr.back()));
    dep_pyr.push_back(downsample_half(dep_pyr.back()));
    k_pyr.push_back(downsample_half(k_pyr.back()));
  }

  if (trace) trace->level_best.clear();

  const PoseVec steps{0.01, 0.01, 0.01, 0.05, 0.05, 0.05};
  PoseVec pose_vec{};
  for (int l = cfg.pyramid_levels - 1; l >= 0; --l) {
    std::vector<double>* level_trace = nullptr;
    if (trace) {
      trace->level_best.emplace_back();
      level_trace = &trace->level_best.back();
    }
    const auto objective = [&](const PoseVec& v) {
      return evaluate_objective(to_pose(v), src_pyr[l], tgt_pyr[l], dep_pyr[l],
                                k_pyr[l], cfg)
          .value;
    };
    const auto observe = [&](double best) {
      if (level_trace) level_trace->push_back(best);
    };
    pose_vec = nelder_mead(objective, pose_vec, steps, cfg.max_evals_per_level,
                           cfg.converge_tol, observe);
  }

  const ObjectiveResult final_res = evaluate_objective(
      to_pose(pose_vec), source, target, target_depth, k, cfg);
  if (final_res.valid_fraction < kMinValidFraction ||
      !std::isfinite(final_res.value)) {
    throw UnreliablePoseError(
        "estimate_pose: too little valid overlap at the recovered pose");
  }

  PoseEstimate est;
  est.pose = to_pose(pose_vec);
  est.residual = final_res.value;
  est.valid_fraction = final_res.valid_fraction;
  return est;
}

}  // namespace depthtrack
