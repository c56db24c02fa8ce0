#pragma once

#include <vector>

#include "depthtrack/motion.hpp"

namespace depthtrack {

struct TrajectoryEntry {
  int frame{0};
  int id{0};
  BBox box;
};

/// Flat list of (frame, id, box) records; (frame, id) pairs are unique.
struct TrajectorySet {
  std::vector<TrajectoryEntry> entries;
};

struct MetricsReport {
  double mota{0.0};
  double idf1{0.0};
  int fp{0};
  int fn{0};
  int id_switches{0};
  int mt{0};
  int ml{0};
  int num_gt{0};
};

/// CLEAR procedure: per frame, persist still-valid pairings from the previous
/// frame, Hungarian-match the rest on IoU, and accumulate FP/FN/switches.
/// MOTA = 1 - (FP + FN + IDs) / num_gt. MT counts ground-truth tracks matched
/// in at least 80% of their frames, ML those matched in at most 20%.
/// The idf1 field of the report is left at 0; see idf1().
MetricsReport clear_metrics(const TrajectorySet& gt, const TrajectorySet& pred,
                            double iou_gate = 0.5);

/// Identity F1: ground-truth ids are globally matched one-to-one to
/// prediction ids maximizing gated frame co-occurrences (IDTP), then
/// IDF1 = 2 IDTP / (2 IDTP + IDFP + IDFN) where IDFP counts predictions with
/// no gated overlap against any ground truth in their frame and
/// IDFN = gt entries - IDTP.
double idf1(const TrajectorySet& gt, const TrajectorySet& pred,
            double iou_gate = 0.5);

}  // namespace depthtrack
