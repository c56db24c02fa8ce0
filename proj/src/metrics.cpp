#include "depthtrack/metrics.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "depthtrack/association.hpp"

namespace depthtrack {

namespace {

using FrameIndex = std::map<int, std::vector<const TrajectoryEntry*>>;

FrameIndex index_by_frame(const TrajectorySet& set) {
  FrameIndex idx;
  for (const auto& e : set.entries) idx[e.frame].push_back(&e);
  // Stable per-frame ordering by id for deterministic tie handling.
  for (auto& [frame, list] : idx) {
    std::sort(list.begin(), list.end(),
              [](const TrajectoryEntry* a, const TrajectoryEntry* b) {
                return a->id < b->id;
              });
  }
  return idx;
}

void check_inputs(const TrajectorySet& gt, double iou_gate) {
  if (!(iou_gate > 0.0 && iou_gate < 1.0)) {
    throw std::invalid_argument("iou_gate must lie in (0, 1)");
  }
  if (gt.entries.empty()) {
    throw std::invalid_argument("metrics require non-empty ground truth");
  }
}

}  // namespace

MetricsReport clear_metrics(const TrajectorySet& gt, const TrajectorySet& pred,
                            double iou_gate) {
  check_inputs(gt, iou_gate);

  const FrameIndex gt_frames = index_by_frame(gt);
  const FrameIndex pred_frames = index_by_frame(pred);

  std::map<int, int> frame_span;     // gt id -> frames present
  std::map<int, int> frame_matched;  // gt id -> frames matched
  for (const auto& e : gt.entries) frame_span[e.id] += 1;

  MetricsReport rep;
  rep.num_gt = static_cast<int>(gt.entries.size());

  std::unordered_map<int, int> pairing;       // previous frame's gt -> pred id
  std::unordered_map<int, int> last_matched;  // persists across gaps

  std::vector<int> frames;
  for (const auto& [f, _] : gt_frames) frames.push_back(f);
  for (const auto& [f, _] : pred_frames) {
    if (!gt_frames.count(f)) frames.push_back(f);
  }
  std::sort(frames.begin(), frames.end());

  for (int f : frames) {
    static const std::vector<const TrajectoryEntry*> kNone;
    const auto& gts = gt_frames.count(f) ? gt_frames.at(f) : kNone;
    const auto& preds = pred_frames.count(f) ? pred_frames.at(f) : kNone;

    std::vector<char> gt_done(gts.size(), 0), pred_done(preds.size(), 0);
    std::unordered_map<int, int> next_pairing;

    const auto record_match = [&](const TrajectoryEntry* g, const TrajectoryEntry* p) {
      auto it = last_matched.find(g->id);
      if (it != last_matched.end() && it->second != p->id) {
        rep.id_switches += 1;
      }
      last_matched[g->id] = p->id;
      next_pairing[g->id] = p->id;
      frame_matched[g->id] += 1;
    };

    // Persist pairings from the previous frame while still above the gate.
    for (std::size_t gi = 0; gi < gts.size(); ++gi) {
      const auto it = pairing.find(gts[gi]->id);
      if (it == pairing.end()) continue;
      for (std::size_t pi = 0; pi < preds.size(); ++pi) {
        if (pred_done[pi] || preds[pi]->id != it->second) continue;
        if (iou(gts[gi]->box, preds[pi]->box) >= iou_gate) {
          gt_done[gi] = 1;
          pred_done[pi] = 1;
          record_match(gts[gi], preds[pi]);
        }
        break;
      }
    }

    // Hungarian on the remainder, maximizing IoU.
    std::vector<int> free_gt, free_pred;
    for (std::size_t gi = 0; gi < gts.size(); ++gi) {
      if (!gt_done[gi]) free_gt.push_back(static_cast<int>(gi));
    }
    for (std::size_t pi = 0; pi < preds.size(); ++pi) {
      if (!pred_done[pi]) free_pred.push_back(static_cast<int>(pi));
    }
    if (!free_gt.empty() && !free_pred.empty()) {
      std::vector<std::vector<double>> cost(free_gt.size(),
                                            std::vector<double>(free_pred.size()));
      for (std::size_t r = 0; r < free_gt.size(); ++r) {
        for (std::size_t c = 0; c < free_pred.size(); ++c) {
          const double overlap = iou(gts[free_gt[r]]->box, preds[free_pred[c]]->box);
          cost[r][c] = overlap >= iou_gate
                           ? 1.0 - overlap
                           : std::numeric_limits<double>::infinity();
        }
      }
      const MatchResult m = linear_assignment(cost, 1.0 - iou_gate);
      for (const auto& [r, c] : m.matches) {
        gt_done[free_gt[r]] = 1;
        pred_done[free_pred[c]] = 1;
        record_match(gts[free_gt[r]], preds[free_pred[c]]);
      }
    }

    for (std::size_t gi = 0; gi < gts.size(); ++gi) {
      if (!gt_done[gi]) rep.fn += 1;
    }
    for (std::size_t pi = 0; pi < preds.size(); ++pi) {
      if (!pred_done[pi]) rep.fp += 1;
    }
    pairing = std::move(next_pairing);
  }

  rep.mota = 1.0 - static_cast<double>(rep.fp + rep.fn + rep.id_switches) /
                       static_cast<double>(rep.num_gt);
  for (const auto& [id, span] : frame_span) {
    const double ratio = static_cast<double>(frame_matched[id]) / span;
    if (ratio >= 0.8) rep.mt += 1;
    if (ratio <= 0.2) rep.ml += 1;
  }
  return rep;
}

double idf1(const TrajectorySet& gt, const TrajectorySet& pred,
            double iou_gate) {
  check_inputs(gt, iou_gate);

  const FrameIndex gt_frames = index_by_frame(gt);
  const FrameIndex pred_frames = index_by_frame(pred);

  std::map<int, int> gt_ids, pred_ids;  // id -> dense index
  for (const auto& e : gt.entries) gt_ids.emplace(e.id, 0);
  for (const auto& e : pred.entries) pred_ids.emplace(e.id, 0);
  int next = 0;
  for (auto& [id, slot] : gt_ids) slot = next++;
  next = 0;
  for (auto& [id, slot] : pred_ids) slot = next++;

  std::vector<std::vector<long>> cooc(gt_ids.size(),
                                      std::vector<long>(pred_ids.size(), 0));
  long spatially_matched_preds = 0;
  for (const auto& [f, preds] : pred_frames) {
    const auto git = gt_frames.find(f);
    for (const auto* p : preds) {
      bool any = false;
      if (git != gt_frames.end()) {
        for (const auto* g : git->second) {
          if (iou(g->box, p->box) >= iou_gate) {
            cooc[gt_ids.at(g->id)][pred_ids.at(p->id)] += 1;
            any = true;
          }
        }
      }
      spatially_matched_preds += any ? 1 : 0;
    }
  }

  long max_cooc = 0;
  for (const auto& row : cooc) {
    for (long c : row) max_cooc = std::max(max_cooc, c);
  }
  std::vector<std::vector<double>> cost(cooc.size(),
                                        std::vector<double>(cooc.empty() ? 0 : cooc.front().size()));
  for (std::size_t r = 0; r < cooc.size(); ++r) {
    for (std::size_t c = 0; c < cooc[r].size(); ++c) {
      cost[r][c] = static_cast<double>(max_cooc - cooc[r][c]);
    }
  }
  long idtp = 0;
  if (!pred_ids.empty()) {
    const MatchResult m =
        linear_assignment(cost, std::numeric_limits<double>::infinity());
    for (const auto& [r, c] : m.matches) idtp += cooc[r][c];
  }

  const long idfn = static_cast<long>(gt.entries.size()) - idtp;
  const long idfp = static_cast<long>(pred.entries.size()) - spatially_matched_preds;
  return 2.0 * static_cast<double>(idtp) /
         static_cast<double>(2 * idtp + idfp + idfn);
}

}  // namespace depthtrack
