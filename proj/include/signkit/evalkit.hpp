#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "signkit/dataset.hpp"
#include "signkit/detector.hpp"

namespace signkit {

struct EvalConfig {
  std::vector<double> iou_thresholds{0.50, 0.55, 0.60, 0.65, 0.70,
                                     0.75, 0.80, 0.85, 0.90, 0.95};
  double min_side_px = 0.0;   // ground truths with a smaller bbox side are ignored
  double ave_match_iou = 0.5; // matching threshold for AVE and precision/recall
};

enum class DetLabel : unsigned char { TruePositive, FalsePositive, Ignored };

// Per-image greedy matching outcome. Detections are ranked by
// detection_order; each takes the unmatched same-class counted ground truth
// of highest IoU when that IoU >= threshold. Detections overlapping only
// ignored ground truths are excluded from FP attribution.
struct ImageMatch {
  std::vector<DetLabel> det_labels;  // per detection, original order
  std::vector<int> det_gt;           // matched gt index or -1
  std::vector<bool> gt_counted;      // survives difficult/min-side filtering
  std::vector<int> gt_det;           // matched detection index or -1
  int true_positives = 0;
  int false_positives = 0;
  int false_negatives = 0;
};

ImageMatch match_detections(std::span<const Detection> detections,
                            std::span<const GroundTruthSign> ground_truths,
                            double iou_threshold, double min_side_px = 0.0);

// Area under the precision-recall curve, all-point interpolation with the
// monotone precision envelope. `scored` holds (score, is_true_positive) for
// every counted detection. Absent when there is nothing to measure.
std::optional<double> average_precision(std::vector<std::pair<double, bool>> scored,
                                        int gt_count);

enum class AveMode { Boundary, BboxCorners };

// Mean over matched pairs of the per-pair mean corner distance. Boundary mode
// compares projected boundaries; bbox mode compares the detection's
// circumscribed-rectangle corners against the ground-truth pose vertices.
std::optional<double> average_vertex_error(
    std::span<const std::pair<Detection, GroundTruthSign>> pairs, AveMode mode);

struct MatchedPairRecord {
  std::string image_id;
  int det_index = 0;
  int gt_index = 0;
  double iou = 0.0;
};

struct ShapeEval {
  ShapeClass shape = ShapeClass::Rectangle;
  int gt_count = 0;
  int true_positives = 0;
  int false_positives = 0;
  int false_negatives = 0;
  double precision = 0.0;
  double recall = 0.0;
  std::map<double, std::optional<double>> ap_by_iou;
  std::optional<double> ave;
};

struct EvalReport {
  EvalConfig config;
  std::vector<ShapeEval> shapes;
  std::map<double, std::optional<double>> map_by_iou;
  std::optional<double> ave;  // pooled over all matched pairs
  std::vector<MatchedPairRecord> matches;
};

// Dataset-level evaluation; detections are paired to ground-truth images by
// id (detection images without a ground-truth entry raise DataError).
EvalReport evaluate(const DetectionSet& detections, const DatasetFile& ground_truth,
                    const EvalConfig& config = {});

struct SweepRow {
  double iou = 0.0;
  std::optional<double> map;
  std::map<ShapeClass, std::optional<double>> shape_ap;
};

std::vector<SweepRow> map_vs_iou_sweep(const DetectionSet& detections,
                                       const DatasetFile& ground_truth,
                                       const EvalConfig& config = {});

}  // namespace signkit
