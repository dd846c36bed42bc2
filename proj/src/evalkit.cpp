#include "signkit/evalkit.hpp"

#include <algorithm>
#include <numeric>

namespace signkit {

namespace {

bool gt_is_counted(const GroundTruthSign& gt, double min_side_px) {
  if (gt.difficult) return false;
  return AABox::of_quad(gt.template_vertices).min_side() >= min_side_px;
}

struct ShapeAccumulator {
  std::vector<std::pair<double, bool>> scored;  // (score, is_tp), counted dets only
  int gt_count = 0;
};

std::vector<ShapeClass> detection_shapes() {
  return {ShapeClass::Rectangle, ShapeClass::Diamond, ShapeClass::Octagon};
}

}  // namespace

ImageMatch match_detections(std::span<const Detection> detections,
                            std::span<const GroundTruthSign> ground_truths,
                            double iou_threshold, double min_side_px) {
  ImageMatch result;
  result.det_labels.assign(detections.size(), DetLabel::FalsePositive);
  result.det_gt.assign(detections.size(), -1);
  result.gt_counted.resize(ground_truths.size());
  result.gt_det.assign(ground_truths.size(), -1);

  std::vector<AABox> gt_boxes;
  gt_boxes.reserve(ground_truths.size());
  for (std::size_t g = 0; g < ground_truths.size(); ++g) {
    gt_boxes.push_back(AABox::of_quad(ground_truths[g].template_vertices));
    result.gt_counted[g] = gt_is_counted(ground_truths[g], min_side_px);
  }

  std::vector<std::size_t> order(detections.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (detection_order(detections[a], detections[b])) return true;
    if (detection_order(detections[b], detections[a])) return false;
    return a < b;
  });

  for (std::size_t d : order) {
    const Detection& det = detections[d];
    double best_iou = 0.0;
    int best_gt = -1;
    double best_ignored_iou = 0.0;
    for (std::size_t g = 0; g < ground_truths.size(); ++g) {
      if (ground_truths[g].shape != det.shape) continue;
      const double v = iou(det.bbox, gt_boxes[g]);
      if (result.gt_counted[g] && result.gt_det[g] < 0) {
        if (v > best_iou) {
          best_iou = v;
          best_gt = static_cast<int>(g);
        }
      } else if (!result.gt_counted[g]) {
        best_ignored_iou = std::max(best_ignored_iou, v);
      }
    }
    if (best_gt >= 0 && best_iou >= iou_threshold) {
      result.det_labels[d] = DetLabel::TruePositive;
      result.det_gt[d] = best_gt;
      result.gt_det[static_cast<std::size_t>(best_gt)] = static_cast<int>(d);
      ++result.true_positives;
    } else if (best_ignored_iou >= iou_threshold) {
      result.det_labels[d] = DetLabel::Ignored;
    } else {
      ++result.false_positives;
    }
  }

  for (std::size_t g = 0; g < ground_truths.size(); ++g) {
    if (result.gt_counted[g] && result.gt_det[g] < 0) ++result.false_negatives;
  }
  return result;
}

std::optional<double> average_precision(std::vector<std::pair<double, bool>> scored,
                                        int gt_count) {
  if (gt_count == 0) {
    if (scored.empty()) return std::nullopt;
    return 0.0;
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });

  // Precision/recall points after each detection, then the monotone envelope
  // integrated over recall increments.
  double ap = 0.0;
  std::vector<double> precisions(scored.size());
  std::vector<double> recalls(scored.size());
  int tp = 0;
  for (std::size_t i = 0; i < scored.size(); ++i) {
    if (scored[i].second) ++tp;
    precisions[i] = static_cast<double>(tp) / static_cast<double>(i + 1);
    recalls[i] = static_cast<double>(tp) / gt_count;
  }
  for (std::size_t i = scored.size(); i-- > 1;) {
    precisions[i - 1] = std::max(precisions[i - 1], precisions[i]);
  }
  double previous_recall = 0.0;
  for (std::size_t i = 0; i < scored.size(); ++i) {
    ap += (recalls[i] - previous_recall) * precisions[i];
    previous_recall = recalls[i];
  }
  return ap;
}

std::optional<double> average_vertex_error(
    std::span<const std::pair<Detection, GroundTruthSign>> pairs, AveMode mode) {
  if (pairs.empty()) return std::nullopt;
  double total = 0.0;
  for (const auto& [det, gt] : pairs) {
    double pair_error = 0.0;
    if (mode == AveMode::Boundary) {
      if (det.boundary.size() != gt.boundary.size()) {
        throw InconsistentShapes("matched pair has differing boundary corner counts");
      }
      for (std::size_t j = 0; j < gt.boundary.size(); ++j) {
        pair_error += distance(det.boundary[j], gt.boundary[j]);
      }
      pair_error /= static_cast<double>(gt.boundary.size());
    } else {
      const Quad corners = det.bbox.corners();
      for (std::size_t j = 0; j < 4; ++j) {
        pair_error += distance(corners[j], gt.template_vertices[j]);
      }
      pair_error /= 4.0;
    }
    total += pair_error;
  }
  return total / static_cast<double>(pairs.size());
}

EvalReport evaluate(const DetectionSet& detections, const DatasetFile& ground_truth,
                    const EvalConfig& config) {
  for (double t : config.iou_thresholds) {
    if (t <= 0.0 || t >= 1.0) throw InvalidSpec("IoU thresholds must lie in (0,1)");
  }
  if (config.ave_match_iou <= 0.0 || config.ave_match_iou >= 1.0) {
    throw InvalidSpec("AVE match threshold must lie in (0,1)");
  }

  EvalReport report;
  report.config = config;

  std::map<std::string, const std::vector<Detection>*> dets_by_id;
  for (const auto& image : detections.images) {
    dets_by_id[image.id] = &image.detections;
  }
  for (const auto& image : detections.images) {
    bool found = false;
    for (const auto& gt_image : ground_truth.images) {
      if (gt_image.id == image.id) {
        found = true;
        break;
      }
    }
    if (!found) throw DataError("detections reference unknown image '" + image.id + "'");
  }

  static const std::vector<Detection> kNoDetections;

  // Per-threshold, per-shape scored lists pooled across images.
  std::map<double, std::map<ShapeClass, ShapeAccumulator>> pools;
  std::map<ShapeClass, ShapeAccumulator>* base_pool = nullptr;
  std::vector<double> thresholds = config.iou_thresholds;
  if (std::find(thresholds.begin(), thresholds.end(), config.ave_match_iou) ==
      thresholds.end()) {
    thresholds.push_back(config.ave_match_iou);
  }

  std::map<ShapeClass, std::vector<std::pair<Detection, GroundTruthSign>>> pairs_by_shape;
  std::map<ShapeClass, std::array<int, 3>> counts_by_shape;  // tp, fp, fn at ave iou
  for (ShapeClass s : detection_shapes()) counts_by_shape[s] = {0, 0, 0};

  for (const auto& gt_image : ground_truth.images) {
    const auto it = dets_by_id.find(gt_image.id);
    const std::vector<Detection>& dets = it == dets_by_id.end() ? kNoDetections : *it->second;

    for (double t : thresholds) {
      const ImageMatch m =
          match_detections(dets, gt_image.signs, t, config.min_side_px);
      auto& pool = pools[t];
      for (std::size_t g = 0; g < gt_image.signs.size(); ++g) {
        if (m.gt_counted[g]) ++pool[gt_image.signs[g].shape].gt_count;
      }
      for (std::size_t d = 0; d < dets.size(); ++d) {
        if (m.det_labels[d] == DetLabel::Ignored) continue;
        pool[dets[d].shape].scored.emplace_back(
            dets[d].score, m.det_labels[d] == DetLabel::TruePositive);
      }

      if (t == config.ave_match_iou) {
        for (std::size_t d = 0; d < dets.size(); ++d) {
          if (m.det_labels[d] == DetLabel::TruePositive) {
            const auto& gt = gt_image.signs[static_cast<std::size_t>(m.det_gt[d])];
            pairs_by_shape[dets[d].shape].emplace_back(dets[d], gt);
            report.matches.push_back({gt_image.id, static_cast<int>(d), m.det_gt[d],
                                      iou(dets[d].bbox,
                                          AABox::of_quad(gt.template_vertices))});
            ++counts_by_shape[dets[d].shape][0];
          } else if (m.det_labels[d] == DetLabel::FalsePositive) {
            ++counts_by_shape[dets[d].shape][1];
          }
        }
        for (std::size_t g = 0; g < gt_image.signs.size(); ++g) {
          if (m.gt_counted[g] && m.gt_det[g] < 0) {
            ++counts_by_shape[gt_image.signs[g].shape][2];
          }
        }
      }
    }
  }
  base_pool = &pools[config.ave_match_iou];

  std::vector<std::pair<Detection, GroundTruthSign>> all_pairs;
  for (ShapeClass s : detection_shapes()) {
    ShapeEval eval;
    eval.shape = s;
    eval.gt_count = (*base_pool)[s].gt_count;
    eval.true_positives = counts_by_shape[s][0];
    eval.false_positives = counts_by_shape[s][1];
    eval.false_negatives = counts_by_shape[s][2];
    const int detected = eval.true_positives + eval.false_positives;
    eval.precision = detected > 0 ? static_cast<double>(eval.true_positives) / detected : 0.0;
    const int counted = eval.true_positives + eval.false_negatives;
    eval.recall = counted > 0 ? static_cast<double>(eval.true_positives) / counted : 0.0;
    for (double t : config.iou_thresholds) {
      auto& acc = pools[t][s];
      eval.ap_by_iou[t] = average_precision(acc.scored, acc.gt_count);
    }
    eval.ave = average_vertex_error(pairs_by_shape[s], AveMode::Boundary);
    all_pairs.insert(all_pairs.end(), pairs_by_shape[s].begin(), pairs_by_shape[s].end());
    report.shapes.push_back(std::move(eval));
  }
  report.ave = average_vertex_error(all_pairs, AveMode::Boundary);

  // mAP: mean of per-shape APs, skipping shapes with no counted ground truth.
  for (double t : config.iou_thresholds) {
    double sum = 0.0;
    int contributing = 0;
    for (const auto& shape_eval : report.shapes) {
      if (shape_eval.gt_count == 0) continue;
      const auto& ap = shape_eval.ap_by_iou.at(t);
      sum += ap.value_or(0.0);
      ++contributing;
    }
    report.map_by_iou[t] =
        contributing > 0 ? std::optional<double>(sum / contributing) : std::nullopt;
  }
  return report;
}

std::vector<SweepRow> map_vs_iou_sweep(const DetectionSet& detections,
                                       const DatasetFile& ground_truth,
                                       const EvalConfig& config) {
  const EvalReport report = evaluate(detections, ground_truth, config);
  std::vector<SweepRow> rows;
  for (double t : config.iou_thresholds) {
    SweepRow row;
    row.iou = t;
    row.map = report.map_by_iou.at(t);
    for (const auto& shape_eval : report.shapes) {
      row.shape_ap[shape_eval.shape] = shape_eval.ap_by_iou.at(t);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace signkit
