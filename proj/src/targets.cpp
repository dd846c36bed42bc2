#include "signkit/targets.hpp"

#include <algorithm>
#include <cmath>

namespace signkit {

MatchResult match(std::span<const DefaultBox> boxes,
                  std::span<const GroundTruthSign> ground_truths,
                  double iou_threshold) {
  MatchResult result;
  result.role.assign(boxes.size(), BoxRole::Negative);
  result.gt_index.assign(boxes.size(), -1);

  std::vector<AABox> gt_boxes;
  gt_boxes.reserve(ground_truths.size());
  for (const auto& gt : ground_truths) gt_boxes.push_back(AABox::of_quad(gt.template_vertices));

  // Threshold rule: each box claims its argmax-IoU ground truth.
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const AABox b = boxes[i].box();
    double best = 0.0;
    int best_gt = -1;
    for (std::size_t g = 0; g < gt_boxes.size(); ++g) {
      const double v = iou(b, gt_boxes[g]);
      if (v > best) {
        best = v;
        best_gt = static_cast<int>(g);
      }
    }
    if (best_gt >= 0 && best > iou_threshold) {
      result.role[i] = BoxRole::Positive;
      result.gt_index[i] = best_gt;
    }
  }

  // Forced rule: every ground truth claims its best box even below threshold.
  for (std::size_t g = 0; g < gt_boxes.size(); ++g) {
    double best = -1.0;
    int best_box = -1;
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      const double v = iou(boxes[i].box(), gt_boxes[g]);
      if (v > best) {
        best = v;
        best_box = static_cast<int>(i);
      }
    }
    if (best_box >= 0) {
      result.role[static_cast<std::size_t>(best_box)] = BoxRole::Positive;
      result.gt_index[static_cast<std::size_t>(best_box)] = static_cast<int>(g);
    }
  }

  for (std::size_t i = 0; i < boxes.size(); ++i) {
    if (result.role[i] == BoxRole::Positive) ++result.k_positive;
  }
  result.k_negative = static_cast<int>(boxes.size()) - result.k_positive;
  return result;
}

MatchResult mine_hard_negatives(const MatchResult& matched,
                                std::span<const BoxPrediction> predictions,
                                int min_kept) {
  if (predictions.size() != matched.box_count()) {
    throw InconsistentShapes("prediction count does not match box count");
  }

  struct Candidate {
    double score;
    std::size_t index;
  };
  std::vector<Candidate> negatives;
  for (std::size_t i = 0; i < matched.box_count(); ++i) {
    if (matched.role[i] != BoxRole::Negative) continue;
    const std::vector<double> p = softmax(predictions[i].logits);
    negatives.push_back({1.0 - p[static_cast<std::size_t>(kBackgroundClass)], i});
  }

  const int quota = 3 * (matched.k_positive > 0 ? matched.k_positive : min_kept);
  std::sort(negatives.begin(), negatives.end(), [](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.index < b.index;
  });

  MatchResult mined = matched;
  mined.k_negative = 0;
  for (std::size_t rank = 0; rank < negatives.size(); ++rank) {
    if (rank < static_cast<std::size_t>(quota)) {
      ++mined.k_negative;
    } else {
      mined.role[negatives[rank].index] = BoxRole::Ignored;
    }
  }
  return mined;
}

double smooth_l1(double x) {
  const double a = std::abs(x);
  return a < 1.0 ? 0.5 * x * x : a - 0.5;
}

double smooth_l1_derivative(double x) {
  return std::abs(x) < 1.0 ? x : (x > 0.0 ? 1.0 : -1.0);
}

std::vector<double> softmax(std::span<const double> logits) {
  double peak = logits[0];
  for (double v : logits) peak = std::max(peak, v);
  std::vector<double> out(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - peak);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return out;
}

double shape_softmax_ce(std::span<const double> logits, int label) {
  double peak = logits[0];
  for (double v : logits) peak = std::max(peak, v);
  double sum = 0.0;
  for (double v : logits) sum += std::exp(v - peak);
  return std::log(sum) - (logits[static_cast<std::size_t>(label)] - peak);
}

std::vector<double> shape_softmax_ce_gradient(std::span<const double> logits, int label) {
  std::vector<double> grad = softmax(logits);
  grad[static_cast<std::size_t>(label)] -= 1.0;
  return grad;
}

TrainingTargets build_targets(std::span<const DefaultBox> boxes,
                              std::span<const GroundTruthSign> ground_truths,
                              const MatchResult& matched, bool normalize) {
  if (boxes.size() != matched.box_count()) {
    throw InconsistentShapes("box count does not match the match result");
  }
  TrainingTargets targets;
  targets.vertex_offsets.assign(boxes.size(), RegressionVector{});
  targets.class_labels.assign(boxes.size(), kBackgroundClass);
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    if (matched.role[i] != BoxRole::Positive) continue;
    const auto& gt = ground_truths[static_cast<std::size_t>(matched.gt_index[i])];
    targets.vertex_offsets[i] = encode_vertices(gt.template_vertices, boxes[i], normalize);
    targets.class_labels[i] = class_index(gt.shape);
  }
  return targets;
}

LossBreakdown overall_loss(const MatchResult& matched,
                           std::span<const BoxPrediction> predictions,
                           const TrainingTargets& targets, double lambda_shape,
                           double lambda_vertex) {
  if (predictions.size() != matched.box_count() ||
      targets.class_labels.size() != matched.box_count() ||
      targets.vertex_offsets.size() != matched.box_count()) {
    throw InconsistentShapes("prediction/target cardinalities disagree");
  }

  double shape_sum = 0.0;
  double vertex_sum = 0.0;
  for (std::size_t i = 0; i < matched.box_count(); ++i) {
    if (matched.role[i] == BoxRole::Ignored) continue;
    shape_sum += shape_softmax_ce(predictions[i].logits, targets.class_labels[i]);
    if (matched.role[i] == BoxRole::Positive) {
      for (std::size_t c = 0; c < 8; ++c) {
        vertex_sum += smooth_l1(predictions[i].dp.v[c] - targets.vertex_offsets[i].v[c]);
      }
    }
  }

  LossBreakdown loss;
  loss.lambda_shape = lambda_shape;
  loss.lambda_vertex = lambda_vertex;
  const int classified = matched.k_positive + matched.k_negative;
  loss.shape_loss = classified > 0 ? shape_sum / classified : 0.0;
  loss.vertex_loss = matched.k_positive > 0 ? vertex_sum / matched.k_positive : 0.0;
  loss.overall = lambda_shape * loss.shape_loss + lambda_vertex * loss.vertex_loss;
  return loss;
}

}  // namespace signkit
