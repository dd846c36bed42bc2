#pragma once

#include <span>
#include <vector>

#include "signkit/anchors.hpp"
#include "signkit/prediction.hpp"
#include "signkit/templates.hpp"

namespace signkit {

enum class BoxRole : unsigned char { Negative = 0, Positive = 1, Ignored = 2 };

struct MatchResult {
  std::vector<BoxRole> role;  // per default box
  std::vector<int> gt_index;  // matched ground-truth index, -1 unless Positive
  int k_positive = 0;
  int k_negative = 0;

  std::size_t box_count() const { return role.size(); }
};

// IoU matching against the axis-aligned bounding boxes of the ground-truth
// template vertices. A box is Positive for its argmax-IoU ground truth when
// IoU > threshold; in addition every ground truth claims its best box (ties:
// lowest box index). Everything else is Negative.
MatchResult match(std::span<const DefaultBox> boxes,
                  std::span<const GroundTruthSign> ground_truths,
                  double iou_threshold = 0.5);

// Keeps the K_n = 3*K_p negatives with the highest non-background confidence
// (1 - background softmax probability) and demotes the rest to Ignored.
// When K_p = 0, keeps the top 3*min_kept instead so the loss is never empty.
MatchResult mine_hard_negatives(const MatchResult& matched,
                                std::span<const BoxPrediction> predictions,
                                int min_kept = 8);

// 0.5 x^2 for |x| < 1, |x| - 0.5 otherwise.
double smooth_l1(double x);
double smooth_l1_derivative(double x);

// Numerically stable -log softmax(logits)[label].
double shape_softmax_ce(std::span<const double> logits, int label);
std::vector<double> shape_softmax_ce_gradient(std::span<const double> logits, int label);

std::vector<double> softmax(std::span<const double> logits);

// Per-box training targets induced by a match: encoded vertex offsets for
// positives and a class label for every non-ignored box (background for
// negatives).
struct TrainingTargets {
  std::vector<RegressionVector> vertex_offsets;
  std::vector<int> class_labels;
};

TrainingTargets build_targets(std::span<const DefaultBox> boxes,
                              std::span<const GroundTruthSign> ground_truths,
                              const MatchResult& matched, bool normalize = true);

struct LossBreakdown {
  double shape_loss = 0.0;   // (1/(K_p+K_n)) sum of classification losses
  double vertex_loss = 0.0;  // (1/K_p) sum of smooth-L1 vertex losses
  double overall = 0.0;      // lambda_s * shape_loss + lambda_v * vertex_loss
  double lambda_shape = 1.0;
  double lambda_vertex = 1.0;
};

// Training loss over matched-and-mined boxes. Classification runs over
// positives and kept negatives; vertex regression over positives only.
LossBreakdown overall_loss(const MatchResult& matched,
                           std::span<const BoxPrediction> predictions,
                           const TrainingTargets& targets, double lambda_shape = 1.0,
                           double lambda_vertex = 1.0);

}  // namespace signkit
