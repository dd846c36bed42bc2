#pragma once

#include <span>
#include <string>
#include <vector>

#include "signkit/anchors.hpp"
#include "signkit/prediction.hpp"
#include "signkit/templates.hpp"

namespace signkit {

struct Detection {
  ShapeClass shape = ShapeClass::Rectangle;
  double score = 0.0;
  Quad quad{};                  // template vertices, pixels
  std::vector<Point2> boundary; // projected template corners
  AABox bbox{};                 // circumscribed rectangle of quad
};

// Total order used for NMS and evaluation ranking: score descending, ties by
// bbox left/top/right/bottom then shape, so the result is independent of the
// input permutation.
bool detection_order(const Detection& a, const Detection& b);

// Softmax + decode + boundary projection for every box whose best
// non-background probability exceeds score_threshold. The grid must be
// aligned with generate_default_boxes(spec).
std::vector<Detection> decode_predictions(const PredictionGrid& grid,
                                          const GridSpec& spec,
                                          double score_threshold = 0.5);

// Greedy per-class NMS on bounding boxes: a detection is kept iff its IoU with
// every higher-ranked kept detection of the same class is <= iou_threshold.
std::vector<Detection> nms(std::vector<Detection> detections,
                           double iou_threshold = 0.45);

// Pipeline-facing alias of templates::template_vertices_to_boundary.
std::vector<Point2> estimate_boundary(const Quad& quad, ShapeClass shape);

// Merges detections from the centered half-size native-resolution crop
// (translated by +W/4,+H/4) and the half-resolution full frame (scaled x2),
// then deduplicates with NMS.
std::vector<Detection> crop_resize_merge(std::span<const Detection> crop_detections,
                                         std::span<const Detection> halfres_detections,
                                         double image_width, double image_height,
                                         double nms_iou = 0.45);

// Pixels processed by the two branches: two (W/2 x H/2) inputs = W*H/2.
double dual_branch_pixel_count(double image_width, double image_height);

Detection translate_detection(const Detection& det, double dx, double dy);
Detection scale_detection(const Detection& det, double factor);

// Detections grouped per dataset image, the unit the CLI reads and writes.
struct DetectedImage {
  std::string id;
  std::vector<Detection> detections;
};

struct DetectionSet {
  std::vector<DetectedImage> images;
};

}  // namespace signkit
