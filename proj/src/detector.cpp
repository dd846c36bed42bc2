#include "signkit/detector.hpp"

#include <algorithm>

#include "signkit/targets.hpp"

namespace signkit {

bool detection_order(const Detection& a, const Detection& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.bbox.left != b.bbox.left) return a.bbox.left < b.bbox.left;
  if (a.bbox.top != b.bbox.top) return a.bbox.top < b.bbox.top;
  if (a.bbox.right != b.bbox.right) return a.bbox.right < b.bbox.right;
  if (a.bbox.bottom != b.bbox.bottom) return a.bbox.bottom < b.bbox.bottom;
  return class_index(a.shape) < class_index(b.shape);
}

std::vector<Detection> decode_predictions(const PredictionGrid& grid,
                                          const GridSpec& spec,
                                          double score_threshold) {
  const std::vector<DefaultBox> boxes = generate_default_boxes(spec);
  if (grid.boxes.size() != boxes.size()) {
    throw MisalignedGrid("prediction grid has " + std::to_string(grid.boxes.size()) +
                         " records for " + std::to_string(boxes.size()) +
                         " default boxes");
  }
  if (grid.class_count != kClassCount) {
    throw MisalignedGrid("unsupported class count " + std::to_string(grid.class_count));
  }

  std::vector<Detection> detections;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const std::vector<double> prob = softmax(grid.boxes[i].logits);
    int best = 0;
    for (int c = 1; c < kBackgroundClass; ++c) {
      if (prob[static_cast<std::size_t>(c)] > prob[static_cast<std::size_t>(best)]) best = c;
    }
    const double score = prob[static_cast<std::size_t>(best)];
    if (score <= score_threshold) continue;

    Detection det;
    det.shape = shape_from_index(best);
    det.score = score;
    det.quad = decode_vertices(grid.boxes[i].dp, boxes[i], spec.normalize_offsets);
    det.boundary = estimate_boundary(det.quad, det.shape);
    det.bbox = AABox::of_quad(det.quad);
    detections.push_back(std::move(det));
  }
  return detections;
}

std::vector<Detection> nms(std::vector<Detection> detections, double iou_threshold) {
  std::sort(detections.begin(), detections.end(), detection_order);
  std::vector<Detection> kept;
  for (auto& det : detections) {
    bool suppressed = false;
    for (const auto& k : kept) {
      if (k.shape == det.shape && iou(k.bbox, det.bbox) > iou_threshold) {
        suppressed = true;
        break;
      }
    }
    if (!suppressed) kept.push_back(std::move(det));
  }
  return kept;
}

std::vector<Point2> estimate_boundary(const Quad& quad, ShapeClass shape) {
  return template_vertices_to_boundary(quad, shape);
}

Detection translate_detection(const Detection& det, double dx, double dy) {
  Detection out = det;
  for (auto& p : out.quad) {
    p.x += dx;
    p.y += dy;
  }
  for (auto& p : out.boundary) {
    p.x += dx;
    p.y += dy;
  }
  out.bbox = {det.bbox.left + dx, det.bbox.top + dy, det.bbox.right + dx,
              det.bbox.bottom + dy};
  return out;
}

Detection scale_detection(const Detection& det, double factor) {
  Detection out = det;
  for (auto& p : out.quad) {
    p.x *= factor;
    p.y *= factor;
  }
  for (auto& p : out.boundary) {
    p.x *= factor;
    p.y *= factor;
  }
  out.bbox = {det.bbox.left * factor, det.bbox.top * factor, det.bbox.right * factor,
              det.bbox.bottom * factor};
  return out;
}

std::vector<Detection> crop_resize_merge(std::span<const Detection> crop_detections,
                                         std::span<const Detection> halfres_detections,
                                         double image_width, double image_height,
                                         double nms_iou) {
  std::vector<Detection> merged;
  merged.reserve(crop_detections.size() + halfres_detections.size());
  for (const auto& det : crop_detections) {
    merged.push_back(translate_detection(det, image_width / 4.0, image_height / 4.0));
  }
  for (const auto& det : halfres_detections) {
    merged.push_back(scale_detection(det, 2.0));
  }
  return nms(std::move(merged), nms_iou);
}

double dual_branch_pixel_count(double image_width, double image_height) {
  const double half_w = image_width / 2.0;
  const double half_h = image_height / 2.0;
  return half_w * half_h + half_w * half_h;
}

}  // namespace signkit
