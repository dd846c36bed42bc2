#include "signkit/oracle.hpp"

#include <cmath>

#include "signkit/rng.hpp"
#include "signkit/targets.hpp"

namespace signkit {

namespace {

constexpr int kMaxPlacementAttempts = 200;
constexpr double kPlacementMargin = 4.0;  // pixels kept clear of the image border
constexpr double kSeparation = 16.0;      // minimum gap between sign bboxes

bool quad_is_convex(const Quad& q) {
  double reference = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    const Point2 a = q[i];
    const Point2 b = q[(i + 1) % 4];
    const Point2 c = q[(i + 2) % 4];
    const double cross = (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x);
    if (i == 0) {
      reference = cross;
    } else if (cross * reference <= 0.0) {
      return false;
    }
  }
  return true;
}

AABox padded(const AABox& b, double pad) {
  return {b.left - pad, b.top - pad, b.right + pad, b.bottom + pad};
}

}  // namespace

DatasetFile generate_synthetic_dataset(const OracleConfig& config) {
  if (config.scene_count <= 0 || config.image_width <= 0 || config.image_height <= 0 ||
      config.shapes.empty()) {
    throw InvalidSpec("oracle config needs positive counts and at least one shape");
  }
  if (config.signs_per_image.first < 0 ||
      config.signs_per_image.second < config.signs_per_image.first ||
      config.size_range.first <= 0.0 ||
      config.size_range.second < config.size_range.first ||
      config.perspective_jitter.first < 0.0 ||
      config.perspective_jitter.second < config.perspective_jitter.first) {
    throw InvalidSpec("oracle config ranges must be ordered and positive");
  }

  DatasetFile dataset;
  for (int scene = 0; scene < config.scene_count; ++scene) {
    Rng rng(Rng::mix(config.rng_seed, static_cast<std::uint64_t>(scene)));
    AnnotatedImage image;
    image.id = "img" + std::to_string(scene);
    image.width = config.image_width;
    image.height = config.image_height;

    const int sign_count =
        rng.uniform_int(config.signs_per_image.first, config.signs_per_image.second);
    std::vector<AABox> occupied;

    for (int s = 0; s < sign_count; ++s) {
      bool placed = false;
      for (int attempt = 0; attempt < kMaxPlacementAttempts && !placed; ++attempt) {
        const ShapeClass shape = config.shapes[static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<int>(config.shapes.size()) - 1))];
        const double size = rng.uniform(config.size_range.first, config.size_range.second);
        const double jitter =
            rng.uniform(config.perspective_jitter.first, config.perspective_jitter.second);

        const double x0 = rng.uniform(kPlacementMargin,
                                      config.image_width - size - kPlacementMargin);
        const double y0 = rng.uniform(kPlacementMargin,
                                      config.image_height - size - kPlacementMargin);
        Quad quad{{{x0, y0}, {x0 + size, y0}, {x0 + size, y0 + size}, {x0, y0 + size}}};
        for (auto& corner : quad) {
          corner.x += size * rng.uniform(-jitter, jitter);
          corner.y += size * rng.uniform(-jitter, jitter);
        }
        if (!quad_is_convex(quad)) continue;

        GroundTruthSign sign;
        sign.shape = shape;
        sign.template_vertices = quad;
        sign.boundary = template_vertices_to_boundary(quad, shape);

        bool inside = true;
        for (const auto& p : sign.boundary) {
          if (p.x < kPlacementMargin || p.y < kPlacementMargin ||
              p.x > config.image_width - kPlacementMargin ||
              p.y > config.image_height - kPlacementMargin) {
            inside = false;
            break;
          }
        }
        if (!inside) continue;

        const AABox bbox = AABox::of_quad(quad);
        bool overlaps = false;
        for (const auto& other : occupied) {
          if (iou(padded(bbox, kSeparation / 2.0), padded(other, kSeparation / 2.0)) > 0.0) {
            overlaps = true;
            break;
          }
        }
        if (overlaps) continue;

        occupied.push_back(bbox);
        image.signs.push_back(std::move(sign));
        placed = true;
      }
      if (!placed) {
        throw PlacementExhausted("could not place sign " + std::to_string(s) +
                                 " in image " + image.id);
      }
    }
    dataset.images.push_back(std::move(image));
  }
  return dataset;
}

PredictionSet oracle_predict(const DatasetFile& dataset, const GridSpec& spec,
                             double sigma_pred, double logit_margin,
                             std::uint64_t seed) {
  const std::vector<DefaultBox> boxes = generate_default_boxes(spec);

  PredictionSet predictions;
  predictions.grid_spec = spec;
  predictions.class_count = kClassCount;

  std::vector<double> background_logits(kClassCount, 0.0);
  background_logits[kBackgroundClass] = logit_margin;

  for (std::size_t index = 0; index < dataset.images.size(); ++index) {
    const AnnotatedImage& image = dataset.images[index];
    Rng rng(Rng::mix(seed, index));

    ImagePredictions entry;
    entry.id = image.id;
    entry.grid.class_count = kClassCount;
    entry.grid.boxes.assign(boxes.size(), BoxPrediction{background_logits, {}});

    const MatchResult matched = match(boxes, image.signs);
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      if (matched.role[i] != BoxRole::Positive) continue;
      const GroundTruthSign& gt =
          image.signs[static_cast<std::size_t>(matched.gt_index[i])];

      Quad noisy = gt.template_vertices;
      if (sigma_pred > 0.0) {
        for (auto& corner : noisy) {
          corner.x += rng.gaussian(0.0, sigma_pred);
          corner.y += rng.gaussian(0.0, sigma_pred);
        }
      }

      BoxPrediction& p = entry.grid.boxes[i];
      p.logits.assign(kClassCount, 0.0);
      p.logits[static_cast<std::size_t>(class_index(gt.shape))] = logit_margin;
      p.dp = encode_vertices(noisy, boxes[i], spec.normalize_offsets);
    }
    predictions.images.push_back(std::move(entry));
  }
  return predictions;
}

}  // namespace signkit
