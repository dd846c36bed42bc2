#include "signkit/augment.hpp"

#include <algorithm>
#include <cmath>

namespace signkit {

namespace {

AABox normalized_span(Point2 a, Point2 b) {
  return {std::min(a.x, b.x), std::min(a.y, b.y), std::max(a.x, b.x), std::max(a.y, b.y)};
}

bool corner_violates_border(Point2 p, double width, double height, double margin) {
  return p.x < margin || p.y < margin || p.x > width - margin || p.y > height - margin;
}

bool sign_inside_window(const GroundTruthSign& sign, const AABox& window) {
  for (const auto& p : sign.boundary) {
    if (p.x < window.left || p.x > window.right || p.y < window.top || p.y > window.bottom) {
      return false;
    }
  }
  return true;
}

}  // namespace

std::array<AABox, 4> corner_sample_regions(const AnnotatedImage& image,
                                           const AugmentConfig& config) {
  const double w = image.width;
  const double h = image.height;

  const GroundTruthSign* largest = nullptr;
  double largest_area = -1.0;
  for (const auto& sign : image.signs) {
    const AABox b = AABox::of_points(sign.boundary);
    if (b.min_side() >= config.large_sign_min_side && b.area() > largest_area) {
      largest_area = b.area();
      largest = &sign;
    }
  }
  if (largest == nullptr) {
    throw NoLargeSign("no sign reaches min side " +
                      std::to_string(config.large_sign_min_side));
  }

  const AABox center_half{w / 4.0, h / 4.0, 3.0 * w / 4.0, 3.0 * h / 4.0};
  const AABox sign_box = AABox::of_points(largest->boundary);
  const AABox u{std::min(center_half.left, sign_box.left),
                std::min(center_half.top, sign_box.top),
                std::max(center_half.right, sign_box.right),
                std::max(center_half.bottom, sign_box.bottom)};

  const Quad image_corners{{{0, 0}, {w, 0}, {w, h}, {0, h}}};
  const Quad u_corners = u.corners();
  std::array<AABox, 4> regions;
  for (std::size_t k = 0; k < 4; ++k) {
    regions[k] = normalized_span(image_corners[k], u_corners[k]);
  }
  return regions;
}

Homography quad_to_image_homography(const Quad& sampled, double width, double height) {
  const Quad image_rect{{{0, 0}, {width, 0}, {width, height}, {0, height}}};
  return homography_from_correspondences(sampled, image_rect);
}

GroundTruthSign transform_sign(const GroundTruthSign& sign, const Homography& h) {
  GroundTruthSign out = sign;
  out.boundary = project(h, std::span<const Point2>(sign.boundary));
  out.template_vertices = project(h, sign.template_vertices);
  return out;
}

std::vector<AugmentSample> sample_perspective_augment(const AnnotatedImage& image,
                                                      const AugmentConfig& config,
                                                      Rng& rng) {
  if (config.duplicates_per_image <= 0 || config.max_regenerate_attempts <= 0 ||
      config.border_margin < 0.0) {
    throw InvalidSpec("augment config counts must be positive");
  }
  const std::array<AABox, 4> regions = corner_sample_regions(image, config);
  const double w = image.width;
  const double h = image.height;

  std::vector<AugmentSample> samples;
  samples.reserve(static_cast<std::size_t>(config.duplicates_per_image));
  while (static_cast<int>(samples.size()) < config.duplicates_per_image) {
    bool produced = false;
    for (int attempt = 0; attempt < config.max_regenerate_attempts; ++attempt) {
      Quad sampled;
      for (std::size_t k = 0; k < 4; ++k) {
        sampled[k] = {rng.uniform(regions[k].left, regions[k].right),
                      rng.uniform(regions[k].top, regions[k].bottom)};
      }
      const Homography transform = quad_to_image_homography(sampled, w, h);

      AugmentSample sample;
      sample.h = transform;
      sample.sampled_quad = sampled;
      bool valid = true;
      for (const auto& sign : image.signs) {
        GroundTruthSign moved = transform_sign(sign, transform);
        for (const auto& p : moved.boundary) {
          if (corner_violates_border(p, w, h, config.border_margin)) {
            valid = false;
            break;
          }
        }
        if (!valid) break;
        sample.signs.push_back(std::move(moved));
      }
      if (valid) {
        samples.push_back(std::move(sample));
        produced = true;
        break;
      }
    }
    if (!produced) {
      throw RegenerationExhausted("no border-free draw in " +
                                  std::to_string(config.max_regenerate_attempts) +
                                  " attempts");
    }
  }
  return samples;
}

PruneResult prune_unusable(const AnnotatedImage& image, double border_margin) {
  for (const auto& sign : image.signs) {
    if (sign.difficult) return {false, PruneReason::DifficultSign};
    for (const auto& p : sign.boundary) {
      if (corner_violates_border(p, image.width, image.height, border_margin)) {
        return {false, PruneReason::BorderTouching};
      }
    }
  }
  return {true, PruneReason::None};
}

AnnotatedImage crop_augment(const AnnotatedImage& image, const AABox& window) {
  if (window.left < 0 || window.top < 0 || window.right > image.width ||
      window.bottom > image.height || window.width() <= 0 || window.height() <= 0) {
    throw InvalidWindow("crop window must lie within the image");
  }
  AnnotatedImage out;
  out.id = image.id;
  out.width = static_cast<int>(std::lround(window.width()));
  out.height = static_cast<int>(std::lround(window.height()));
  out.payload = image.payload;
  for (const auto& sign : image.signs) {
    if (!sign_inside_window(sign, window)) continue;
    GroundTruthSign moved = sign;
    for (auto& p : moved.boundary) {
      p.x -= window.left;
      p.y -= window.top;
    }
    for (auto& p : moved.template_vertices) {
      p.x -= window.left;
      p.y -= window.top;
    }
    out.signs.push_back(std::move(moved));
  }
  return out;
}

AnnotatedImage scale_image(const AnnotatedImage& image, double factor) {
  AnnotatedImage out = image;
  out.width = static_cast<int>(std::lround(image.width * factor));
  out.height = static_cast<int>(std::lround(image.height * factor));
  for (auto& sign : out.signs) {
    for (auto& p : sign.boundary) {
      p.x *= factor;
      p.y *= factor;
    }
    for (auto& p : sign.template_vertices) {
      p.x *= factor;
      p.y *= factor;
    }
  }
  return out;
}

AugmentedDataset augment_dataset(const DatasetFile& dataset, const AugmentConfig& config) {
  AugmentedDataset out;
  for (std::size_t index = 0; index < dataset.images.size(); ++index) {
    const AnnotatedImage& image = dataset.images[index];
    bool qualifies = false;
    for (const auto& sign : image.signs) {
      if (AABox::of_points(sign.boundary).min_side() >= config.large_sign_min_side) {
        qualifies = true;
        break;
      }
    }
    if (!qualifies) continue;

    Rng rng(config.rng_seed ^ static_cast<std::uint64_t>(index));
    const std::vector<AugmentSample> samples =
        sample_perspective_augment(image, config, rng);
    for (std::size_t k = 0; k < samples.size(); ++k) {
      AnnotatedImage augmented;
      augmented.id = image.id + "#aug" + std::to_string(k);
      augmented.width = image.width;
      augmented.height = image.height;
      augmented.signs = samples[k].signs;
      out.dataset.images.push_back(std::move(augmented));
      out.records.push_back({image.id, static_cast<int>(k), samples[k].h});
    }
  }
  return out;
}

}  // namespace signkit
