#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "signkit/dataset.hpp"
#include "signkit/geometry.hpp"
#include "signkit/rng.hpp"

namespace signkit {

struct AugmentConfig {
  int duplicates_per_image = 10;
  double large_sign_min_side = 80.0;  // bbox min side that qualifies an image
  double border_margin = 1.0;
  int max_regenerate_attempts = 50;
  std::uint64_t rng_seed = 0;
};

struct AugmentSample {
  Homography h;  // sampled quadrilateral onto the full image rectangle
  Quad sampled_quad{};
  std::vector<GroundTruthSign> signs;
};

// Corner sampling regions: each spans an image corner and the matching corner
// of the union bbox of the centered half-size rectangle and the largest
// qualifying sign. TL, TR, BR, BL order. Throws NoLargeSign when no sign
// reaches large_sign_min_side.
std::array<AABox, 4> corner_sample_regions(const AnnotatedImage& image,
                                           const AugmentConfig& config);

// Homography mapping the sampled quadrilateral onto the full image rectangle.
Homography quad_to_image_homography(const Quad& sampled, double width, double height);

GroundTruthSign transform_sign(const GroundTruthSign& sign, const Homography& h);

// Draws duplicates_per_image perspective augmentations. A draw is rejected
// and resampled when any transformed boundary corner lands within
// border_margin of the image border (or outside the image); after
// max_regenerate_attempts rejections it throws RegenerationExhausted.
std::vector<AugmentSample> sample_perspective_augment(const AnnotatedImage& image,
                                                      const AugmentConfig& config,
                                                      Rng& rng);

enum class PruneReason { None, DifficultSign, BorderTouching };

struct PruneResult {
  bool usable = true;
  PruneReason reason = PruneReason::None;
};

// An image is unusable when any sign is flagged difficult or any boundary
// corner lies within border_margin of the image border.
PruneResult prune_unusable(const AnnotatedImage& image, double border_margin = 1.0);

// Crops to `window` (must lie within the image): annotations translate by
// (-left, -top); signs not fully inside the window are dropped.
AnnotatedImage crop_augment(const AnnotatedImage& image, const AABox& window);

// Uniform rescale of dimensions and annotations (plumbing for the
// dual-detector pipeline).
AnnotatedImage scale_image(const AnnotatedImage& image, double factor);

// Record of one augmented image: where it came from and the transform used.
struct AugmentRecord {
  std::string source_id;
  int index = 0;
  Homography h;
};

struct AugmentedDataset {
  DatasetFile dataset;
  std::vector<AugmentRecord> records;
};

// Applies sample_perspective_augment to every qualifying image, with child
// seed rng_seed XOR image-index per image. Non-qualifying images are skipped.
AugmentedDataset augment_dataset(const DatasetFile& dataset, const AugmentConfig& config);

}  // namespace signkit
