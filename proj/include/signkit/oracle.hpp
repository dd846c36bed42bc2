#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "signkit/anchors.hpp"
#include "signkit/dataset.hpp"
#include "signkit/prediction.hpp"

namespace signkit {

// Synthetic scene generator plus the oracle predictor that stands in for a
// detection network, so the decode/NMS/eval pipeline can be exercised end to
// end with a controllable noise level.
struct OracleConfig {
  int scene_count = 10;
  int image_width = 800;
  int image_height = 450;
  std::pair<int, int> signs_per_image{1, 4};
  std::pair<double, double> size_range{24.0, 96.0};      // pixels, base square side
  std::pair<double, double> perspective_jitter{0.0, 0.1}; // fraction of size per corner
  double sigma_pred = 0.0;   // pixels of per-corner noise in oracle predictions
  double logit_margin = 10.0;
  std::uint64_t rng_seed = 0;
  std::vector<ShapeClass> shapes{ShapeClass::Rectangle, ShapeClass::Diamond,
                                 ShapeClass::Octagon};
};

// Places non-overlapping perspective-warped template signs fully inside each
// image. Annotations are internally consistent (boundary and pose vertices
// derive from the same transform). Throws PlacementExhausted when the
// non-overlap constraint cannot be met.
DatasetFile generate_synthetic_dataset(const OracleConfig& config);

// Per-image prediction grids aligned with `spec`, paired with the image id.
struct ImagePredictions {
  std::string id;
  PredictionGrid grid;
};

struct PredictionSet {
  GridSpec grid_spec;
  int class_count = kClassCount;
  std::vector<ImagePredictions> images;
};

// Builds predictions from ground truth: every box matched positive carries a
// one-hot logit row (scaled by logit_margin) for the ground-truth shape and
// the encoded vertices of the ground-truth quad perturbed per corner with
// Gaussian sigma_pred; every other box favors background.
PredictionSet oracle_predict(const DatasetFile& dataset, const GridSpec& spec,
                             double sigma_pred, double logit_margin,
                             std::uint64_t seed);

}  // namespace signkit
