#pragma once

#include <span>
#include <vector>

#include "signkit/geometry.hpp"

namespace signkit {

// Grayscale image patch, row-major intensities in [0, 1].
struct GrayPatch {
  int width = 0;
  int height = 0;
  std::vector<double> intensity;

  double at(int x, int y) const {
    return intensity[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                     static_cast<std::size_t>(x)];
  }
  double& at(int x, int y) {
    return intensity[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                     static_cast<std::size_t>(x)];
  }

  // Bilinear sample; reads outside the patch return 0.
  double sample(double x, double y) const;
};

// Central-difference gradient magnitude; one-sided differences at borders.
GrayPatch gradient_magnitude(const GrayPatch& patch);

struct RefineConfig {
  int samples_per_edge = 16;
  int max_iterations = 30;
  double step_tolerance = 1e-4;    // pixels of induced boundary movement
  double discard_threshold = 5.0;  // pixels; reject refinements moving farther
  double translation_radius = 8.0; // line-search bracket for tx, ty (pixels)
  double linear_radius = 0.08;     // line-search bracket for the 2x2 part
};

struct RefineResult {
  std::vector<Point2> boundary;
  bool accepted = false;
  double energy_before = 0.0;
  double energy_after = 0.0;
};

// Fits an affine correction to `boundary` by maximizing the summed gradient
// response sampled along the polygon edges. The six affine parameters are
// optimized by coordinate descent, each coordinate via a bracketing scan plus
// golden-section line search with monotone accept. The result is rejected
// (input returned, accepted = false) when any boundary corner moves farther
// than discard_threshold.
RefineResult refine_boundary(const GrayPatch& patch, std::span<const Point2> boundary,
                             const RefineConfig& config = {});

}  // namespace signkit
