#pragma once

#include <vector>

#include "signkit/anchors.hpp"
#include "signkit/templates.hpp"

namespace signkit {

// Raw per-box network outputs: class logits plus the vertex regression vector.
struct BoxPrediction {
  std::vector<double> logits;
  RegressionVector dp;
};

// Per-box predictions aligned with the GridSpec box ordering.
struct PredictionGrid {
  int class_count = kClassCount;
  std::vector<BoxPrediction> boxes;
};

}  // namespace signkit
