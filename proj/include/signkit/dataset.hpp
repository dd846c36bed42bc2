#pragma once

#include <string>
#include <vector>

#include "signkit/templates.hpp"

namespace signkit {

// Annotated image: dimensions plus sign annotations. `payload` optionally
// points at pixel data on disk; geometry-only pipelines leave it empty.
struct AnnotatedImage {
  std::string id;
  int width = 0;
  int height = 0;
  std::vector<GroundTruthSign> signs;
  std::string payload;
};

struct DatasetFile {
  std::vector<AnnotatedImage> images;
};

// Checks schema invariants: positive dimensions, corner counts matching each
// shape's template, finite coordinates. Throws DataError on violation.
void validate_dataset(const DatasetFile& dataset);

}  // namespace signkit
