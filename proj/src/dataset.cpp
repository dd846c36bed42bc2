#include "signkit/dataset.hpp"

#include <cmath>

#include "signkit/errors.hpp"

namespace signkit {

void validate_dataset(const DatasetFile& dataset) {
  for (const auto& image : dataset.images) {
    if (image.width <= 0 || image.height <= 0) {
      throw DataError("image '" + image.id + "' has nonpositive dimensions");
    }
    for (const auto& sign : image.signs) {
      if (sign.shape == ShapeClass::Background) {
        throw DataError("image '" + image.id + "' annotates a background sign");
      }
      const int expected = template_corner_count(sign.shape);
      if (static_cast<int>(sign.boundary.size()) != expected) {
        throw DataError("image '" + image.id + "': " + to_label(sign.shape) +
                        " sign has " + std::to_string(sign.boundary.size()) +
                        " boundary corners, expected " + std::to_string(expected));
      }
      for (const auto& p : sign.boundary) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
          throw DataError("image '" + image.id + "' has non-finite boundary corner");
        }
      }
      for (const auto& p : sign.template_vertices) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
          throw DataError("image '" + image.id + "' has non-finite template vertex");
        }
      }
    }
  }
}

}  // namespace signkit
