#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "signkit/geometry.hpp"

namespace signkit {

// Multi-scale default-box layout. One box scale per layer: side =
// scale_factor * stride, stretched per aspect ratio. `normalize_offsets`
// selects whether the vertex/box codecs divide raw pixel offsets by the
// default-box size (true) or keep them as raw differences (false).
struct GridSpec {
  int input_width = 0;
  int input_height = 0;
  std::vector<int> layer_strides{8, 16, 32, 64, 128, 256};
  std::vector<double> aspect_ratios{1.0, 2.0, 3.0, 1.0 / 2.0, 1.0 / 3.0};
  double scale_factor = 4.0;
  bool normalize_offsets = true;

  // Closed-form count of generate_default_boxes(*this).size().
  std::size_t box_count() const;
};

struct DefaultBox {
  double cx = 0.0, cy = 0.0, w = 0.0, h = 0.0;
  int layer_index = 0, cell_row = 0, cell_col = 0, ratio_index = 0;

  AABox box() const { return {cx - w / 2, cy - h / 2, cx + w / 2, cy + h / 2}; }
  Quad corner_quad() const { return box().corners(); }
};

// Deterministic (layer, row, col, ratio) ordering; ceil-division grid so the
// whole image is covered. Throws InvalidSpec on nonpositive dimensions,
// strides or ratios.
std::vector<DefaultBox> generate_default_boxes(const GridSpec& spec);

// Per-corner regression offsets, laid out (x0,y0,x1,y1,x2,y2,x3,y3) in the
// TL,TR,BR,BL corner order.
struct RegressionVector {
  std::array<double, 8> v{};
};

RegressionVector encode_vertices(const Quad& target, const DefaultBox& box,
                                 bool normalize = true);
Quad decode_vertices(const RegressionVector& dp, const DefaultBox& box,
                     bool normalize = true);

// (dl, dt, dr, db) codec for axis-aligned boxes, same normalization scheme.
std::array<double, 4> encode_box(const AABox& target, const DefaultBox& box,
                                 bool normalize = true);
AABox decode_box(const std::array<double, 4>& d, const DefaultBox& box,
                 bool normalize = true);

}  // namespace signkit
