#include "signkit/anchors.hpp"

#include <cmath>

namespace signkit {

namespace {

int grid_cells(int extent, int stride) {
  return (extent + stride - 1) / stride;  // ceil
}

void validate(const GridSpec& spec) {
  if (spec.input_width <= 0 || spec.input_height <= 0) {
    throw InvalidSpec("grid input dimensions must be positive");
  }
  if (spec.layer_strides.empty() || spec.aspect_ratios.empty()) {
    throw InvalidSpec("grid needs at least one stride and one aspect ratio");
  }
  int previous = 0;
  for (int s : spec.layer_strides) {
    if (s <= previous) throw InvalidSpec("layer strides must be positive ascending");
    previous = s;
  }
  for (double r : spec.aspect_ratios) {
    if (r <= 0.0) throw InvalidSpec("aspect ratios must be positive");
  }
  if (spec.scale_factor <= 0.0) throw InvalidSpec("scale factor must be positive");
}

}  // namespace

std::size_t GridSpec::box_count() const {
  std::size_t total = 0;
  for (int s : layer_strides) {
    total += static_cast<std::size_t>(grid_cells(input_width, s)) *
             static_cast<std::size_t>(grid_cells(input_height, s)) *
             aspect_ratios.size();
  }
  return total;
}

std::vector<DefaultBox> generate_default_boxes(const GridSpec& spec) {
  validate(spec);
  std::vector<DefaultBox> boxes;
  boxes.reserve(spec.box_count());
  for (std::size_t layer = 0; layer < spec.layer_strides.size(); ++layer) {
    const int stride = spec.layer_strides[layer];
    const int cols = grid_cells(spec.input_width, stride);
    const int rows = grid_cells(spec.input_height, stride);
    const double side = spec.scale_factor * stride;
    for (int row = 0; row < rows; ++row) {
      for (int col = 0; col < cols; ++col) {
        for (std::size_t ri = 0; ri < spec.aspect_ratios.size(); ++ri) {
          const double sqrt_r = std::sqrt(spec.aspect_ratios[ri]);
          DefaultBox b;
          b.cx = (col + 0.5) * stride;
          b.cy = (row + 0.5) * stride;
          b.w = side * sqrt_r;
          b.h = side / sqrt_r;
          b.layer_index = static_cast<int>(layer);
          b.cell_row = row;
          b.cell_col = col;
          b.ratio_index = static_cast<int>(ri);
          boxes.push_back(b);
        }
      }
    }
  }
  return boxes;
}

RegressionVector encode_vertices(const Quad& target, const DefaultBox& box,
                                 bool normalize) {
  const Quad anchors = box.corner_quad();
  const double sx = normalize ? 1.0 / box.w : 1.0;
  const double sy = normalize ? 1.0 / box.h : 1.0;
  RegressionVector dp;
  for (std::size_t i = 0; i < 4; ++i) {
    dp.v[2 * i] = (target[i].x - anchors[i].x) * sx;
    dp.v[2 * i + 1] = (target[i].y - anchors[i].y) * sy;
  }
  return dp;
}

Quad decode_vertices(const RegressionVector& dp, const DefaultBox& box, bool normalize) {
  const Quad anchors = box.corner_quad();
  const double sx = normalize ? box.w : 1.0;
  const double sy = normalize ? box.h : 1.0;
  Quad out;
  for (std::size_t i = 0; i < 4; ++i) {
    out[i].x = anchors[i].x + dp.v[2 * i] * sx;
    out[i].y = anchors[i].y + dp.v[2 * i + 1] * sy;
  }
  return out;
}

std::array<double, 4> encode_box(const AABox& target, const DefaultBox& box,
                                 bool normalize) {
  const AABox d = box.box();
  const double sx = normalize ? 1.0 / box.w : 1.0;
  const double sy = normalize ? 1.0 / box.h : 1.0;
  return {(target.left - d.left) * sx, (target.top - d.top) * sy,
          (target.right - d.right) * sx, (target.bottom - d.bottom) * sy};
}

AABox decode_box(const std::array<double, 4>& delta, const DefaultBox& box,
                 bool normalize) {
  const AABox d = box.box();
  const double sx = normalize ? box.w : 1.0;
  const double sy = normalize ? box.h : 1.0;
  return {d.left + delta[0] * sx, d.top + delta[1] * sy, d.right + delta[2] * sx,
          d.bottom + delta[3] * sy};
}

}  // namespace signkit
