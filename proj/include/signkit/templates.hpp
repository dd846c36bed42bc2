#pragma once

#include <span>
#include <string>
#include <vector>

#include "signkit/geometry.hpp"

namespace signkit {

enum class ShapeClass { Rectangle = 0, Diamond = 1, Octagon = 2, Background = 3 };

// Logits and class labels are ordered rectangle, diamond, octagon, background.
constexpr int kClassCount = 4;
constexpr int kBackgroundClass = 3;

int class_index(ShapeClass shape);
ShapeClass shape_from_index(int index);
std::string to_label(ShapeClass shape);
ShapeClass shape_from_label(const std::string& label);  // throws DataError

// A sign shape's boundary corners in normalized [0,1]^2 template coordinates.
// The first corner is the one nearest the template origin; winding is
// clockwise in image coordinates (y down).
struct ShapeTemplate {
  ShapeClass shape = ShapeClass::Background;
  std::vector<Point2> boundary_corners;

  int corner_count() const { return static_cast<int>(boundary_corners.size()); }
};

// Annotated sign: M boundary corners plus the pose quad they induce.
struct GroundTruthSign {
  ShapeClass shape = ShapeClass::Rectangle;
  std::vector<Point2> boundary;
  Quad template_vertices{};
  bool difficult = false;
};

// Unit-square corners q1..q4 = (0,0), (1,0), (1,1), (0,1).
const Quad& unit_square();

// Built-in boundary templates (throws NoTemplate for Background):
//   rectangle: the unit square, M = 4
//   diamond:   edge midpoints of the unit square, M = 4
//   octagon:   regular octagon inscribed in the unit square,
//              cut parameter a = 1/(2+sqrt(2)), M = 8
const ShapeTemplate& builtin_template(ShapeClass shape);

// Number of boundary corners for a shape's template.
int template_corner_count(ShapeClass shape);

// Fits the pose homography from template corners onto the annotated boundary
// (least squares when M > 4) and returns the image-space template vertices.
Quad boundary_to_template_vertices(std::span<const Point2> boundary, ShapeClass shape);

// Projects the shape's template corners through the pose defined by `quad`.
std::vector<Point2> template_vertices_to_boundary(const Quad& quad, ShapeClass shape);

// Named template entry for the extensible on-disk template set.
struct NamedTemplate {
  std::string label;
  std::vector<Point2> corners;
};

std::vector<NamedTemplate> builtin_template_set();

}  // namespace signkit
