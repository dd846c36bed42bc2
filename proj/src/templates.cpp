#include "signkit/templates.hpp"

#include <cmath>

namespace signkit {

namespace {

ShapeTemplate make_rectangle() {
  return {ShapeClass::Rectangle, {{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
}

ShapeTemplate make_diamond() {
  return {ShapeClass::Diamond, {{0.5, 0}, {1, 0.5}, {0.5, 1}, {0, 0.5}}};
}

ShapeTemplate make_octagon() {
  const double a = 1.0 / (2.0 + std::sqrt(2.0));
  return {ShapeClass::Octagon,
          {{a, 0}, {1 - a, 0}, {1, a}, {1, 1 - a}, {1 - a, 1}, {a, 1}, {0, 1 - a}, {0, a}}};
}

}  // namespace

int class_index(ShapeClass shape) { return static_cast<int>(shape); }

ShapeClass shape_from_index(int index) {
  if (index < 0 || index >= kClassCount) {
    throw DataError("class index out of range: " + std::to_string(index));
  }
  return static_cast<ShapeClass>(index);
}

std::string to_label(ShapeClass shape) {
  switch (shape) {
    case ShapeClass::Rectangle: return "rectangle";
    case ShapeClass::Diamond: return "diamond";
    case ShapeClass::Octagon: return "octagon";
    case ShapeClass::Background: return "background";
  }
  throw DataError("invalid shape class");
}

ShapeClass shape_from_label(const std::string& label) {
  if (label == "rectangle") return ShapeClass::Rectangle;
  if (label == "diamond") return ShapeClass::Diamond;
  if (label == "octagon") return ShapeClass::Octagon;
  if (label == "background") return ShapeClass::Background;
  throw DataError("unknown shape label: " + label);
}

const Quad& unit_square() {
  static const Quad q{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
  return q;
}

const ShapeTemplate& builtin_template(ShapeClass shape) {
  static const ShapeTemplate rectangle = make_rectangle();
  static const ShapeTemplate diamond = make_diamond();
  static const ShapeTemplate octagon = make_octagon();
  switch (shape) {
    case ShapeClass::Rectangle: return rectangle;
    case ShapeClass::Diamond: return diamond;
    case ShapeClass::Octagon: return octagon;
    case ShapeClass::Background: break;
  }
  throw NoTemplate("background has no shape template");
}

int template_corner_count(ShapeClass shape) {
  return builtin_template(shape).corner_count();
}

Quad boundary_to_template_vertices(std::span<const Point2> boundary, ShapeClass shape) {
  const ShapeTemplate& tpl = builtin_template(shape);
  if (boundary.size() != tpl.boundary_corners.size()) {
    throw DataError("boundary corner count does not match the shape template");
  }
  const Homography h = homography_from_correspondences(tpl.boundary_corners, boundary);
  return project(h, unit_square());
}

std::vector<Point2> template_vertices_to_boundary(const Quad& quad, ShapeClass shape) {
  const ShapeTemplate& tpl = builtin_template(shape);
  const Homography h = homography_from_correspondences(unit_square(), quad);
  return project(h, tpl.boundary_corners);
}

std::vector<NamedTemplate> builtin_template_set() {
  std::vector<NamedTemplate> set;
  for (ShapeClass s : {ShapeClass::Rectangle, ShapeClass::Diamond, ShapeClass::Octagon}) {
    set.push_back({to_label(s), builtin_template(s).boundary_corners});
  }
  return set;
}

}  // namespace signkit
