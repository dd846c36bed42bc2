#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "signkit/errors.hpp"

namespace signkit {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
double norm(Point2 p);
double distance(Point2 a, Point2 b);

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

// Four ordered image points giving a planar target's 2D pose.
// Vertex order is fixed everywhere as TL, TR, BR, BL.
using Quad = std::array<Point2, 4>;

// 3x3 planar projective transform, row-major.
struct Homography {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  static Homography identity() { return {}; }

  double& at(int row, int col) { return m[static_cast<std::size_t>(3 * row + col)]; }
  double at(int row, int col) const { return m[static_cast<std::size_t>(3 * row + col)]; }

  double det() const;
  bool is_invertible(double tolerance = 1e-12) const;

  // Rescales so that m[8] == 1 (no-op when m[8] is ~0).
  Homography normalized() const;

  Homography operator*(const Homography& rhs) const;
};

// Axis-aligned box in pixel coordinates, left <= right and top <= bottom.
struct AABox {
  double left = 0.0;
  double top = 0.0;
  double right = 0.0;
  double bottom = 0.0;

  double width() const { return right - left; }
  double height() const { return bottom - top; }
  double area() const { return width() * height(); }
  double min_side() const { return width() < height() ? width() : height(); }

  // Corners in the TL, TR, BR, BL canon.
  Quad corners() const {
    return {{{left, top}, {right, top}, {right, bottom}, {left, bottom}}};
  }

  static AABox of_points(std::span<const Point2> pts);
  static AABox of_quad(const Quad& q) { return of_points(std::span<const Point2>(q)); }
};

struct CameraView;  // camera.hpp

// Estimates H with src mapped onto dst. Exact 8x8 solve (h33 = 1 gauge) for
// n = 4; least-squares DLT on the Hartley-normalized 2nx9 system for n > 4.
// Throws DegenerateConfiguration on collinear/coincident configurations.
Homography homography_from_correspondences(std::span<const Point2> src,
                                           std::span<const Point2> dst);

// Exact affine transform (last row [0,0,1]) mapping three points onto three.
Homography affine_from_correspondences(std::span<const Point2, 3> src,
                                       std::span<const Point2, 3> dst);

// Applies h with homogeneous division; throws PointAtInfinity when |w| <= 1e-12.
Point2 project(const Homography& h, Point2 p);
std::vector<Point2> project(const Homography& h, std::span<const Point2> pts);
Quad project(const Homography& h, const Quad& q);

// Intersection over union of two axis-aligned boxes; 0 for a zero-area union.
double iou(const AABox& a, const AABox& b);

// Two-view mid-point-free triangulation: smallest singular vector of the
// stacked 4x4 DLT system, dehomogenized. Throws DegenerateBaseline when the
// camera centers coincide and NoFiniteSolution when the result is at infinity.
Point3 triangulate_dlt(Point2 obs1, Point2 obs2, const CameraView& cam1,
                       const CameraView& cam2);

}  // namespace signkit
