#include "signkit/geometry.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "signkit/camera.hpp"

namespace signkit {

namespace {

constexpr double kCollinearArea = 1e-9;
constexpr double kHomogeneousEps = 1e-12;

struct Normalization {
  double scale = 1.0;
  Point2 centroid;
};

// Hartley-style isotropic normalization: centroid at the origin, mean distance
// sqrt(2).
Normalization normalize_points(std::span<const Point2> pts, std::vector<Point2>& out) {
  Normalization n;
  for (const auto& p : pts) {
    n.centroid.x += p.x;
    n.centroid.y += p.y;
  }
  const double inv = 1.0 / static_cast<double>(pts.size());
  n.centroid.x *= inv;
  n.centroid.y *= inv;

  double mean_dist = 0.0;
  for (const auto& p : pts) mean_dist += distance(p, n.centroid);
  mean_dist *= inv;
  n.scale = mean_dist > 1e-300 ? std::sqrt(2.0) / mean_dist : 1.0;

  out.resize(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    out[i] = {n.scale * (pts[i].x - n.centroid.x), n.scale * (pts[i].y - n.centroid.y)};
  }
  return n;
}

double triangle_area(Point2 a, Point2 b, Point2 c) {
  return 0.5 * std::abs((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x));
}

void require_no_collinear_triple(std::span<const Point2> normalized) {
  const std::size_t n = normalized.size();
  for (std::size_t i = 0; i + 2 < n; ++i) {
    for (std::size_t j = i + 1; j + 1 < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        if (triangle_area(normalized[i], normalized[j], normalized[k]) < kCollinearArea) {
          throw DegenerateConfiguration(
              "three source points are collinear or coincident");
        }
      }
    }
  }
}

Eigen::Matrix3d normalizing_matrix(const Normalization& n) {
  Eigen::Matrix3d t = Eigen::Matrix3d::Identity();
  t(0, 0) = n.scale;
  t(1, 1) = n.scale;
  t(0, 2) = -n.scale * n.centroid.x;
  t(1, 2) = -n.scale * n.centroid.y;
  return t;
}

Homography from_eigen(const Eigen::Matrix3d& h) {
  Homography out;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) out.at(r, c) = h(r, c);
  return out;
}

// Exact 4-point solve with the h33 = 1 gauge, in normalized coordinates.
Eigen::Matrix3d solve_four_point(const std::vector<Point2>& src,
                                 const std::vector<Point2>& dst) {
  Eigen::Matrix<double, 8, 8> a;
  Eigen::Matrix<double, 8, 1> b;
  for (int i = 0; i < 4; ++i) {
    const double x = src[static_cast<std::size_t>(i)].x;
    const double y = src[static_cast<std::size_t>(i)].y;
    const double u = dst[static_cast<std::size_t>(i)].x;
    const double v = dst[static_cast<std::size_t>(i)].y;
    a.row(2 * i) << x, y, 1, 0, 0, 0, -x * u, -y * u;
    a.row(2 * i + 1) << 0, 0, 0, x, y, 1, -x * v, -y * v;
    b(2 * i) = u;
    b(2 * i + 1) = v;
  }
  Eigen::FullPivLU<Eigen::Matrix<double, 8, 8>> lu(a);
  if (!lu.isInvertible()) {
    throw DegenerateConfiguration("4-point homography system is singular");
  }
  const Eigen::Matrix<double, 8, 1> h = lu.solve(b);
  Eigen::Matrix3d out;
  out << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), 1.0;
  return out;
}

// Least-squares DLT: smallest right singular vector of the 2nx9 design matrix.
Eigen::Matrix3d solve_dlt(const std::vector<Point2>& src, const std::vector<Point2>& dst) {
  const auto n = static_cast<Eigen::Index>(src.size());
  Eigen::MatrixXd a(2 * n, 9);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = src[static_cast<std::size_t>(i)].x;
    const double y = src[static_cast<std::size_t>(i)].y;
    const double u = dst[static_cast<std::size_t>(i)].x;
    const double v = dst[static_cast<std::size_t>(i)].y;
    a.row(2 * i) << -x, -y, -1, 0, 0, 0, x * u, y * u, u;
    a.row(2 * i + 1) << 0, 0, 0, -x, -y, -1, x * v, y * v, v;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv(7) < 1e-12 * sv(0)) {
    throw DegenerateConfiguration("DLT design matrix is rank deficient");
  }
  const Eigen::Matrix<double, 9, 1> h = svd.matrixV().col(8);
  Eigen::Matrix3d out;
  out << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), h(8);
  return out;
}

Eigen::Matrix3d intrinsics(const CameraView& view) {
  Eigen::Matrix3d k = Eigen::Matrix3d::Identity();
  k(0, 0) = view.focal;
  k(1, 1) = view.focal;
  k(0, 2) = view.principal.x;
  k(1, 2) = view.principal.y;
  return k;
}

// P = K [R | -R T]
Eigen::Matrix<double, 3, 4> projection_matrix(const CameraView& view) {
  Eigen::Matrix3d r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      r(i, j) = view.rotation[static_cast<std::size_t>(3 * i + j)];
  const Eigen::Vector3d t(view.position.x, view.position.y, view.position.z);
  Eigen::Matrix<double, 3, 4> rt;
  rt.leftCols<3>() = r;
  rt.col(3) = -r * t;
  return intrinsics(view) * rt;
}

}  // namespace

double norm(Point2 p) { return std::hypot(p.x, p.y); }

double distance(Point2 a, Point2 b) { return norm(a - b); }

double Homography::det() const {
  return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
         m[2] * (m[3] * m[7] - m[4] * m[6]);
}

bool Homography::is_invertible(double tolerance) const {
  return std::abs(det()) > tolerance;
}

Homography Homography::normalized() const {
  if (std::abs(m[8]) <= kHomogeneousEps) return *this;
  Homography out = *this;
  const double inv = 1.0 / m[8];
  for (double& v : out.m) v *= inv;
  return out;
}

Homography Homography::operator*(const Homography& rhs) const {
  Homography out;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      double acc = 0.0;
      for (int k = 0; k < 3; ++k) acc += at(r, k) * rhs.at(k, c);
      out.at(r, c) = acc;
    }
  }
  return out;
}

AABox AABox::of_points(std::span<const Point2> pts) {
  AABox b{std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
          std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};
  for (const auto& p : pts) {
    b.left = p.x < b.left ? p.x : b.left;
    b.top = p.y < b.top ? p.y : b.top;
    b.right = p.x > b.right ? p.x : b.right;
    b.bottom = p.y > b.bottom ? p.y : b.bottom;
  }
  return b;
}

Homography homography_from_correspondences(std::span<const Point2> src,
                                           std::span<const Point2> dst) {
  if (src.size() < 4 || src.size() != dst.size()) {
    throw DegenerateConfiguration("need n >= 4 correspondences of equal count");
  }
  std::vector<Point2> src_n, dst_n;
  const Normalization ns = normalize_points(src, src_n);
  const Normalization nd = normalize_points(dst, dst_n);
  require_no_collinear_triple(src_n);

  const Eigen::Matrix3d h_norm =
      src.size() == 4 ? solve_four_point(src_n, dst_n) : solve_dlt(src_n, dst_n);

  const Eigen::Matrix3d h =
      normalizing_matrix(nd).inverse() * h_norm * normalizing_matrix(ns);
  return from_eigen(h).normalized();
}

Homography affine_from_correspondences(std::span<const Point2, 3> src,
                                       std::span<const Point2, 3> dst) {
  std::vector<Point2> src_n;
  normalize_points(src, src_n);
  if (triangle_area(src_n[0], src_n[1], src_n[2]) < kCollinearArea) {
    throw DegenerateConfiguration("affine source points are collinear");
  }

  Eigen::Matrix3d a;
  for (int i = 0; i < 3; ++i) {
    a.row(i) << src[static_cast<std::size_t>(i)].x, src[static_cast<std::size_t>(i)].y, 1.0;
  }
  Eigen::Vector3d bx, by;
  for (int i = 0; i < 3; ++i) {
    bx(i) = dst[static_cast<std::size_t>(i)].x;
    by(i) = dst[static_cast<std::size_t>(i)].y;
  }
  Eigen::FullPivLU<Eigen::Matrix3d> lu(a);
  if (!lu.isInvertible()) {
    throw DegenerateConfiguration("affine source points are collinear");
  }
  const Eigen::Vector3d row0 = lu.solve(bx);
  const Eigen::Vector3d row1 = lu.solve(by);

  Homography h;
  h.m = {row0(0), row0(1), row0(2), row1(0), row1(1), row1(2), 0.0, 0.0, 1.0};
  return h;
}

Point2 project(const Homography& h, Point2 p) {
  const double w = h.m[6] * p.x + h.m[7] * p.y + h.m[8];
  if (std::abs(w) <= kHomogeneousEps) {
    throw PointAtInfinity("projected point has |w| <= 1e-12");
  }
  const double inv = 1.0 / w;
  return {(h.m[0] * p.x + h.m[1] * p.y + h.m[2]) * inv,
          (h.m[3] * p.x + h.m[4] * p.y + h.m[5]) * inv};
}

std::vector<Point2> project(const Homography& h, std::span<const Point2> pts) {
  std::vector<Point2> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(project(h, p));
  return out;
}

Quad project(const Homography& h, const Quad& q) {
  return {project(h, q[0]), project(h, q[1]), project(h, q[2]), project(h, q[3])};
}

double iou(const AABox& a, const AABox& b) {
  const double iw = std::min(a.right, b.right) - std::max(a.left, b.left);
  const double ih = std::min(a.bottom, b.bottom) - std::max(a.top, b.top);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

Point3 triangulate_dlt(Point2 obs1, Point2 obs2, const CameraView& cam1,
                       const CameraView& cam2) {
  const double baseline = std::sqrt(
      (cam1.position.x - cam2.position.x) * (cam1.position.x - cam2.position.x) +
      (cam1.position.y - cam2.position.y) * (cam1.position.y - cam2.position.y) +
      (cam1.position.z - cam2.position.z) * (cam1.position.z - cam2.position.z));
  if (baseline < 1e-9) {
    throw DegenerateBaseline("camera centers coincide");
  }

  const Eigen::Matrix<double, 3, 4> p1 = projection_matrix(cam1);
  const Eigen::Matrix<double, 3, 4> p2 = projection_matrix(cam2);

  Eigen::Matrix4d a;
  a.row(0) = obs1.x * p1.row(2) - p1.row(0);
  a.row(1) = obs1.y * p1.row(2) - p1.row(1);
  a.row(2) = obs2.x * p2.row(2) - p2.row(0);
  a.row(3) = obs2.y * p2.row(2) - p2.row(1);

  Eigen::JacobiSVD<Eigen::Matrix4d> svd(a, Eigen::ComputeFullV);
  const Eigen::Vector4d x = svd.matrixV().col(3);
  if (std::abs(x(3)) <= kHomogeneousEps) {
    throw NoFiniteSolution("triangulated point is at infinity");
  }
  const double inv = 1.0 / x(3);
  return {x(0) * inv, x(1) * inv, x(2) * inv};
}

}  // namespace signkit
