#pragma once

#include <array>

#include "signkit/geometry.hpp"

namespace signkit {

// Pinhole camera with world-to-camera rotation R and center T:
// camera-frame coordinates are x_c = R * (X - T).
struct CameraView {
  double focal = 0.0;
  Point2 principal;
  Point3 position;
  std::array<double, 9> rotation{1, 0, 0, 0, 1, 0, 0, 0, 1};  // row-major

  // World-to-camera rotation for a camera rolled by theta (degrees) about its
  // optical axis; image coordinates rotate by -theta about the principal point.
  static std::array<double, 9> rotation_about_z(double theta_deg);
};

// Projects X into pixel coordinates. Throws BehindCamera when the camera-frame
// depth is <= 1e-6 m.
Point2 project_camera(const CameraView& view, const Point3& x);

}  // namespace signkit
