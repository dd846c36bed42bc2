#include "signkit/camera.hpp"

#include <cmath>

#include "signkit/errors.hpp"

namespace signkit {

std::array<double, 9> CameraView::rotation_about_z(double theta_deg) {
  const double theta = theta_deg * 3.141592653589793238462643383279502884 / 180.0;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {c, s, 0.0, -s, c, 0.0, 0.0, 0.0, 1.0};
}

Point2 project_camera(const CameraView& view, const Point3& x) {
  const double dx = x.x - view.position.x;
  const double dy = x.y - view.position.y;
  const double dz = x.z - view.position.z;
  const auto& r = view.rotation;
  const double cx = r[0] * dx + r[1] * dy + r[2] * dz;
  const double cy = r[3] * dx + r[4] * dy + r[5] * dz;
  const double cz = r[6] * dx + r[7] * dy + r[8] * dz;
  if (cz <= 1e-6) {
    throw BehindCamera("point depth <= 1e-6 m in camera frame");
  }
  return {view.focal * cx / cz + view.principal.x,
          view.focal * cy / cz + view.principal.y};
}

}  // namespace signkit
