#include <doctest.h>

#include <cmath>

#include "signkit/camera.hpp"
#include "signkit/geometry.hpp"
#include "signkit/mapsim.hpp"
#include "support.hpp"

using namespace signkit;
using namespace signkit::testing;

namespace {

double max_reprojection_error(const Homography& h, std::span<const Point2> src,
                              std::span<const Point2> dst) {
  double worst = 0.0;
  for (std::size_t i = 0; i < src.size(); ++i) {
    worst = std::max(worst, distance(project(h, src[i]), dst[i]));
  }
  return worst;
}

}  // namespace

TEST_CASE("homography: unit square onto itself is the identity") {
  const Quad square = unit_square();
  const Homography h = homography_from_correspondences(square, square);
  for (std::size_t i = 0; i < 9; ++i) {
    const double expected = i % 4 == 0 ? 1.0 : 0.0;
    CHECK(std::abs(h.m[i] - expected) < 1e-12);
  }
}

TEST_CASE("homography: pure scaling") {
  const Quad square = unit_square();
  const Quad scaled{{{0, 0}, {2, 0}, {2, 2}, {0, 2}}};
  const Homography h = homography_from_correspondences(square, scaled);
  CHECK(h.m[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(h.m[4] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(h.m[8] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(h.m[1]) < 1e-12);
  CHECK(std::abs(h.m[2]) < 1e-12);
  CHECK(std::abs(h.m[6]) < 1e-12);
}

TEST_CASE("homography: 4-point solve agrees with the independent 8x8 oracle") {
  const Quad src = unit_square();
  const Quad dst{{{0, 0}, {1, 0}, {2, 1}, {0, 1}}};
  const Homography h = homography_from_correspondences(src, dst);
  CHECK(max_reprojection_error(h, src, dst) < 1e-9);

  const Homography reference = homography_oracle(src, dst);
  for (std::size_t i = 0; i < 4; ++i) {
    const Point2 a = project(h, src[i]);
    const Point2 b = project(reference, src[i]);
    CHECK(distance(a, b) < 1e-9);
  }
}

TEST_CASE("homography: 1000 random quads round trip below 1e-9") {
  Rng rng(42);
  for (int trial = 0; trial < 1000; ++trial) {
    const Quad src = random_quad(rng, rng.uniform(20.0, 400.0),
                                 {rng.uniform(0.0, 400.0), rng.uniform(0.0, 400.0)});
    const Quad dst = random_quad(rng, rng.uniform(20.0, 400.0),
                                 {rng.uniform(0.0, 400.0), rng.uniform(0.0, 400.0)});
    const Homography h = homography_from_correspondences(src, dst);
    CHECK(max_reprojection_error(h, src, dst) < 1e-9);
  }
}

TEST_CASE("homography: least-squares path recovers an exact octagon warp") {
  Rng rng(7);
  const auto& octagon = builtin_template(ShapeClass::Octagon).boundary_corners;
  for (int trial = 0; trial < 50; ++trial) {
    const Quad pose = random_quad(rng, 150.0, {30, 30});
    const Homography truth = homography_from_correspondences(unit_square(), pose);
    const std::vector<Point2> warped = project(truth, octagon);
    const Homography recovered = homography_from_correspondences(octagon, warped);
    CHECK(max_reprojection_error(recovered, octagon, warped) < 1e-6);
  }
}

TEST_CASE("homography: collinear and coincident sources are rejected") {
  const std::vector<Point2> collinear{{0, 0}, {1, 1}, {2, 2}, {0, 1}};
  const std::vector<Point2> dst{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  CHECK_THROWS_AS(homography_from_correspondences(collinear, dst),
                  DegenerateConfiguration);

  const std::vector<Point2> coincident{{0, 0}, {0, 0}, {1, 1}, {0, 1}};
  CHECK_THROWS_AS(homography_from_correspondences(coincident, dst),
                  DegenerateConfiguration);
}

TEST_CASE("affine: identity, translation, random exact mapping") {
  const std::array<Point2, 3> tri{{{0, 0}, {1, 0}, {0, 1}}};
  const Homography id = affine_from_correspondences(tri, tri);
  for (std::size_t i = 0; i < 9; ++i) {
    const double expected = i % 4 == 0 ? 1.0 : 0.0;
    CHECK(std::abs(id.m[i] - expected) < 1e-12);
  }

  std::array<Point2, 3> shifted = tri;
  for (auto& p : shifted) {
    p.x += 2.0;
    p.y += 3.0;
  }
  const Homography t = affine_from_correspondences(tri, shifted);
  CHECK(t.m[2] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(t.m[5] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(t.m[6] == 0.0);
  CHECK(t.m[7] == 0.0);
  CHECK(t.m[8] == 1.0);

  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const std::array<Point2, 3> src{{{rng.uniform(0, 100), rng.uniform(0, 100)},
                                     {rng.uniform(100, 200), rng.uniform(0, 100)},
                                     {rng.uniform(0, 100), rng.uniform(100, 200)}}};
    const std::array<Point2, 3> dst{{{rng.uniform(0, 100), rng.uniform(0, 100)},
                                     {rng.uniform(100, 200), rng.uniform(0, 100)},
                                     {rng.uniform(0, 100), rng.uniform(100, 200)}}};
    const Homography h = affine_from_correspondences(src, dst);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(distance(project(h, src[i]), dst[i]) < 1e-10);
    }
  }

  const std::array<Point2, 3> degenerate{{{0, 0}, {1, 1}, {2, 2}}};
  CHECK_THROWS_AS(affine_from_correspondences(degenerate, tri), DegenerateConfiguration);
}

TEST_CASE("project: identity, scaling, homogeneous division") {
  CHECK(distance(project(Homography::identity(), Point2{0.3, 0.7}), {0.3, 0.7}) == 0.0);

  Homography scale;
  scale.m = {2, 0, 0, 0, 2, 0, 0, 0, 1};
  CHECK(distance(project(scale, Point2{0.5, 0.5}), {1.0, 1.0}) == 0.0);

  Homography perspective;
  perspective.m = {1, 0, 0, 0, 1, 0, 0.5, 0, 1};
  const Point2 p = project(perspective, Point2{1.0, 0.0});
  CHECK(p.x == doctest::Approx(1.0 / 1.5).epsilon(1e-12));
  CHECK(p.y == doctest::Approx(0.0));

  Homography to_infinity;
  to_infinity.m = {1, 0, 0, 0, 1, 0, 1, 0, -1};
  CHECK_THROWS_AS(project(to_infinity, Point2{1.0, 5.0}), PointAtInfinity);
}

TEST_CASE("homography composition matches sequential projection") {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const Homography h1 =
        homography_from_correspondences(unit_square(), random_quad(rng, 2.0, {1, 1}, 0.2));
    const Homography h2 =
        homography_from_correspondences(unit_square(), random_quad(rng, 2.0, {1, 1}, 0.2));
    const Point2 p{rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)};
    const Point2 sequential = project(h2, project(h1, p));
    const Point2 composed = project(h2 * h1, p);
    CHECK(distance(sequential, composed) < 1e-9);
  }
}

TEST_CASE("iou: pinned examples and properties") {
  const AABox a{0, 0, 2, 2};
  CHECK(iou(a, a) == 1.0);
  CHECK(iou(a, {10, 10, 12, 12}) == 0.0);
  CHECK(iou(a, {1, 0, 3, 2}) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const AABox x = random_box(rng);
    const AABox y = random_box(rng);
    const double v = iou(x, y);
    CHECK(v == iou(y, x));
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    CHECK(iou(x, x) == 1.0);
  }

  const AABox degenerate{1, 1, 1, 1};
  CHECK(iou(degenerate, degenerate) == 0.0);
}

TEST_CASE("triangulate_dlt: exact recovery, degenerate baseline, noise scale") {
  SimScene scene;
  const CameraView cam1 = scene.view1();
  const CameraView cam2 = scene.view2(1.0);

  const Point3 target{-6.0, 5.5, 24.0};
  const Point2 obs1 = project_camera(cam1, target);
  const Point2 obs2 = project_camera(cam2, target);
  const Point3 recovered = triangulate_dlt(obs1, obs2, cam1, cam2);
  CHECK(std::abs(recovered.x - target.x) < 1e-6);
  CHECK(std::abs(recovered.y - target.y) < 1e-6);
  CHECK(std::abs(recovered.z - target.z) < 1e-6);

  CHECK_THROWS_AS(triangulate_dlt(obs1, obs2, cam1, cam1), DegenerateBaseline);

  // 1 px observation noise at ~10 m depth, 5 m baseline, focal 2000:
  // centimeter-scale 3D error expected.
  Rng rng(21);
  double mean_error = 0.0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    const Point2 n1{obs1.x + rng.gaussian(), obs1.y + rng.gaussian()};
    const Point2 n2{obs2.x + rng.gaussian(), obs2.y + rng.gaussian()};
    const Point3 est = triangulate_dlt(n1, n2, cam1, cam2);
    mean_error += std::sqrt((est.x - target.x) * (est.x - target.x) +
                            (est.y - target.y) * (est.y - target.y) +
                            (est.z - target.z) * (est.z - target.z)) /
                  trials;
  }
  CHECK(mean_error < 0.05);   // centimeters...
  CHECK(mean_error > 0.001);  // ...not millimeters or meters

  // Swapping the two views leaves the estimate unchanged.
  const Point3 swapped = triangulate_dlt(obs2, obs1, cam2, cam1);
  CHECK(std::abs(swapped.x - recovered.x) < 1e-9);
  CHECK(std::abs(swapped.y - recovered.y) < 1e-9);
  CHECK(std::abs(swapped.z - recovered.z) < 1e-9);
}
