#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "signkit/camera.hpp"
#include "signkit/rng.hpp"

namespace signkit {

// Two-view mapping-accuracy simulation: a forward-moving camera observes a
// planar rectangular sign; the second view additionally rolls about its
// optical axis. Corners are triangulated from noisy observations and the 3D
// reconstruction error is compared between corner-vertex observations and
// circumscribed-bounding-box observations.
struct SimScene {
  Point3 sign_center{-7.0, 7.0, 25.0};
  double sign_width = 3.0;   // meters, along world x
  double sign_height = 2.0;  // meters, along world y
  Point3 cam1_position{0.0, 1.0, 15.0};
  Point3 cam2_position{0.0, 1.0, 20.0};
  double focal = 2000.0;
  int image_width = 1280;
  int image_height = 720;
  double noise_std = 1.0;  // pixels, per coordinate
  int trials = 100;
  int theta_steps = 21;
  double theta_min_deg = 0.0;
  double theta_max_deg = 2.0;
  std::uint64_t rng_seed = 0;

  // Sign corners in TL, TR, BR, BL image order (the sign plane is z = const).
  std::array<Point3, 4> sign_corners() const;

  CameraView view1() const;
  CameraView view2(double theta_deg) const;
};

enum class ObservationMethod { Vertex, BoundingBox };

std::string to_label(ObservationMethod method);

// Projects the four sign corners into `view` and perturbs each coordinate
// with Gaussian noise. The bounding-box method then replaces the corners by
// the corresponding corners of their circumscribed axis-aligned rectangle.
std::array<Point2, 4> observe(const SimScene& scene, const CameraView& view,
                              ObservationMethod method, Rng& rng);

struct TrialResult {
  ObservationMethod method = ObservationMethod::Vertex;
  double theta_deg = 0.0;
  double err_3d = 0.0;  // meters, distance between estimated and true corner centers
  double ave_2d = 0.0;  // pixels, mean corner error of the second view
};

TrialResult run_trial(const SimScene& scene, double theta_deg, ObservationMethod method,
                      Rng& rng);

struct AggregateRow {
  double theta_deg = 0.0;
  ObservationMethod method = ObservationMethod::Vertex;
  double mean_err3d = 0.0;
  double std_err3d = 0.0;
  double mean_ave2d = 0.0;
};

// Runs trials for every (theta, method) pair. Per-trial child seeds depend on
// the trial index only, so the same noise draws are reused across the theta
// grid and both methods (common random numbers).
std::vector<AggregateRow> run_experiment(const SimScene& scene);

// CSV columns: theta_deg,method,mean_err3d_m,std_err3d_m,mean_ave_px
void write_experiment_csv(std::ostream& out, std::span<const AggregateRow> rows);

}  // namespace signkit
