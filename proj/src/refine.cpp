#include "signkit/refine.hpp"

#include <algorithm>
#include <cmath>

namespace signkit {

namespace {

constexpr double kGoldenRatio = 0.6180339887498949;  // (sqrt(5)-1)/2

// Affine correction around a fixed pivot: p -> (I + M)(p - pivot) + pivot + t.
// Pivoting at the boundary centroid keeps the six coordinates decoupled.
struct AffineParams {
  std::array<double, 6> v{};  // m00, m01, m10, m11, tx, ty
  Point2 pivot;

  Point2 apply(Point2 p) const {
    const double dx = p.x - pivot.x;
    const double dy = p.y - pivot.y;
    return {pivot.x + dx + v[0] * dx + v[1] * dy + v[4],
            pivot.y + dy + v[2] * dx + v[3] * dy + v[5]};
  }
};

struct Objective {
  const GrayPatch* gradient;
  const std::vector<Point2>* samples;

  double operator()(const AffineParams& params) const {
    double energy = 0.0;
    for (const Point2& s : *samples) {
      const Point2 q = params.apply(s);
      energy += gradient->sample(q.x, q.y);
    }
    return energy;
  }
};

// Golden-section maximization on [lo, hi].
double golden_section_max(const Objective& objective, AffineParams params, int coord,
                          double lo, double hi, double tolerance) {
  double a = lo, b = hi;
  double c = b - kGoldenRatio * (b - a);
  double d = a + kGoldenRatio * (b - a);
  params.v[static_cast<std::size_t>(coord)] = c;
  double fc = objective(params);
  params.v[static_cast<std::size_t>(coord)] = d;
  double fd = objective(params);
  while (b - a > tolerance) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kGoldenRatio * (b - a);
      params.v[static_cast<std::size_t>(coord)] = c;
      fc = objective(params);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kGoldenRatio * (b - a);
      params.v[static_cast<std::size_t>(coord)] = d;
      fd = objective(params);
    }
  }
  return 0.5 * (a + b);
}

// Coarse scan to bracket the maximum, then golden-section refinement.
double line_search(const Objective& objective, const AffineParams& params, int coord,
                   double radius, double tolerance) {
  constexpr int kScanSteps = 16;
  const double center = params.v[static_cast<std::size_t>(coord)];
  const double step = 2.0 * radius / kScanSteps;

  AffineParams probe = params;
  double best_value = center;
  double best_energy = -1.0;
  for (int i = 0; i <= kScanSteps; ++i) {
    const double x = center - radius + i * step;
    probe.v[static_cast<std::size_t>(coord)] = x;
    const double e = objective(probe);
    if (e > best_energy) {
      best_energy = e;
      best_value = x;
    }
  }
  return golden_section_max(objective, params, coord, best_value - step,
                            best_value + step, tolerance);
}

}  // namespace

double GrayPatch::sample(double x, double y) const {
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const double fx = x - x0;
  const double fy = y - y0;
  auto read = [&](int px, int py) -> double {
    if (px < 0 || py < 0 || px >= width || py >= height) return 0.0;
    return at(px, py);
  };
  return read(x0, y0) * (1 - fx) * (1 - fy) + read(x0 + 1, y0) * fx * (1 - fy) +
         read(x0, y0 + 1) * (1 - fx) * fy + read(x0 + 1, y0 + 1) * fx * fy;
}

GrayPatch gradient_magnitude(const GrayPatch& patch) {
  if (patch.width < 2 || patch.height < 2 ||
      patch.intensity.size() != static_cast<std::size_t>(patch.width) *
                                    static_cast<std::size_t>(patch.height)) {
    throw InvalidSpec("gradient needs a consistent patch of at least 2x2");
  }
  GrayPatch out;
  out.width = patch.width;
  out.height = patch.height;
  out.intensity.assign(patch.intensity.size(), 0.0);
  for (int y = 0; y < patch.height; ++y) {
    for (int x = 0; x < patch.width; ++x) {
      double gx, gy;
      if (x == 0) {
        gx = patch.at(1, y) - patch.at(0, y);
      } else if (x == patch.width - 1) {
        gx = patch.at(x, y) - patch.at(x - 1, y);
      } else {
        gx = 0.5 * (patch.at(x + 1, y) - patch.at(x - 1, y));
      }
      if (y == 0) {
        gy = patch.at(x, 1) - patch.at(x, 0);
      } else if (y == patch.height - 1) {
        gy = patch.at(x, y) - patch.at(x, y - 1);
      } else {
        gy = 0.5 * (patch.at(x, y + 1) - patch.at(x, y - 1));
      }
      out.at(x, y) = std::hypot(gx, gy);
    }
  }
  return out;
}

RefineResult refine_boundary(const GrayPatch& patch, std::span<const Point2> boundary,
                             const RefineConfig& config) {
  if (patch.width < 8 || patch.height < 8) {
    throw InvalidSpec("refinement patches must be at least 8x8");
  }
  if (config.samples_per_edge <= 0 || config.max_iterations <= 0 ||
      config.step_tolerance <= 0.0 || config.discard_threshold <= 0.0 ||
      config.translation_radius <= 0.0 || config.linear_radius <= 0.0) {
    throw InvalidSpec("refine config fields must be positive");
  }
  if (boundary.size() < 3) {
    throw InvalidSpec("boundary needs at least 3 corners");
  }
  constexpr double kMargin = 2.0;
  for (const Point2& p : boundary) {
    if (p.x < kMargin || p.y < kMargin || p.x > patch.width - 1 - kMargin ||
        p.y > patch.height - 1 - kMargin) {
      throw OutOfPatch("boundary point closer than 2 px to the patch border");
    }
  }

  const GrayPatch gradient = gradient_magnitude(patch);

  const std::size_t n = boundary.size();
  std::vector<Point2> samples;
  samples.reserve(n * static_cast<std::size_t>(config.samples_per_edge));
  for (std::size_t j = 0; j < n; ++j) {
    const Point2 a = boundary[j];
    const Point2 b = boundary[(j + 1) % n];
    for (int k = 0; k < config.samples_per_edge; ++k) {
      const double t = static_cast<double>(k) / config.samples_per_edge;
      samples.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
    }
  }

  AffineParams params;
  for (const Point2& p : boundary) {
    params.pivot.x += p.x;
    params.pivot.y += p.y;
  }
  params.pivot.x /= static_cast<double>(n);
  params.pivot.y /= static_cast<double>(n);

  double extent = 1.0;
  for (const Point2& p : boundary) extent = std::max(extent, distance(p, params.pivot));

  const Objective objective{&gradient, &samples};
  const double energy_before = objective(params);
  double energy = energy_before;

  for (int iter = 0; iter < config.max_iterations; ++iter) {
    double movement = 0.0;
    for (int coord = 0; coord < 6; ++coord) {
      const bool is_translation = coord >= 4;
      const double radius = is_translation ? config.translation_radius : config.linear_radius;
      // Tolerances are expressed in induced boundary movement.
      const double tolerance =
          is_translation ? config.step_tolerance : config.step_tolerance / extent;
      const double candidate = line_search(objective, params, coord, radius, tolerance);

      AffineParams trial = params;
      trial.v[static_cast<std::size_t>(coord)] = candidate;
      const double trial_energy = objective(trial);
      if (trial_energy > energy) {
        const double delta = std::abs(candidate - params.v[static_cast<std::size_t>(coord)]);
        movement = std::max(movement, is_translation ? delta : delta * extent);
        params = trial;
        energy = trial_energy;
      }
    }
    if (movement < config.step_tolerance) break;
  }

  double max_corner_move = 0.0;
  for (const Point2& p : boundary) {
    max_corner_move = std::max(max_corner_move, distance(params.apply(p), p));
  }

  RefineResult result;
  result.energy_before = energy_before;
  if (max_corner_move > config.discard_threshold) {
    result.boundary.assign(boundary.begin(), boundary.end());
    result.accepted = false;
    result.energy_after = energy_before;
    return result;
  }
  result.boundary.reserve(n);
  for (const Point2& p : boundary) result.boundary.push_back(params.apply(p));
  result.accepted = true;
  result.energy_after = energy;
  return result;
}

}  // namespace signkit
