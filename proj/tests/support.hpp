#pragma once

// Shared test utilities: independent oracle implementations (naive linear
// solve, brute-force matching/mining/NMS/AP) and synthetic data helpers.
// Everything here is deliberately written from the definitions, not by
// calling into the library code it checks.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "signkit/anchors.hpp"
#include "signkit/detector.hpp"
#include "signkit/refine.hpp"
#include "signkit/rng.hpp"
#include "signkit/targets.hpp"
#include "signkit/templates.hpp"

namespace signkit::testing {

// ---------------------------------------------------------------------------
// Linear-algebra oracle: Gaussian elimination with partial pivoting.
// ---------------------------------------------------------------------------

inline std::vector<double> solve_dense(std::vector<std::vector<double>> a,
                                       std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double acc = b[i];
    for (std::size_t c = i + 1; c < n; ++c) acc -= a[i][c] * x[c];
    x[i] = acc / a[i][i];
  }
  return x;
}

// 4-point homography via the raw (unnormalized) 8x8 system, h33 = 1.
inline Homography homography_oracle(const Quad& src, const Quad& dst) {
  std::vector<std::vector<double>> a(8, std::vector<double>(8, 0.0));
  std::vector<double> b(8, 0.0);
  for (std::size_t i = 0; i < 4; ++i) {
    const double x = src[i].x, y = src[i].y, u = dst[i].x, v = dst[i].y;
    a[2 * i] = {x, y, 1, 0, 0, 0, -x * u, -y * u};
    a[2 * i + 1] = {0, 0, 0, x, y, 1, -x * v, -y * v};
    b[2 * i] = u;
    b[2 * i + 1] = v;
  }
  const std::vector<double> h = solve_dense(std::move(a), std::move(b));
  Homography out;
  out.m = {h[0], h[1], h[2], h[3], h[4], h[5], h[6], h[7], 1.0};
  return out;
}

// ---------------------------------------------------------------------------
// Random geometry.
// ---------------------------------------------------------------------------

// Convex quad: a square of side `size` at `origin`, each corner jittered by
// up to `jitter` * size. Regenerates until convex.
inline Quad random_quad(Rng& rng, double size = 100.0, Point2 origin = {0, 0},
                        double jitter = 0.15) {
  while (true) {
    Quad q{{{origin.x, origin.y},
            {origin.x + size, origin.y},
            {origin.x + size, origin.y + size},
            {origin.x, origin.y + size}}};
    for (auto& p : q) {
      p.x += size * rng.uniform(-jitter, jitter);
      p.y += size * rng.uniform(-jitter, jitter);
    }
    bool convex = true;
    double reference = 0.0;
    for (std::size_t i = 0; i < 4 && convex; ++i) {
      const Point2 a = q[i], b = q[(i + 1) % 4], c = q[(i + 2) % 4];
      const double cross = (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x);
      if (i == 0) {
        reference = cross;
      } else if (cross * reference <= 0.0) {
        convex = false;
      }
    }
    if (convex) return q;
  }
}

inline AABox random_box(Rng& rng, double span = 200.0) {
  const double cx = rng.uniform(0.0, span);
  const double cy = rng.uniform(0.0, span);
  const double w = rng.uniform(10.0, span / 2.0);
  const double h = rng.uniform(10.0, span / 2.0);
  return {cx - w / 2, cy - h / 2, cx + w / 2, cy + h / 2};
}

// ---------------------------------------------------------------------------
// Matching / mining / NMS / AP oracles.
// ---------------------------------------------------------------------------

inline double iou_oracle(const AABox& a, const AABox& b) {
  const double il = std::max(a.left, b.left);
  const double it = std::max(a.top, b.top);
  const double ir = std::min(a.right, b.right);
  const double ib = std::min(a.bottom, b.bottom);
  if (ir <= il || ib <= it) return 0.0;
  const double inter = (ir - il) * (ib - it);
  const double area_a = (a.right - a.left) * (a.bottom - a.top);
  const double area_b = (b.right - b.left) * (b.bottom - b.top);
  const double uni = area_a + area_b - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

struct MatchOracleResult {
  std::vector<int> positive_gt;  // gt index per box, -1 for negative
  int k_positive = 0;
};

inline MatchOracleResult match_oracle(const std::vector<DefaultBox>& boxes,
                                      const std::vector<GroundTruthSign>& gts,
                                      double threshold) {
  MatchOracleResult result;
  result.positive_gt.assign(boxes.size(), -1);
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    int best_gt = -1;
    double best = threshold;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      const double v =
          iou_oracle(boxes[i].box(), AABox::of_quad(gts[g].template_vertices));
      if (v > best) {
        best = v;
        best_gt = static_cast<int>(g);
      }
    }
    result.positive_gt[i] = best_gt;
  }
  for (std::size_t g = 0; g < gts.size(); ++g) {
    int best_box = -1;
    double best = -1.0;
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      const double v =
          iou_oracle(boxes[i].box(), AABox::of_quad(gts[g].template_vertices));
      if (v > best) {
        best = v;
        best_box = static_cast<int>(i);
      }
    }
    if (best_box >= 0) result.positive_gt[static_cast<std::size_t>(best_box)] = static_cast<int>(g);
  }
  for (int g : result.positive_gt) {
    if (g >= 0) ++result.k_positive;
  }
  return result;
}

// Hard-negative selection by full sort of (score, index).
inline std::vector<std::size_t> mine_oracle(const std::vector<int>& positive_gt,
                                            const std::vector<std::vector<double>>& logits,
                                            int k_positive, int min_kept = 8) {
  std::vector<std::pair<double, std::size_t>> candidates;
  for (std::size_t i = 0; i < positive_gt.size(); ++i) {
    if (positive_gt[i] >= 0) continue;
    double peak = logits[i][0];
    for (double v : logits[i]) peak = std::max(peak, v);
    double sum = 0.0;
    for (double v : logits[i]) sum += std::exp(v - peak);
    const double background =
        std::exp(logits[i][static_cast<std::size_t>(kBackgroundClass)] - peak) / sum;
    candidates.emplace_back(1.0 - background, i);
  }
  std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  const std::size_t quota =
      static_cast<std::size_t>(3 * (k_positive > 0 ? k_positive : min_kept));
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < candidates.size() && i < quota; ++i) {
    kept.push_back(candidates[i].second);
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

// NMS oracle: repeatedly pick the best-ranked unsuppressed detection and
// suppress same-class overlapping ones.
inline std::vector<Detection> nms_oracle(std::vector<Detection> dets, double threshold) {
  std::vector<bool> removed(dets.size(), false);
  std::vector<Detection> kept;
  while (true) {
    int best = -1;
    for (std::size_t i = 0; i < dets.size(); ++i) {
      if (removed[i]) continue;
      if (best < 0 || detection_order(dets[i], dets[static_cast<std::size_t>(best)])) {
        best = static_cast<int>(i);
      }
    }
    if (best < 0) break;
    removed[static_cast<std::size_t>(best)] = true;
    kept.push_back(dets[static_cast<std::size_t>(best)]);
    for (std::size_t i = 0; i < dets.size(); ++i) {
      if (removed[i] || dets[i].shape != kept.back().shape) continue;
      if (iou_oracle(dets[i].bbox, kept.back().bbox) > threshold) removed[i] = true;
    }
  }
  return kept;
}

// All-point-interpolated AP from the definition: each true positive
// contributes (1/n_gt) times the maximum precision at or after its rank.
inline double ap_oracle(std::vector<std::pair<double, bool>> scored, int n_gt) {
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  double ap = 0.0;
  int tp_before = 0;
  for (std::size_t i = 0; i < scored.size(); ++i) {
    if (!scored[i].second) continue;
    double best_precision = 0.0;
    int tp = tp_before;
    for (std::size_t j = i; j < scored.size(); ++j) {
      if (scored[j].second) ++tp;
      best_precision = std::max(best_precision,
                                static_cast<double>(tp) / static_cast<double>(j + 1));
    }
    ap += best_precision / n_gt;
    ++tp_before;
  }
  return ap;
}

// ---------------------------------------------------------------------------
// Rasterization for refinement tests.
// ---------------------------------------------------------------------------

inline bool inside_convex(const std::vector<Point2>& poly, Point2 p) {
  double reference = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point2 a = poly[i];
    const Point2 b = poly[(i + 1) % poly.size()];
    const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
    if (i == 0) {
      reference = cross;
    } else if (cross * reference < 0.0) {
      return false;
    }
  }
  return true;
}

// Supersampled fill of a convex polygon: 4x4 coverage per pixel, which gives
// the edges roughly one pixel of anti-aliased ramp.
inline GrayPatch rasterize_convex(const std::vector<Point2>& poly, int width, int height,
                                  double foreground = 1.0, double background = 0.0) {
  GrayPatch patch;
  patch.width = width;
  patch.height = height;
  patch.intensity.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
                         background);
  constexpr int kSub = 4;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      int hits = 0;
      for (int sy = 0; sy < kSub; ++sy) {
        for (int sx = 0; sx < kSub; ++sx) {
          const Point2 p{x + (sx + 0.5) / kSub - 0.5, y + (sy + 0.5) / kSub - 0.5};
          if (inside_convex(poly, p)) ++hits;
        }
      }
      const double coverage = static_cast<double>(hits) / (kSub * kSub);
      patch.at(x, y) = background + coverage * (foreground - background);
    }
  }
  return patch;
}

// Octagon boundary for a pose quad, in patch coordinates.
inline std::vector<Point2> octagon_at(const Quad& quad) {
  return template_vertices_to_boundary(quad, ShapeClass::Octagon);
}

}  // namespace signkit::testing
