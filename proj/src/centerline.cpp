// Copyright (c) 2026 The textkernel Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "textkernel/centerline.hpp"

#include <algorithm>
#include <cmath>

#include "textkernel/simd/kernels.hpp"

namespace textkernel::centerline {

CenterPoints generate_center_points(const raster::BinaryMask& region, double suppress_mult) {
  if (!(suppress_mult > 0.0)) throw Error(ErrorKind::kInvalidInput, "suppression multiplier must be positive");
  const raster::PixelBox box = raster::foreground_bounds(region);
  if (box.empty()) throw Error(ErrorKind::kEmptyRegion, "region has no foreground pixels");

  // Outside the image counts as background, so cropping to the bounding box
  // leaves every distance unchanged.
  const raster::BinaryMask local = raster::crop(region, box);
  const double area = static_cast<double>(local.count());
  const double perimeter = raster::trace_contour(local).length();
  CenterPoints out;
  out.min_r = area / perimeter;

  auto dist = raster::euclidean_distance_transform(local).data;
  const auto& k = simd::active();
  const double suppress_radius = suppress_mult * out.min_r;
  const int w = local.width();
  const int h = local.height();
  while (true) {
    const std::size_t idx = k.argmax_first(dist.data(), dist.size());
    const double best = dist[idx];
    if (!(best > out.min_r)) break;
    const int px = static_cast<int>(idx % static_cast<std::size_t>(w));
    const int py = static_cast<int>(idx / static_cast<std::size_t>(w));
    const double cx = px + 0.5;
    const double cy = py + 0.5;
    out.points.push_back({{cx + box.x0, cy + box.y0}, best});

    const int x0 = std::max(0, static_cast<int>(std::floor(cx - suppress_radius)) - 1);
    const int x1 = std::min(w, static_cast<int>(std::ceil(cx + suppress_radius)) + 1);
    const int y0 = std::max(0, static_cast<int>(std::floor(cy - suppress_radius)) - 1);
    const int y1 = std::min(h, static_cast<int>(std::ceil(cy + suppress_radius)) + 1);
    k.suppress_disk(dist.data(), static_cast<std::size_t>(w), x0, x1, y0, y1, cx, cy, suppress_radius);
    dist[idx] = 0.0;  // popped
  }
  return out;
}

CenterLine reorder_center_points(const std::vector<CenterPoint>& points, double min_r) {
  if (points.empty()) throw Error(ErrorKind::kInvalidInput, "cannot order an empty center point list");
  CenterLine line;
  line.min_r = min_r;
  if (points.size() == 1) {
    line.points = points;
    return line;
  }

  auto& ordered = line.points;
  ordered.assign(points.begin(), points.begin() + 2);
  for (std::size_t i = 2; i < points.size(); ++i) {
    const Point2 p = points[i].position;
    const double left_d = distance(p, ordered.front().position);
    const double right_d = distance(p, ordered.back().position);
    const double span_d = distance(ordered.front().position, ordered.back().position);
    if (right_d > span_d && right_d > left_d) {
      ordered.insert(ordered.begin(), points[i]);
    } else if (left_d > span_d && right_d < left_d) {
      ordered.push_back(points[i]);
    } else {
      // Cheapest insertion: the pair whose edge grows least when p is spliced in.
      auto added = [&](std::size_t j) {
        return distance(p, ordered[j].position) + distance(p, ordered[j - 1].position) -
               distance(ordered[j].position, ordered[j - 1].position);
      };
      std::size_t best = 1;
      double best_cost = added(1);
      for (std::size_t j = 2; j < ordered.size(); ++j) {
        const double cost = added(j);
        if (cost < best_cost) {
          best_cost = cost;
          best = j;
        }
      }
      ordered.insert(ordered.begin() + static_cast<std::ptrdiff_t>(best), points[i]);
    }
  }
  if (ordered.front().position.x > ordered.back().position.x) std::reverse(ordered.begin(), ordered.end());
  return line;
}

namespace {

constexpr double kMarchStep = 0.25;
constexpr double kMinExtension = 1.0;
constexpr double kFollowStep = 1.0;
constexpr double kMaxTurn = 0.25;  // radians per step
constexpr double kMaxShift = 1.5;
constexpr double kCapSlack = 1.5;
constexpr int kRefinePasses = 8;
constexpr double kRefineTolerance = 0.01;
constexpr int kRefineChords = 4;  // parallel chords on each side
constexpr double kRefineChordGap = 0.5;
constexpr double kSmoothSpan = 20.0;

bool inside(const raster::BinaryMask& region, Point2 p) {
  return region.get_or_background(static_cast<int>(std::floor(p.x)), static_cast<int>(std::floor(p.y)));
}

// Last in-region position along the ray from `from` in direction `dir`.
Point2 march(const raster::BinaryMask& region, Point2 from, Point2 dir) {
  const double limit = std::hypot(region.width(), region.height()) + 2.0;
  Point2 last = from;
  for (double t = kMarchStep; t <= limit; t += kMarchStep) {
    const Point2 p = from + t * dir;
    if (!inside(region, p)) break;
    last = p;
  }
  return last;
}

// Distance from `from` to the region boundary along `dir`, located to within
// 1/1024 px by bisecting the last marched step.
double reach(const raster::BinaryMask& region, Point2 from, Point2 dir) {
  double lo = distance(march(region, from, dir), from);
  double hi = lo + kMarchStep;
  for (int k = 0; k < 8; ++k) {
    const double mid = 0.5 * (lo + hi);
    (inside(region, from + mid * dir) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Follows the strip from an end center: unit steps along the current
// direction, each re-centred on the chord across the region perpendicular to
// it, so the walk bends with the strip instead of leaving through its side.
// Finishes with a fine ray march to the boundary.
Point2 follow_to_end(const raster::BinaryMask& region, Point2 from, Point2 dir, double radius) {
  const int max_steps = region.width() + region.height();
  const Point2 start_dir = dir;
  // Offset of the chord midpoint from the start itself, held fixed so a
  // spine sitting half a pixel off the true middle stays straight.
  struct Chord {
    double offset;  // midpoint relative to the probe point, along the normal
    double length;
  };
  auto chord = [&](Point2 at, Point2 normal) {
    const double plus = distance(march(region, at, normal), at);
    const double minus = distance(march(region, at, -1.0 * normal), at);
    return Chord{0.5 * (plus - minus), plus + minus};
  };
  const double bias = std::clamp(chord(from, {-dir.y, dir.x}).offset, -1.0, 1.0);
  Point2 pos = from;
  for (int i = 0; i < max_steps; ++i) {
    const Point2 ahead = pos + kFollowStep * dir;
    if (!inside(region, ahead)) break;
    const Point2 normal{-dir.y, dir.x};
    // A chord that is short, or whose midpoint jumps sideways, cuts the end
    // cap instead of spanning the strip.
    const Chord c = chord(ahead, normal);
    const double shift = c.offset - bias;
    if (c.length < 2.0 * radius - kCapSlack || std::abs(shift) > kMaxShift) break;
    Point2 centred = ahead + shift * normal;
    if (!inside(region, centred)) centred = ahead;
    const Point2 step = centred - pos;
    const double len = norm(step);
    if (len == 0.0) break;
    // Turn at most kMaxTurn per step; the strip's bend catches up over a few
    // steps, while chords skewed by the end cap cannot swing the walk around.
    const double turn = std::atan2(cross(dir, step), dot(dir, step));
    const double limited = std::clamp(turn, -kMaxTurn, kMaxTurn);
    const Point2 next_dir{std::cos(limited) * dir.x - std::sin(limited) * dir.y,
                          std::sin(limited) * dir.x + std::cos(limited) * dir.y};
    if (dot(next_dir, start_dir) <= 0.0) break;
    const Point2 next = limited == turn ? centred : pos + kFollowStep * next_dir;
    if (!inside(region, next)) break;
    pos = next;
    dir = next_dir;
  }
  return march(region, pos, dir);
}

}  // namespace

CenterLine extend_center_line(const CenterLine& line, const raster::BinaryMask& region) {
  if (line.points.size() < 2) return line;
  CenterLine out = line;

  auto extension = [&](const CenterPoint& end, const CenterPoint& neighbour, CenterPoint& added) {
    const Point2 dir = end.position - neighbour.position;
    const double len = norm(dir);
    if (len == 0.0 || !inside(region, end.position)) return false;
    const Point2 stop = follow_to_end(region, end.position, (1.0 / len) * dir, end.radius);
    if (distance(stop, end.position) < kMinExtension) return false;
    added = {stop, end.radius};
    return true;
  };

  CenterPoint added;
  if (extension(line.points.front(), line.points[1], added)) out.points.insert(out.points.begin(), added);
  const std::size_t n = line.points.size();
  if (extension(line.points.back(), line.points[n - 2], added)) out.points.push_back(added);
  return out;
}

CenterLine resample_center_line(const CenterLine& line, double spacing) {
  if (!(spacing > 0.0)) throw Error(ErrorKind::kInvalidInput, "resample spacing must be positive");
  const auto& pts = line.points;
  if (pts.size() < 2) return line;
  const std::size_t n = pts.size();
  // Phantom end points mirror the neighbours so the end segments stay straight.
  auto at = [&](std::ptrdiff_t i) -> Point2 {
    if (i < 0) return 2.0 * pts[0].position - pts[1].position;
    if (i >= static_cast<std::ptrdiff_t>(n)) return 2.0 * pts[n - 1].position - pts[n - 2].position;
    return pts[static_cast<std::size_t>(i)].position;
  };
  auto knot = [](Point2 a, Point2 b) { return std::max(std::sqrt(distance(a, b)), 1e-9); };
  auto lerp = [](Point2 a, Point2 b, double ta, double tb, double t) {
    return ((tb - t) / (tb - ta)) * a + ((t - ta) / (tb - ta)) * b;
  };

  CenterLine out;
  out.min_r = line.min_r;
  for (std::size_t s = 0; s + 1 < n; ++s) {
    const auto i = static_cast<std::ptrdiff_t>(s);
    const Point2 p0 = at(i - 1), p1 = at(i), p2 = at(i + 1), p3 = at(i + 2);
    const double t0 = 0.0, t1 = t0 + knot(p0, p1), t2 = t1 + knot(p1, p2), t3 = t2 + knot(p2, p3);
    const int pieces = std::max(1, static_cast<int>(std::ceil(distance(p1, p2) / spacing)));
    out.points.push_back(pts[s]);
    for (int k = 1; k < pieces; ++k) {
      const double f = static_cast<double>(k) / pieces;
      const double t = t1 + f * (t2 - t1);
      const Point2 a1 = lerp(p0, p1, t0, t1, t), a2 = lerp(p1, p2, t1, t2, t), a3 = lerp(p2, p3, t2, t3, t);
      const Point2 b1 = lerp(a1, a2, t0, t2, t), b2 = lerp(a2, a3, t1, t3, t);
      out.points.push_back({lerp(b1, b2, t1, t2, t), (1.0 - f) * pts[s].radius + f * pts[s + 1].radius});
    }
  }
  out.points.push_back(pts[n - 1]);
  return out;
}

CenterLine refine_center_line(const CenterLine& line, const raster::BinaryMask& region, double spacing) {
  CenterLine out = resample_center_line(line, spacing);
  auto& pts = out.points;
  const std::size_t n = pts.size();
  if (n < 3) return out;
  for (int pass = 0; pass < kRefinePasses; ++pass) {
    std::vector<Point2> moved(n, Point2{});
    double largest = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const Point2 p = pts[i].position;
      Point2 tangent = pts[i + 1].position - pts[i - 1].position;
      const double len = norm(tangent);
      if (len == 0.0 || !inside(region, p)) continue;
      tangent = (1.0 / len) * tangent;
      const Point2 normal{-tangent.y, tangent.x};
      // Average parallel chords so the pixel staircase of the boundary does
      // not quantize the midpoint.
      double offset_sum = 0.0;
      int used = 0;
      for (int k = -kRefineChords; k <= kRefineChords; ++k) {
        const Point2 q = p + (kRefineChordGap * k) * tangent;
        if (!inside(region, q)) continue;
        const double plus = reach(region, q, normal);
        const double minus = reach(region, q, -1.0 * normal);
        // A chord much shorter than the strip is cut by an end cap or a notch.
        if (plus + minus < pts[i].radius) continue;
        offset_sum += 0.5 * (plus - minus);
        ++used;
      }
      if (2 * used <= kRefineChords) continue;
      // Large corrections are spread over passes so the tangents can follow.
      const double limit = 0.5 * pts[i].radius;
      const double offset = std::clamp(offset_sum / used, -limit, limit);
      moved[i] = offset * normal;
      largest = std::max(largest, std::abs(offset));
    }
    moved.front() = moved[1];
    moved.back() = moved[n - 2];
    for (std::size_t i = 0; i < n; ++i) pts[i].position = pts[i].position + moved[i];
    if (largest < kRefineTolerance) break;
  }
  // Quadratic Savitzky-Golay pass over about kSmoothSpan px on each side:
  // removes the remaining staircase plateaus while keeping the bend.
  const std::size_t m = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(kSmoothSpan / spacing)));
  const double mm = static_cast<double>(m);
  const double norm_sg = (2.0 * mm + 3.0) * (2.0 * mm + 1.0) * (2.0 * mm - 1.0) / 3.0;
  std::vector<Point2> smooth(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i < m || i + m >= n) {
      smooth[i] = pts[i].position;
      continue;
    }
    Point2 acc{};
    for (std::size_t j = i - m; j <= i + m; ++j) {
      const double k = static_cast<double>(j) - static_cast<double>(i);
      acc = acc + ((3.0 * mm * mm + 3.0 * mm - 1.0 - 5.0 * k * k) / norm_sg) * pts[j].position;
    }
    smooth[i] = acc;
  }
  for (std::size_t i = 0; i < n; ++i) pts[i].position = smooth[i];
  return out;
}

}  // namespace textkernel::centerline
