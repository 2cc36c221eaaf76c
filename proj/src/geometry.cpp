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

#include "textkernel/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace textkernel::geometry {

double Polygon::signed_area() const {
  const std::size_t n = vertices.size();
  if (n < 3) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += cross(vertices[i], vertices[(i + 1) % n]);
  return 0.5 * sum;
}

void Polygon::make_ccw() {
  if (signed_area() < 0.0) std::reverse(vertices.begin(), vertices.end());
}

namespace {

int orientation(Point2 a, Point2 b, Point2 c) {
  const double v = cross(b - a, c - a);
  return (v > 0.0) - (v < 0.0);
}

bool on_segment(Point2 a, Point2 b, Point2 p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

bool segments_intersect(Point2 p1, Point2 p2, Point2 q1, Point2 q2) {
  const int o1 = orientation(p1, p2, q1);
  const int o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1);
  const int o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  return (o1 == 0 && on_segment(p1, p2, q1)) || (o2 == 0 && on_segment(p1, p2, q2)) ||
         (o3 == 0 && on_segment(q1, q2, p1)) || (o4 == 0 && on_segment(q1, q2, p2));
}

}  // namespace

bool Polygon::is_simple() const {
  const std::size_t n = vertices.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = vertices[i];
    const Point2 b = vertices[(i + 1) % n];
    if (a == b) return false;
    // Adjacent edges may only share their common vertex.
    const Point2 c = vertices[(i + 2) % n];
    if (orientation(a, b, c) == 0 && dot(b - a, c - b) < 0.0) return false;
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_intersect(a, b, vertices[j], vertices[(j + 1) % n])) return false;
    }
  }
  return true;
}

void Polygon::validate() const {
  if (vertices.size() < 3) throw Error(ErrorKind::kInvalidInput, "polygon needs at least 3 vertices");
  for (const auto& v : vertices) {
    if (!std::isfinite(v.x) || !std::isfinite(v.y)) throw Error(ErrorKind::kInvalidInput, "non-finite vertex");
  }
  if (signed_area() == 0.0) throw Error(ErrorKind::kDegeneratePolygon, "polygon has zero area");
  if (!is_simple()) throw Error(ErrorKind::kInvalidInput, "polygon is self-intersecting");
}

double Polygon::min_x() const {
  return std::min_element(vertices.begin(), vertices.end(), [](Point2 a, Point2 b) { return a.x < b.x; })->x;
}
double Polygon::max_x() const {
  return std::max_element(vertices.begin(), vertices.end(), [](Point2 a, Point2 b) { return a.x < b.x; })->x;
}
double Polygon::min_y() const {
  return std::min_element(vertices.begin(), vertices.end(), [](Point2 a, Point2 b) { return a.y < b.y; })->y;
}
double Polygon::max_y() const {
  return std::max_element(vertices.begin(), vertices.end(), [](Point2 a, Point2 b) { return a.y < b.y; })->y;
}

ShrinkParams::ShrinkParams(double r) : r_(r) {
  if (!(r > 0.0 && r <= 1.0)) throw Error(ErrorKind::kInvalidInput, "shrink ratio must lie in (0, 1]");
}

AreaPerimeter area_perimeter(const Polygon& poly) {
  if (poly.vertices.size() < 3) throw Error(ErrorKind::kDegeneratePolygon, "polygon needs at least 3 vertices");
  AreaPerimeter ap;
  ap.area = std::abs(poly.signed_area());
  const std::size_t n = poly.vertices.size();
  for (std::size_t i = 0; i < n; ++i) ap.perimeter += distance(poly.vertices[i], poly.vertices[(i + 1) % n]);
  if (ap.area == 0.0) throw Error(ErrorKind::kDegeneratePolygon, "polygon has zero area");
  return ap;
}

double shrink_offset(double area, double perimeter, const ShrinkParams& params) {
  if (perimeter <= 0.0) throw Error(ErrorKind::kZeroPerimeter, "perimeter must be positive");
  return area * (1.0 - params.r() * params.r()) / perimeter;
}

namespace {

// Even-odd scanline fill of cell centers origin + (i + 0.5) * cell.
std::vector<std::uint8_t> rasterize_grid(const Polygon& poly, Point2 origin, double cell, int nx, int ny) {
  std::vector<std::uint8_t> grid(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny), 0);
  const std::size_t n = poly.vertices.size();
  if (n < 3) return grid;
  const double lo_y = poly.min_y();
  const double hi_y = poly.max_y();
  std::vector<double> xs;
  for (int j = 0; j < ny; ++j) {
    const double yc = origin.y + (j + 0.5) * cell;
    if (yc < lo_y || yc >= hi_y) continue;
    xs.clear();
    for (std::size_t i = 0; i < n; ++i) {
      const Point2 a = poly.vertices[i];
      const Point2 b = poly.vertices[(i + 1) % n];
      if ((a.y <= yc && yc < b.y) || (b.y <= yc && yc < a.y)) {
        xs.push_back(a.x + (yc - a.y) * (b.x - a.x) / (b.y - a.y));
      }
    }
    std::sort(xs.begin(), xs.end());
    for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
      const double first = std::ceil((xs[k] - origin.x) / cell - 0.5);
      const double last = std::ceil((xs[k + 1] - origin.x) / cell - 0.5);
      const int i0 = static_cast<int>(std::clamp(first, 0.0, static_cast<double>(nx)));
      const int i1 = static_cast<int>(std::clamp(last, 0.0, static_cast<double>(nx)));
      std::fill(grid.begin() + static_cast<std::ptrdiff_t>(j) * nx + i0,
                grid.begin() + static_cast<std::ptrdiff_t>(j) * nx + std::max(i0, i1), std::uint8_t{1});
    }
  }
  return grid;
}

}  // namespace

raster::BinaryMask rasterize(const Polygon& poly, int width, int height) {
  return raster::BinaryMask(width, height, rasterize_grid(poly, {0.0, 0.0}, 1.0, width, height));
}

raster::BinaryMask shrink_polygon(const Polygon& poly, const ShrinkParams& params, int width, int height) {
  const auto ap = area_perimeter(poly);
  const double d = shrink_offset(ap.area, ap.perimeter, params);
  raster::BinaryMask mask = rasterize(poly, width, height);
  const auto dist = raster::euclidean_distance_transform(mask);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (dist.data[i] <= d) mask.data()[i] = 0;
  }
  return mask;
}

std::vector<Point2> convex_hull(std::span<const Point2> points) {
  std::vector<Point2> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), [](Point2 a, Point2 b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto p : pts) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

Polygon smallest_enclosing_rectangle(std::span<const Point2> points) {
  if (points.empty()) throw Error(ErrorKind::kInvalidInput, "enclosing rectangle of an empty point set");
  const auto hull = convex_hull(points);
  if (hull.size() == 1) return Polygon{{hull[0], hull[0], hull[0], hull[0]}};
  if (hull.size() == 2) return Polygon{{hull[0], hull[1], hull[1], hull[0]}};

  const std::size_t n = hull.size();
  auto at = [&](std::size_t i) { return hull[i % n]; };
  double best_area = std::numeric_limits<double>::infinity();
  Polygon best;
  std::size_t far_u = 1, far_v = 1, near_u = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 e = at(i + 1) - at(i);
    const Point2 u = (1.0 / norm(e)) * e;
    const Point2 v{-u.y, u.x};
    far_u = std::max(far_u, i + 1);
    while (dot(at(far_u + 1), u) > dot(at(far_u), u)) ++far_u;
    far_v = std::max(far_v, far_u);
    while (dot(at(far_v + 1), v) > dot(at(far_v), v)) ++far_v;
    near_u = std::max(near_u, far_v);
    while (dot(at(near_u + 1), u) < dot(at(near_u), u)) ++near_u;

    const double min_u = dot(at(near_u), u);
    const double max_u = dot(at(far_u), u);
    const double min_v = dot(at(i), v);
    const double max_v = dot(at(far_v), v);
    const double area = (max_u - min_u) * (max_v - min_v);
    if (area < best_area) {
      best_area = area;
      best.vertices = {min_u * u + min_v * v, max_u * u + min_v * v, max_u * u + max_v * v, min_u * u + max_v * v};
    }
  }
  return best;
}

double polygon_iou(const Polygon& a, const Polygon& b, double cell) {
  if (!(cell > 0.0)) throw Error(ErrorKind::kInvalidInput, "iou grid cell must be positive");
  if (a.vertices.size() < 3 || b.vertices.size() < 3) return 0.0;
  if (a.max_x() <= b.min_x() || b.max_x() <= a.min_x() || a.max_y() <= b.min_y() || b.max_y() <= a.min_y()) {
    return 0.0;
  }
  const Point2 origin{std::min(a.min_x(), b.min_x()), std::min(a.min_y(), b.min_y())};
  const double span_x = std::max(a.max_x(), b.max_x()) - origin.x;
  const double span_y = std::max(a.max_y(), b.max_y()) - origin.y;
  const double nx = std::max(1.0, std::ceil(span_x / cell));
  const double ny = std::max(1.0, std::ceil(span_y / cell));
  if (nx * ny > 2e8) throw Error(ErrorKind::kInvalidInput, "iou grid too fine for polygon extent");
  const auto ga = rasterize_grid(a, origin, cell, static_cast<int>(nx), static_cast<int>(ny));
  const auto gb = rasterize_grid(b, origin, cell, static_cast<int>(nx), static_cast<int>(ny));
  std::size_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < ga.size(); ++i) {
    inter += static_cast<std::size_t>(ga[i] & gb[i]);
    uni += static_cast<std::size_t>(ga[i] | gb[i]);
  }
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

std::vector<Point2> boundary_pixel_corners(const raster::BinaryMask& mask) {
  std::vector<Point2> corners;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.at(x, y)) continue;
      if (mask.get_or_background(x - 1, y) && mask.get_or_background(x + 1, y) && mask.get_or_background(x, y - 1) &&
          mask.get_or_background(x, y + 1)) {
        continue;
      }
      const double fx = x, fy = y;
      corners.insert(corners.end(), {{fx, fy}, {fx + 1, fy}, {fx + 1, fy + 1}, {fx, fy + 1}});
    }
  }
  return corners;
}

}  // namespace textkernel::geometry
