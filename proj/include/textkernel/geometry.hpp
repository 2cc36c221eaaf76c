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

#pragma once

#include <span>
#include <vector>

#include "textkernel/common.hpp"
#include "textkernel/raster.hpp"

namespace textkernel::geometry {

// Implicitly closed vertex ring. Construction does not validate; call
// validate() where the full invariant (simple, >= 3 vertices, nonzero area)
// is required.
struct Polygon {
  std::vector<Point2> vertices;

  // Shoelace sum / 2 in the (x, y) frame; positive means counter-clockwise.
  double signed_area() const;
  void make_ccw();
  bool is_simple() const;
  // Throws DegeneratePolygon / InvalidInput; O(n^2) simplicity check.
  void validate() const;

  double min_x() const;
  double max_x() const;
  double min_y() const;
  double max_y() const;
};

struct AreaPerimeter {
  double area = 0.0;
  double perimeter = 0.0;
};

// Kernel shrink ratio, 0 < r <= 1.
class ShrinkParams {
 public:
  explicit ShrinkParams(double r = 0.6);
  double r() const noexcept { return r_; }

 private:
  double r_;
};

AreaPerimeter area_perimeter(const Polygon& poly);

// Inset distance A(1 - r^2) / L used to build text-kernel labels.
double shrink_offset(double area, double perimeter, const ShrinkParams& params);

// Pixels whose centers lie inside the polygon (even-odd rule, half-open at
// the boundary so a polygon [0, n] x [0, n] covers exactly n x n pixels).
raster::BinaryMask rasterize(const Polygon& poly, int width, int height);

// Rasterize, then keep pixels whose interior distance exceeds the shrink
// offset. The result may be empty for thin polygons.
raster::BinaryMask shrink_polygon(const Polygon& poly, const ShrinkParams& params, int width, int height);

std::vector<Point2> convex_hull(std::span<const Point2> points);

// Minimum-area oriented rectangle (rotating calipers over the hull). Always
// four vertices; degenerate inputs give zero-width or zero-height boxes.
Polygon smallest_enclosing_rectangle(std::span<const Point2> points);

// Rasterized IOU on a grid of square cells of side `cell` anchored at the
// lower corner of the union bounding box. Returns 0 when the union is empty.
double polygon_iou(const Polygon& a, const Polygon& b, double cell = 1.0);

// Corners of every boundary pixel (foreground with a 4-neighbour in the
// background); their hull equals the hull of the whole pixel set.
std::vector<Point2> boundary_pixel_corners(const raster::BinaryMask& mask);

}  // namespace textkernel::geometry
