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

#include "textkernel/overlay.hpp"

#include <algorithm>
#include <cmath>

#include "textkernel/image_io.hpp"

namespace textkernel::overlay {

Canvas::Canvas(const raster::Raster& base)
    : width_(base.width), height_(base.height), rgb_(static_cast<std::size_t>(base.width) * base.height * 3) {
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      const auto v = static_cast<std::uint8_t>(std::clamp(std::lround(base.at(x, y, 0)), 0L, 255L));
      plot(x, y, {v, v, v});
    }
  }
}

Canvas::Canvas(const raster::BinaryMask& base)
    : width_(base.width()), height_(base.height()), rgb_(static_cast<std::size_t>(base.width()) * base.height() * 3) {
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      const std::uint8_t v = base.at(x, y) ? 160 : 0;
      plot(x, y, {v, v, v});
    }
  }
}

Rgb Canvas::at(int x, int y) const {
  const std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 3;
  return {rgb_[i], rgb_[i + 1], rgb_[i + 2]};
}

void Canvas::plot(int x, int y, Rgb c) {
  if (x < 0 || y < 0 || x >= width_ || y >= height_) return;
  const std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 3;
  rgb_[i] = c.r;
  rgb_[i + 1] = c.g;
  rgb_[i + 2] = c.b;
}

void Canvas::line(Point2 a, Point2 b, Rgb c) {
  const double len = distance(a, b);
  const int steps = std::max(1, static_cast<int>(std::ceil(len * 2.0)));
  for (int k = 0; k <= steps; ++k) {
    const Point2 p = a + (static_cast<double>(k) / steps) * (b - a);
    plot(static_cast<int>(std::floor(p.x)), static_cast<int>(std::floor(p.y)), c);
  }
}

void Canvas::circle(Point2 center, double radius, Rgb c) {
  const int steps = std::max(16, static_cast<int>(std::ceil(radius * 8.0)));
  Point2 prev{center.x + radius, center.y};
  for (int k = 1; k <= steps; ++k) {
    const double t = 2.0 * M_PI * k / steps;
    const Point2 p{center.x + radius * std::cos(t), center.y + radius * std::sin(t)};
    line(prev, p, c);
    prev = p;
  }
}

void Canvas::polygon(const geometry::Polygon& poly, Rgb c) {
  const auto& v = poly.vertices;
  for (std::size_t i = 0; i < v.size(); ++i) line(v[i], v[(i + 1) % v.size()], c);
}

void Canvas::polyline(const std::vector<Point2>& pts, Rgb c) {
  for (std::size_t i = 1; i < pts.size(); ++i) line(pts[i - 1], pts[i], c);
}

void Canvas::save_png(const std::filesystem::path& path) const { io::write_rgb_png(path, width_, height_, rgb_); }

void draw_centerline(Canvas& canvas, const centerline::CenterLine& line) {
  std::vector<Point2> spine;
  for (const auto& p : line.points) {
    canvas.circle(p.position, p.radius, kCircleColor);
    spine.push_back(p.position);
  }
  canvas.polyline(spine, kLineColor);
}

void draw_tps_grid(Canvas& canvas, const tps::StripWarp& warp, int spacing) {
  spacing = std::max(1, spacing);
  auto trace = [&](auto point_at, int samples) {
    std::vector<Point2> pts;
    for (int k = 0; k <= samples; ++k) pts.push_back(warp.source_of(point_at(k)));
    canvas.polyline(pts, kGridColor);
  };
  std::vector<int> rows, cols;
  for (int v = 0; v < warp.height; v += spacing) rows.push_back(v);
  rows.push_back(warp.height);
  for (int u = 0; u < warp.width; u += spacing) cols.push_back(u);
  cols.push_back(warp.width);
  for (const int v : rows) trace([&](int k) { return Point2{static_cast<double>(k), static_cast<double>(v)}; }, warp.width);
  for (const int u : cols) trace([&](int k) { return Point2{static_cast<double>(u), static_cast<double>(k)}; }, warp.height);
}

}  // namespace textkernel::overlay
