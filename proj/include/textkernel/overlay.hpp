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

#include <cstdint>
#include <filesystem>
#include <vector>

#include "textkernel/centerline.hpp"
#include "textkernel/geometry.hpp"
#include "textkernel/raster.hpp"
#include "textkernel/tps.hpp"

namespace textkernel::overlay {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
};

// 8-bit RGB drawing surface for inspection images.
class Canvas {
 public:
  // Gray background taken from channel 0 of `base`, clamped to 0..255.
  explicit Canvas(const raster::Raster& base);
  explicit Canvas(const raster::BinaryMask& base);

  int width() const { return width_; }
  int height() const { return height_; }
  Rgb at(int x, int y) const;

  void plot(int x, int y, Rgb c);
  void line(Point2 a, Point2 b, Rgb c);
  void circle(Point2 center, double radius, Rgb c);
  void polygon(const geometry::Polygon& poly, Rgb c);
  void polyline(const std::vector<Point2>& pts, Rgb c);

  void save_png(const std::filesystem::path& path) const;

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> rgb_;
};

inline constexpr Rgb kCircleColor{255, 64, 64};
inline constexpr Rgb kLineColor{64, 200, 64};
inline constexpr Rgb kBoxColor{64, 128, 255};
inline constexpr Rgb kGridColor{255, 200, 0};

// Center points with their inscribed circles and the spine through them.
void draw_centerline(Canvas& canvas, const centerline::CenterLine& line);

// Rectangle-frame grid lines (every `spacing` output pixels, plus the
// borders) pushed through the rectification warp into image space.
void draw_tps_grid(Canvas& canvas, const tps::StripWarp& warp, int spacing = 8);

}  // namespace textkernel::overlay
