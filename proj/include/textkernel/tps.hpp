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

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "textkernel/centerline.hpp"
#include "textkernel/common.hpp"
#include "textkernel/raster.hpp"

namespace textkernel::tps {

// Thin-plate spline f(p) = A [1 x y]^T + sum_i w_i U(|p - s_i|), U(r) = r^2 ln r.
struct TpsTransform {
  std::vector<Point2> source_points;
  std::vector<Point2> radial_weights;
  // Row k gives output coordinate k as c + a_x * x + a_y * y, stored {c, a_x, a_y}.
  std::array<std::array<double, 3>, 2> affine{{{0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}};

  Point2 operator()(Point2 p) const;

  // w^T K w summed over both coordinates; zero for affine maps.
  double bending_energy() const;
};

double radial_kernel(double r);

TpsTransform fit_tps(std::span<const Point2> source, std::span<const Point2> target, double regularization = 0.0);

Point2 apply_tps(const TpsTransform& t, Point2 p);

// 1e-8 times the mean squared distance of the sources from their centroid.
double default_regularization(std::span<const Point2> source);

struct ControlPoints {
  std::vector<Point2> source;  // image frame: top and bottom offsets per center
  std::vector<Point2> target;  // rectangle frame: y = 0 (top) and y = height (bottom)
  double target_width = 0.0;
};

// For each center, one source point radius above and one below along the
// local normal. Targets follow cumulative arc length scaled so the mean
// radius maps to height / 2.
ControlPoints control_points_from_centerline(const centerline::CenterLine& line, double height);

inline constexpr int kDefaultStripHeight = 32;

// Output of rectification; height is fixed by the caller.
using RectifiedStrip = raster::Raster;

// Output pixel (u, v) of a rectified strip has its center at (u + 0.5, v + 0.5);
// to_source maps the stretched rectangle frame back into the image.
struct StripWarp {
  TpsTransform to_source;
  int width = 0;
  int height = 0;
  double x_step = 1.0;  // rectangle-frame x per output column

  Point2 source_of(Point2 strip_pos) const { return to_source({strip_pos.x * x_step, strip_pos.y}); }
};

// Controls come from the center line resampled along a smooth curve at least
// every kControlSpacing * (mean radius) pixels, with kControlRows evenly
// spaced points on each normal between the two edge points.
inline constexpr double kControlSpacing = 1.0;
inline constexpr int kControlRows = 5;
StripWarp rectification_warp(const centerline::CenterLine& line, int height = kDefaultStripHeight);

// Inverse warp: fits target -> source and samples `image` bilinearly at every
// output pixel center. Taps outside the image read as 0.
RectifiedStrip rectify_strip(const raster::Raster& image, const centerline::CenterLine& line,
                             int height = kDefaultStripHeight);

// Bilinear sample with pixel centers at (i + 0.5, j + 0.5); outside taps are 0.
float sample_bilinear(const raster::Raster& image, Point2 p, int channel);

}  // namespace textkernel::tps
