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

#include <string>
#include <vector>

#include "textkernel/common.hpp"
#include "textkernel/geometry.hpp"
#include "textkernel/raster.hpp"

namespace textkernel::synth {

enum class TextureKind { kConstant, kVerticalBars, kChecker };

struct Texture {
  TextureKind kind = TextureKind::kConstant;
  double bar_width = 8.0;  // extent of one bar or checker cell along the spine
};

// Sinusoidal strip: spine (u, amplitude * sin(2 pi u / period)) for
// u in [0, length], rotated by `rotation_deg` about its midpoint.
struct StripSpec {
  double length = 200.0;
  double half_height = 10.0;
  double amplitude = 0.0;
  double period = 200.0;
  double rotation_deg = 0.0;
  Texture texture;
  std::string text;

  // Throws SpecOutOfBounds. Besides the basic ranges this rejects strips whose
  // half height reaches the spine's smallest radius of curvature, where the
  // offset curves would fold over.
  void validate() const;
};

inline constexpr double kTextureHigh = 255.0;
inline constexpr double kTextureLow = 40.0;
inline constexpr double kTextureConstant = 200.0;

struct StripRender {
  raster::BinaryMask mask;
  raster::Raster image;
  std::vector<Point2> true_centerline;  // dense spine samples, start.x <= end.x
  double arc_length = 0.0;
};

// Renders into a tight canvas with `margin` background pixels on every side.
StripRender render_strip(const StripSpec& spec, int margin = 4);

// Arc length of the unrotated spine by composite Simpson integration.
double spine_arc_length(const StripSpec& spec);

struct PageStrip {
  geometry::Polygon gt_box;
  std::vector<Point2> centerline;
  std::string text;
  double half_height = 0.0;
};

struct PageRender {
  raster::BinaryMask mask;
  raster::Raster image;
  std::vector<PageStrip> strips;
};

// Strip i is placed with its canvas origin at (0, i * row_pitch). Throws
// OverlapDetected if strips overlap or touch (they would merge into one
// component).
PageRender render_page(const std::vector<StripSpec>& strips, double row_pitch);

}  // namespace textkernel::synth
