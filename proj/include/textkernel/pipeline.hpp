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
#include <string>
#include <vector>

#include "textkernel/centerline.hpp"
#include "textkernel/geometry.hpp"
#include "textkernel/raster.hpp"
#include "textkernel/tps.hpp"

namespace textkernel::pipeline {

struct PipelineConfig {
  double shrink_ratio = 0.6;
  int strip_height = tps::kDefaultStripHeight;
  double suppress_mult = centerline::kDefaultSuppressMultiplier;
  double iou_cell = 1.0;
  double amp_v = 0.2;
  double amp_h = 1.0;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  // Run on a 4x downscaled mask/image, as if operating on a quarter-resolution
  // feature map; geometry is scaled back to input coordinates.
  bool downscale4 = false;

  void validate() const;
};

struct SpottedLine {
  centerline::CenterLine line;   // extended center points
  centerline::CenterLine spine;  // refined dense line the strip was rectified along
  geometry::Polygon box;
  tps::RectifiedStrip strip;
  std::size_t area = 0;
};

struct SkippedComponent {
  std::size_t area = 0;
  geometry::Polygon box;
  std::string reason;
};

struct SpotResult {
  std::vector<SpottedLine> lines;  // sorted by leftmost x, then top y
  std::vector<SkippedComponent> skipped;
};

// Per component: center points, ordering, end extension, refinement,
// rectification and the smallest enclosing rectangle. Components with
// area < 4 min_r^2 or no usable center point are reported in `skipped`.
SpotResult spot_page(const raster::BinaryMask& mask, const raster::Raster& image, const PipelineConfig& cfg = {});

// Union of the shrunken kernels of all boxes.
raster::BinaryMask make_kernel_labels(const std::vector<geometry::Polygon>& boxes, int width, int height,
                                      const PipelineConfig& cfg = {});

// 4x4 block reductions: majority for masks, mean for images.
raster::BinaryMask downscale4(const raster::BinaryMask& mask);
raster::Raster downscale4(const raster::Raster& image);

}  // namespace textkernel::pipeline
