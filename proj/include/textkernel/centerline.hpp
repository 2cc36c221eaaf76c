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

#include <vector>

#include "textkernel/common.hpp"
#include "textkernel/raster.hpp"

namespace textkernel::centerline {

// Center of an inscribed circle of the text strip and that circle's radius.
struct CenterPoint {
  Point2 position;
  double radius = 0.0;
  friend bool operator==(const CenterPoint&, const CenterPoint&) = default;
};

// Ordered spine of a text strip. When it has two or more points the first
// point's abscissa does not exceed the last one's.
struct CenterLine {
  std::vector<CenterPoint> points;
  double min_r = 0.0;  // region area / contour length
};

struct CenterPoints {
  std::vector<CenterPoint> points;  // selection order, not spatial order
  double min_r = 0.0;
};

inline constexpr double kDefaultSuppressMultiplier = 4.0;

// Greedy inscribed-circle selection over one connected region.
//
// The region's distance transform is scanned for its maximum; that pixel
// becomes a center with radius equal to its distance, and every pixel whose
// center lies closer than suppress_mult * min_r has its distance zeroed.
// Selection stops once the remaining maximum is <= min_r, where
// min_r = (foreground pixel count) / (traced contour length). Ties pick the
// smallest row-major index. Positions are pixel centers in the region's
// coordinate frame.
CenterPoints generate_center_points(const raster::BinaryMask& region,
                                    double suppress_mult = kDefaultSuppressMultiplier);

// Incremental insertion ordering. Seeds with the first two points, then
// prepends, appends, or inserts between the consecutive pair whose path
// length grows least (d(p, a) + d(p, b) - d(a, b)), and finally reverses so
// the head is left of the tail.
CenterLine reorder_center_points(const std::vector<CenterPoint>& points, double min_r);

// Adds one point past each end. Starting along the end tangent, the walk
// advances in unit steps re-centred across the strip until the next step
// would leave the region or its cross chord cuts the end cap, then
// ray-marches to the last in-region position.
// Added points carry the end's radius. Ends less than 1 px from the boundary
// and lines with fewer than two points are returned unchanged.
CenterLine extend_center_line(const CenterLine& line, const raster::BinaryMask& region);

// Samples a centripetal Catmull-Rom curve through the points: each segment
// of chord length c gets ceil(c / spacing) pieces, evenly spaced in curve
// parameter. Radii are interpolated linearly per segment. Original points are kept; lines with fewer than two points are
// returned unchanged.
CenterLine resample_center_line(const CenterLine& line, double spacing);

// Resamples the line, then moves each interior sample across the strip to the
// mean midpoint of parallel region chords perpendicular to the local tangent,
// over several passes, and finishes with a quadratic Savitzky-Golay smoothing.
// The ends move with their neighbours. Recovers bends that fall between
// widely suppressed centers.
CenterLine refine_center_line(const CenterLine& line, const raster::BinaryMask& region, double spacing);

}  // namespace textkernel::centerline
