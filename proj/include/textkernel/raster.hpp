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

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "textkernel/common.hpp"

namespace textkernel::raster {

// Row-major binary raster; 1 = foreground (kernel), 0 = background.
class BinaryMask {
 public:
  BinaryMask(int width, int height);
  BinaryMask(int width, int height, std::vector<std::uint8_t> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }

  bool at(int x, int y) const { return data_[index(x, y)] != 0; }
  void set(int x, int y, bool value = true) { data_[index(x, y)] = value ? 1 : 0; }
  // Out-of-bounds reads are background.
  bool get_or_background(int x, int y) const {
    return x >= 0 && y >= 0 && x < width_ && y < height_ && data_[index(x, y)] != 0;
  }

  std::span<const std::uint8_t> data() const noexcept { return data_; }
  std::span<std::uint8_t> data() noexcept { return data_; }

  std::size_t count() const;
  bool empty_foreground() const { return count() == 0; }

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_;
  int height_;
  std::vector<std::uint8_t> data_;
};

// Per-pixel Euclidean distance to the nearest background pixel.
struct DistanceMap {
  int width = 0;
  int height = 0;
  std::vector<double> data;

  double at(int x, int y) const {
    return data[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)];
  }
};

// Interleaved multi-channel float raster (images, feature maps, rectified strips).
struct Raster {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<float> data;

  Raster() = default;
  Raster(int w, int h, int c, float fill = 0.0f);

  float at(int x, int y, int c = 0) const { return data[offset(x, y, c)]; }
  float& at(int x, int y, int c = 0) { return data[offset(x, y, c)]; }

 private:
  std::size_t offset(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)) *
               static_cast<std::size_t>(channels) +
           static_cast<std::size_t>(c);
  }
};

struct PixelPos {
  int x = 0;
  int y = 0;
  friend bool operator==(PixelPos, PixelPos) = default;
};

// Closed outer boundary of one 8-connected region. Orientation is
// counter-clockwise in the (x, y) frame, i.e. the shoelace sum is positive.
struct Contour {
  std::vector<PixelPos> points;

  // Sum of step lengths around the closed loop (1 or sqrt(2) per step).
  double length() const;
};

// Squared distances, exact in integer arithmetic. Pixels beyond the image
// bounds count as background.
std::vector<std::int64_t> squared_distance_transform(const BinaryMask& mask);

DistanceMap euclidean_distance_transform(const BinaryMask& mask);

struct ComponentLabels {
  std::vector<std::int32_t> labels;  // 0 = background, 1..count
  int count = 0;
};

// Labels are assigned in row-major order of each component's first pixel.
ComponentLabels label_components(const BinaryMask& mask);

// One full-size mask per 8-connected component, same order as label_components.
std::vector<BinaryMask> connected_components(const BinaryMask& mask);

// Moore-neighbour trace of the outer boundary. Regions of one or two pixels
// are returned as the outline of their pixel squares (corner lattice).
Contour trace_contour(const BinaryMask& component);

// Half-open pixel box [x0, x1) x [y0, y1).
struct PixelBox {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;
  int width() const { return x1 - x0; }
  int height() const { return y1 - y0; }
  bool empty() const { return x1 <= x0 || y1 <= y0; }
};

// Tight box around the foreground; empty() when there is none.
PixelBox foreground_bounds(const BinaryMask& mask);
BinaryMask crop(const BinaryMask& mask, const PixelBox& box);

}  // namespace textkernel::raster
