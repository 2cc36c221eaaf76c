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

#include "textkernel/raster.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "textkernel/simd/kernels.hpp"

namespace textkernel::raster {

BinaryMask::BinaryMask(int width, int height) : BinaryMask(width, height, {}) {}

BinaryMask::BinaryMask(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
  if (width < 1 || height < 1) {
    throw Error(ErrorKind::kInvalidInput,
                "mask dimensions must be positive, got " + std::to_string(width) + "x" + std::to_string(height));
  }
  const auto expected = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (data_.empty()) data_.assign(expected, 0);
  if (data_.size() != expected) throw Error(ErrorKind::kInvalidInput, "mask data length does not match dimensions");
  for (auto& v : data_) v = v ? 1 : 0;
}

std::size_t BinaryMask::count() const {
  return static_cast<std::size_t>(std::count(data_.begin(), data_.end(), std::uint8_t{1}));
}

Raster::Raster(int w, int h, int c, float fill)
    : width(w), height(h), channels(c),
      data(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * static_cast<std::size_t>(c), fill) {
  if (w < 1 || h < 1 || c < 1) throw Error(ErrorKind::kInvalidInput, "raster dimensions must be positive");
}

double Contour::length() const {
  if (points.size() < 2) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const PixelPos a = points[i];
    const PixelPos b = points[(i + 1) % points.size()];
    total += std::hypot(static_cast<double>(b.x - a.x), static_cast<double>(b.y - a.y));
  }
  return total;
}

namespace {

std::int64_t floor_div(std::int64_t num, std::int64_t den) {
  std::int64_t q = num / den;
  if ((num % den != 0) && ((num < 0) != (den < 0))) --q;
  return q;
}

// Meijster's second phase over one row. Sites are extended by one virtual
// background column on each side so out-of-bounds pixels count as background.
void row_pass(std::span<const std::int32_t> column_dist, std::span<std::int64_t> out, std::vector<std::int64_t>& g2,
              std::vector<std::int64_t>& s, std::vector<std::int64_t>& t) {
  const auto width = static_cast<std::int64_t>(column_dist.size());
  const std::int64_t m = width + 2;
  g2.assign(static_cast<std::size_t>(m), 0);
  for (std::int64_t j = 0; j < width; ++j) {
    const std::int64_t g = column_dist[static_cast<std::size_t>(j)];
    g2[static_cast<std::size_t>(j + 1)] = g * g;
  }
  auto f = [&](std::int64_t x, std::int64_t i) { return (x - i) * (x - i) + g2[static_cast<std::size_t>(i)]; };
  auto sep = [&](std::int64_t i, std::int64_t u) {
    return floor_div(u * u - i * i + g2[static_cast<std::size_t>(u)] - g2[static_cast<std::size_t>(i)], 2 * (u - i));
  };

  s.assign(static_cast<std::size_t>(m), 0);
  t.assign(static_cast<std::size_t>(m), 0);
  std::int64_t q = 0;
  for (std::int64_t u = 1; u < m; ++u) {
    while (q >= 0 && f(t[static_cast<std::size_t>(q)], s[static_cast<std::size_t>(q)]) > f(t[static_cast<std::size_t>(q)], u)) {
      --q;
    }
    if (q < 0) {
      q = 0;
      s[0] = u;
    } else {
      const std::int64_t w = 1 + sep(s[static_cast<std::size_t>(q)], u);
      if (w < m) {
        ++q;
        s[static_cast<std::size_t>(q)] = u;
        t[static_cast<std::size_t>(q)] = w;
      }
    }
  }
  for (std::int64_t u = m - 1; u >= 0; --u) {
    if (u >= 1 && u <= width) out[static_cast<std::size_t>(u - 1)] = f(u, s[static_cast<std::size_t>(q)]);
    if (u == t[static_cast<std::size_t>(q)]) --q;
  }
}

}  // namespace

std::vector<std::int64_t> squared_distance_transform(const BinaryMask& mask) {
  const auto w = static_cast<std::size_t>(mask.width());
  const auto h = static_cast<std::size_t>(mask.height());
  const auto& k = simd::active();

  // Column pass: vertical distance to the nearest background, with virtual
  // background rows at y = -1 and y = height.
  std::vector<std::int32_t> col(w * h);
  const std::vector<std::int32_t> zeros(w, 0);
  const auto bits = mask.data();
  for (std::size_t y = 0; y < h; ++y) {
    const std::int32_t* prev = y == 0 ? zeros.data() : col.data() + (y - 1) * w;
    k.column_forward(bits.data() + y * w, prev, col.data() + y * w, w);
  }
  k.column_backward(zeros.data(), col.data() + (h - 1) * w, w);
  for (std::size_t y = h - 1; y-- > 0;) {
    k.column_backward(col.data() + (y + 1) * w, col.data() + y * w, w);
  }

  std::vector<std::int64_t> out(w * h);
  std::vector<std::int64_t> g2, s, t;
  for (std::size_t y = 0; y < h; ++y) {
    row_pass(std::span<const std::int32_t>(col.data() + y * w, w), std::span<std::int64_t>(out.data() + y * w, w), g2,
             s, t);
  }
  return out;
}

DistanceMap euclidean_distance_transform(const BinaryMask& mask) {
  const auto sq = squared_distance_transform(mask);
  DistanceMap dm{mask.width(), mask.height(), std::vector<double>(sq.size())};
  std::transform(sq.begin(), sq.end(), dm.data.begin(),
                 [](std::int64_t v) { return std::sqrt(static_cast<double>(v)); });
  return dm;
}

ComponentLabels label_components(const BinaryMask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  ComponentLabels result;
  result.labels.assign(mask.size(), 0);
  std::vector<int> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int start = y * w + x;
      if (!mask.at(x, y) || result.labels[static_cast<std::size_t>(start)] != 0) continue;
      const int label = ++result.count;
      result.labels[static_cast<std::size_t>(start)] = label;
      stack.push_back(start);
      while (!stack.empty()) {
        const int idx = stack.back();
        stack.pop_back();
        const int cx = idx % w;
        const int cy = idx / w;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = cx + dx;
            const int ny = cy + dy;
            if (!mask.get_or_background(nx, ny)) continue;
            auto& slot = result.labels[static_cast<std::size_t>(ny * w + nx)];
            if (slot != 0) continue;
            slot = label;
            stack.push_back(ny * w + nx);
          }
        }
      }
    }
  }
  return result;
}

std::vector<BinaryMask> connected_components(const BinaryMask& mask) {
  const auto labels = label_components(mask);
  std::vector<BinaryMask> out(static_cast<std::size_t>(labels.count), BinaryMask(mask.width(), mask.height()));
  for (std::size_t i = 0; i < labels.labels.size(); ++i) {
    if (const int l = labels.labels[i]; l > 0) out[static_cast<std::size_t>(l - 1)].data()[i] = 1;
  }
  return out;
}

namespace {

// Clockwise on screen (y down): E, SE, S, SW, W, NW, N, NE. Walking the outer
// boundary in this order gives a positive shoelace sum in (x, y).
constexpr std::array<PixelPos, 8> kRing{{{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}}};

int ring_index(PixelPos d) {
  for (int i = 0; i < 8; ++i)
    if (kRing[static_cast<std::size_t>(i)] == d) return i;
  return -1;
}

std::int64_t turn(PixelPos o, PixelPos a, PixelPos b) {
  return static_cast<std::int64_t>(a.x - o.x) * (b.y - o.y) - static_cast<std::int64_t>(a.y - o.y) * (b.x - o.x);
}

// Outline of the union of a few pixel squares: convex hull of their corners.
Contour pixel_square_outline(const std::vector<PixelPos>& pixels) {
  std::vector<PixelPos> corners;
  for (const auto p : pixels) {
    corners.push_back({p.x, p.y});
    corners.push_back({p.x + 1, p.y});
    corners.push_back({p.x + 1, p.y + 1});
    corners.push_back({p.x, p.y + 1});
  }
  std::sort(corners.begin(), corners.end(), [](PixelPos a, PixelPos b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
  corners.erase(std::unique(corners.begin(), corners.end()), corners.end());
  std::vector<PixelPos> hull(2 * corners.size());
  std::size_t k = 0;
  for (const auto p : corners) {
    while (k >= 2 && turn(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = corners.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && turn(hull[k - 2], hull[k - 1], corners[i]) <= 0) --k;
    hull[k++] = corners[i];
  }
  hull.resize(k - 1);
  return Contour{std::move(hull)};
}

}  // namespace

Contour trace_contour(const BinaryMask& component) {
  const int w = component.width();
  const int h = component.height();
  PixelPos start{-1, -1};
  for (int y = 0; y < h && start.x < 0; ++y) {
    for (int x = 0; x < w; ++x) {
      if (component.at(x, y)) {
        start = {x, y};
        break;
      }
    }
  }
  if (start.x < 0) throw Error(ErrorKind::kEmptyMask, "component has no foreground pixel");

  auto fg = [&](PixelPos p) { return component.get_or_background(p.x, p.y); };

  // Find the successor of p given a background backtrack neighbour b.
  auto step = [&](PixelPos p, PixelPos b, PixelPos& next, PixelPos& next_b) {
    const int k = ring_index({b.x - p.x, b.y - p.y});
    for (int i = 1; i <= 8; ++i) {
      const PixelPos d = kRing[static_cast<std::size_t>((k + i) % 8)];
      const PixelPos c{p.x + d.x, p.y + d.y};
      if (fg(c)) {
        const PixelPos pd = kRing[static_cast<std::size_t>((k + i - 1) % 8)];
        next = c;
        next_b = {p.x + pd.x, p.y + pd.y};
        return true;
      }
    }
    return false;
  };

  std::vector<PixelPos> points{start};
  PixelPos second{};
  PixelPos b{start.x - 1, start.y};
  PixelPos nb{};
  if (!step(start, b, second, nb)) return pixel_square_outline(points);

  PixelPos p = second;
  b = nb;
  // Stop when the walk re-enters the start pixel heading for the second pixel again.
  const std::size_t limit = 4 * component.size() + 8;
  while (points.size() <= limit) {
    PixelPos next{};
    if (!step(p, b, next, nb)) break;
    if (p == start && next == second) break;
    points.push_back(p);
    b = nb;
    p = next;
  }

  if (points.size() < 3) {
    std::vector<PixelPos> pixels;
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        if (component.at(x, y)) pixels.push_back({x, y});
    return pixel_square_outline(pixels);
  }
  return Contour{std::move(points)};
}

PixelBox foreground_bounds(const BinaryMask& mask) {
  PixelBox box{mask.width(), mask.height(), 0, 0};
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.at(x, y)) continue;
      box.x0 = std::min(box.x0, x);
      box.y0 = std::min(box.y0, y);
      box.x1 = std::max(box.x1, x + 1);
      box.y1 = std::max(box.y1, y + 1);
    }
  }
  if (box.x1 <= box.x0) return PixelBox{};
  return box;
}

BinaryMask crop(const BinaryMask& mask, const PixelBox& box) {
  if (box.empty() || box.x0 < 0 || box.y0 < 0 || box.x1 > mask.width() || box.y1 > mask.height()) {
    throw Error(ErrorKind::kInvalidInput, "crop box outside mask");
  }
  BinaryMask out(box.width(), box.height());
  for (int y = box.y0; y < box.y1; ++y)
    for (int x = box.x0; x < box.x1; ++x) out.set(x - box.x0, y - box.y0, mask.at(x, y));
  return out;
}

}  // namespace textkernel::raster
