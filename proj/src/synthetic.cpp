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

#include "textkernel/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace textkernel::synth {

void StripSpec::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::kSpecOutOfBounds, what); };
  if (!std::isfinite(length) || !std::isfinite(half_height) || !std::isfinite(amplitude) || !std::isfinite(period) ||
      !std::isfinite(rotation_deg)) {
    fail("non-finite strip parameter");
  }
  if (half_height < 2.0) fail("half_height must be >= 2");
  if (!(period > 0.0)) fail("period must be positive");
  if (length < 4.0 * half_height) fail("length must be >= 4 * half_height");
  if (amplitude < 0.0) fail("amplitude must be >= 0");
  if (length > 20000.0 || half_height > 2000.0 || amplitude > 20000.0) fail("strip too large");
  if (!(texture.bar_width > 0.0)) fail("texture bar width must be positive");
  const double omega = 2.0 * std::numbers::pi / period;
  const double max_curvature = amplitude * omega * omega;
  if (max_curvature * half_height >= 1.0) fail("half_height exceeds the spine's radius of curvature");
}

namespace {

constexpr int kSuper = 4;  // texture samples per pixel side

double texture_value(const Texture& texture, double along, double across) {
  const auto bar = static_cast<long>(std::floor(along / texture.bar_width));
  const auto row = static_cast<long>(std::floor(across / texture.bar_width));
  switch (texture.kind) {
    case TextureKind::kVerticalBars:
      return bar % 2 == 0 ? kTextureHigh : kTextureLow;
    case TextureKind::kChecker:
      return (bar + row) % 2 == 0 ? kTextureHigh : kTextureLow;
    case TextureKind::kConstant:
      break;
  }
  return kTextureConstant;
}

}  // namespace

double spine_arc_length(const StripSpec& spec) {
  const double omega = 2.0 * std::numbers::pi / spec.period;
  auto speed = [&](double u) {
    const double dy = spec.amplitude * omega * std::cos(omega * u);
    return std::sqrt(1.0 + dy * dy);
  };
  const int n = 2 * std::max(64, static_cast<int>(std::ceil(spec.length)));
  const double h = spec.length / n;
  double sum = speed(0.0) + speed(spec.length);
  for (int i = 1; i < n; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * speed(i * h);
  return sum * h / 3.0;
}

StripRender render_strip(const StripSpec& spec, int margin) {
  spec.validate();
  if (margin < 0) throw Error(ErrorKind::kSpecOutOfBounds, "margin must be >= 0");
  const double omega = 2.0 * std::numbers::pi / spec.period;
  const double theta = spec.rotation_deg * std::numbers::pi / 180.0;
  const double ct = std::cos(theta), st = std::sin(theta);
  auto rotate = [&](Point2 p) { return Point2{ct * p.x - st * p.y, st * p.x + ct * p.y}; };

  const auto count = static_cast<std::size_t>(std::ceil(spec.length / 0.25));
  const double du = spec.length / static_cast<double>(count);
  std::vector<Point2> pos(count + 1), tan(count + 1);
  std::vector<double> arc(count + 1, 0.0);
  const Point2 mid{spec.length / 2.0, 0.0};
  for (std::size_t k = 0; k <= count; ++k) {
    const double u = static_cast<double>(k) * du;
    pos[k] = rotate(Point2{u, spec.amplitude * std::sin(omega * u)} - mid);
    const Point2 d{1.0, spec.amplitude * omega * std::cos(omega * u)};
    tan[k] = rotate((1.0 / norm(d)) * d);
    if (k > 0) arc[k] = arc[k - 1] + distance(pos[k], pos[k - 1]);
  }

  double min_x = std::numeric_limits<double>::infinity(), min_y = min_x;
  double max_x = -min_x, max_y = -min_x;
  for (const auto p : pos) {
    min_x = std::min(min_x, p.x);
    min_y = std::min(min_y, p.y);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  }
  const double h = spec.half_height;
  const Point2 shift{margin + h - min_x, margin + h - min_y};
  const int width = static_cast<int>(std::ceil(max_x - min_x + 2.0 * h)) + 2 * margin;
  const int height = static_cast<int>(std::ceil(max_y - min_y + 2.0 * h)) + 2 * margin;
  for (auto& p : pos) p = p + shift;

  // Nearest spine sample for every pixel near the spine.
  const auto npix = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  std::vector<double> best(npix, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> owner(npix, count + 1);
  const int reach = static_cast<int>(std::ceil(h)) + 2;
  for (std::size_t k = 0; k <= count; ++k) {
    const int cx = static_cast<int>(std::floor(pos[k].x));
    const int cy = static_cast<int>(std::floor(pos[k].y));
    for (int y = std::max(0, cy - reach); y <= std::min(height - 1, cy + reach); ++y) {
      for (int x = std::max(0, cx - reach); x <= std::min(width - 1, cx + reach); ++x) {
        const Point2 c{x + 0.5, y + 0.5};
        const double d2 = dot(c - pos[k], c - pos[k]);
        const std::size_t idx = static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x);
        if (d2 < best[idx]) {
          best[idx] = d2;
          owner[idx] = k;
        }
      }
    }
  }

  StripRender out{raster::BinaryMask(width, height), raster::Raster(width, height, 1), {}, arc.back()};
  const double total = arc.back();
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::size_t idx = static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x);
      const std::size_t k = owner[idx];
      if (k > count) continue;
      const Point2 rel = Point2{x + 0.5, y + 0.5} - pos[k];
      const Point2 normal{tan[k].y, -tan[k].x};
      const double along = arc[k] + dot(rel, tan[k]);
      const double across = dot(rel, normal);
      if (std::abs(across) > h || along < 0.0 || along > total) continue;
      out.mask.set(x, y);
      // Box-filtered texture: pattern edges land at sub-pixel positions
      // instead of snapping to the pixel grid.
      double sum = 0.0;
      for (int sy = 0; sy < kSuper; ++sy) {
        for (int sx = 0; sx < kSuper; ++sx) {
          const Point2 sub{(sx + 0.5) / kSuper - 0.5, (sy + 0.5) / kSuper - 0.5};
          sum += texture_value(spec.texture, along + dot(sub, tan[k]), across + h + dot(sub, normal));
        }
      }
      out.image.at(x, y) = static_cast<float>(sum / (kSuper * kSuper));
    }
  }
  // The spine ends lie on the cap edges; drop end samples outside the mask.
  auto in_mask = [&](Point2 p) {
    return out.mask.get_or_background(static_cast<int>(std::floor(p.x)), static_cast<int>(std::floor(p.y)));
  };
  std::size_t first = 0, last = pos.size();
  while (first < last && !in_mask(pos[first])) ++first;
  while (last > first && !in_mask(pos[last - 1])) --last;
  out.true_centerline.assign(pos.begin() + static_cast<std::ptrdiff_t>(first), pos.begin() + static_cast<std::ptrdiff_t>(last));
  if (out.true_centerline.front().x > out.true_centerline.back().x) {
    std::reverse(out.true_centerline.begin(), out.true_centerline.end());
  }
  return out;
}

PageRender render_page(const std::vector<StripSpec>& strips, double row_pitch) {
  if (strips.empty()) throw Error(ErrorKind::kSpecOutOfBounds, "page needs at least one strip");
  if (!(row_pitch > 0.0) || !std::isfinite(row_pitch)) throw Error(ErrorKind::kSpecOutOfBounds, "row pitch must be positive");
  std::vector<StripRender> renders;
  std::vector<int> offsets;
  int page_w = 1, page_h = 1;
  for (std::size_t i = 0; i < strips.size(); ++i) {
    renders.push_back(render_strip(strips[i]));
    offsets.push_back(static_cast<int>(std::lround(static_cast<double>(i) * row_pitch)));
    page_w = std::max(page_w, renders.back().mask.width());
    page_h = std::max(page_h, offsets.back() + renders.back().mask.height());
  }

  PageRender page{raster::BinaryMask(page_w, page_h), raster::Raster(page_w, page_h, 1), {}};
  std::vector<int> owner(static_cast<std::size_t>(page_w) * static_cast<std::size_t>(page_h), -1);
  for (std::size_t i = 0; i < renders.size(); ++i) {
    const auto& r = renders[i];
    const int oy = offsets[i];
    for (int y = 0; y < r.mask.height(); ++y) {
      for (int x = 0; x < r.mask.width(); ++x) {
        if (!r.mask.at(x, y)) continue;
        const int py = y + oy;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = x + dx, ny = py + dy;
            if (nx < 0 || ny < 0 || nx >= page_w || ny >= page_h) continue;
            const int o = owner[static_cast<std::size_t>(ny) * static_cast<std::size_t>(page_w) + static_cast<std::size_t>(nx)];
            if (o >= 0 && o != static_cast<int>(i)) {
              throw Error(ErrorKind::kOverlapDetected,
                          "strip " + std::to_string(i) + " overlaps or touches strip " + std::to_string(o));
            }
          }
        }
        owner[static_cast<std::size_t>(py) * static_cast<std::size_t>(page_w) + static_cast<std::size_t>(x)] = static_cast<int>(i);
        page.mask.set(x, py);
        page.image.at(x, py) = r.image.at(x, y);
      }
    }

    PageStrip ps;
    auto corners = geometry::boundary_pixel_corners(r.mask);
    for (auto& c : corners) c.y += oy;
    ps.gt_box = geometry::smallest_enclosing_rectangle(corners);
    ps.centerline = r.true_centerline;
    for (auto& c : ps.centerline) c.y += oy;
    ps.text = strips[i].text.empty() ? "strip-" + std::to_string(i) : strips[i].text;
    ps.half_height = strips[i].half_height;
    page.strips.push_back(std::move(ps));
  }
  return page;
}

}  // namespace textkernel::synth
