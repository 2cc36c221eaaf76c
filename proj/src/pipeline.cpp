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

#include "textkernel/pipeline.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <optional>
#include <thread>

namespace textkernel::pipeline {

void PipelineConfig::validate() const {
  auto fail = [](const char* what) { throw Error(ErrorKind::kInvalidInput, what); };
  if (!(shrink_ratio > 0.0 && shrink_ratio <= 1.0)) fail("shrink ratio must lie in (0, 1]");
  if (strip_height < 1) fail("strip height must be positive");
  if (!(suppress_mult > 0.0)) fail("suppression multiplier must be positive");
  if (!(iou_cell > 0.0)) fail("iou grid cell must be positive");
  if (!(amp_v >= 0.0) || !(amp_h >= 0.0)) fail("perturbation amplitudes must be >= 0");
  if (jobs < 1) fail("jobs must be >= 1");
}

raster::BinaryMask downscale4(const raster::BinaryMask& mask) {
  const int w = (mask.width() + 3) / 4;
  const int h = (mask.height() + 3) / 4;
  raster::BinaryMask out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      int on = 0, total = 0;
      for (int yy = 4 * y; yy < std::min(4 * y + 4, mask.height()); ++yy) {
        for (int xx = 4 * x; xx < std::min(4 * x + 4, mask.width()); ++xx) {
          on += mask.at(xx, yy) ? 1 : 0;
          ++total;
        }
      }
      out.set(x, y, 2 * on >= total);
    }
  }
  return out;
}

raster::Raster downscale4(const raster::Raster& image) {
  const int w = (image.width + 3) / 4;
  const int h = (image.height + 3) / 4;
  raster::Raster out(w, h, image.channels);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < image.channels; ++c) {
        double sum = 0.0;
        int total = 0;
        for (int yy = 4 * y; yy < std::min(4 * y + 4, image.height); ++yy) {
          for (int xx = 4 * x; xx < std::min(4 * x + 4, image.width); ++xx) {
            sum += image.at(xx, yy, c);
            ++total;
          }
        }
        out.at(x, y, c) = static_cast<float>(sum / total);
      }
    }
  }
  return out;
}

namespace {

struct ComponentOutcome {
  std::optional<SpottedLine> line;
  std::optional<SkippedComponent> skipped;
  double left = 0.0;
  double top = 0.0;
};

constexpr double kRefineSpacing = 0.5;  // refined spine samples per mean radius

bool inside(const raster::BinaryMask& region, Point2 p) {
  return region.get_or_background(static_cast<int>(std::floor(p.x)), static_cast<int>(std::floor(p.y)));
}

// Horizontal spine through a lone center, spanning the region along x.
centerline::CenterLine horizontal_line(const centerline::CenterPoint& c, const raster::BinaryMask& region, double min_r) {
  centerline::CenterLine line;
  line.min_r = min_r;
  auto reach = [&](double dir) {
    Point2 last = c.position;
    for (double t = 0.25;; t += 0.25) {
      const Point2 p{c.position.x + dir * t, c.position.y};
      if (!inside(region, p)) break;
      last = p;
    }
    return last;
  };
  const Point2 left = reach(-1.0);
  const Point2 right = reach(1.0);
  if (c.position.x - left.x >= 1.0) line.points.push_back({left, c.radius});
  line.points.push_back(c);
  if (right.x - c.position.x >= 1.0) line.points.push_back({right, c.radius});
  return line;
}

// `region` is the component cropped to its bounding box; `origin` is that
// box's corner in page coordinates.
ComponentOutcome process_component(const raster::BinaryMask& region, Point2 origin, const raster::Raster& image,
                                   const PipelineConfig& cfg) {
  ComponentOutcome out;
  const std::size_t area = region.count();
  auto corners = geometry::boundary_pixel_corners(region);
  for (auto& c : corners) c = c + origin;
  const geometry::Polygon box = geometry::smallest_enclosing_rectangle(corners);
  out.left = origin.x;
  out.top = origin.y;

  auto skip = [&](std::string reason) {
    out.skipped = SkippedComponent{area, box, std::move(reason)};
    return out;
  };

  const auto centers = centerline::generate_center_points(region, cfg.suppress_mult);
  if (static_cast<double>(area) < 4.0 * centers.min_r * centers.min_r) return skip("area below 4 * min_r^2");
  if (centers.points.empty()) return skip("no inscribed circle larger than min_r");

  centerline::CenterLine line = centerline::reorder_center_points(centers.points, centers.min_r);
  if (line.points.size() >= 2) {
    line = centerline::extend_center_line(line, region);
  } else {
    line = horizontal_line(line.points.front(), region, centers.min_r);
    if (line.points.size() < 2) return skip("single center point with no horizontal extent");
  }
  double mean_r = 0.0;
  for (const auto& p : line.points) mean_r += p.radius;
  mean_r /= static_cast<double>(line.points.size());
  centerline::CenterLine spine = centerline::refine_center_line(line, region, std::max(1.0, kRefineSpacing * mean_r));
  for (auto& p : line.points) p.position = p.position + origin;
  for (auto& p : spine.points) p.position = p.position + origin;

  SpottedLine spotted;
  spotted.strip = tps::rectify_strip(image, spine, cfg.strip_height);
  spotted.line = std::move(line);
  spotted.spine = std::move(spine);
  spotted.box = box;
  spotted.area = area;
  out.line = std::move(spotted);
  return out;
}

struct CroppedComponent {
  raster::BinaryMask mask;
  Point2 origin;
};

std::vector<CroppedComponent> crop_components(const raster::BinaryMask& mask) {
  const auto labels = raster::label_components(mask);
  std::vector<raster::PixelBox> boxes(static_cast<std::size_t>(labels.count),
                                      raster::PixelBox{mask.width(), mask.height(), 0, 0});
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      const int l = labels.labels[static_cast<std::size_t>(y) * static_cast<std::size_t>(mask.width()) + static_cast<std::size_t>(x)];
      if (l == 0) continue;
      auto& b = boxes[static_cast<std::size_t>(l - 1)];
      b.x0 = std::min(b.x0, x);
      b.y0 = std::min(b.y0, y);
      b.x1 = std::max(b.x1, x + 1);
      b.y1 = std::max(b.y1, y + 1);
    }
  }
  std::vector<CroppedComponent> out;
  out.reserve(boxes.size());
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const auto& b = boxes[i];
    CroppedComponent c{raster::BinaryMask(b.width(), b.height()), {static_cast<double>(b.x0), static_cast<double>(b.y0)}};
    for (int y = b.y0; y < b.y1; ++y)
      for (int x = b.x0; x < b.x1; ++x)
        if (labels.labels[static_cast<std::size_t>(y) * static_cast<std::size_t>(mask.width()) + static_cast<std::size_t>(x)] ==
            static_cast<int>(i + 1)) {
          c.mask.set(x - b.x0, y - b.y0);
        }
    out.push_back(std::move(c));
  }
  return out;
}

void scale_geometry(SpottedLine& l, double s) {
  for (auto* line : {&l.line, &l.spine}) {
    for (auto& p : line->points) {
      p.position = s * p.position;
      p.radius *= s;
    }
    line->min_r *= s;
  }
  for (auto& v : l.box.vertices) v = s * v;
  l.area = static_cast<std::size_t>(std::lround(static_cast<double>(l.area) * s * s));
}

}  // namespace

SpotResult spot_page(const raster::BinaryMask& mask, const raster::Raster& image, const PipelineConfig& cfg) {
  cfg.validate();
  if (mask.width() != image.width || mask.height() != image.height) {
    throw Error(ErrorKind::kShapeMismatch, "mask and image dimensions differ");
  }
  if (cfg.downscale4) {
    PipelineConfig inner = cfg;
    inner.downscale4 = false;
    SpotResult r = spot_page(downscale4(mask), downscale4(image), inner);
    for (auto& l : r.lines) scale_geometry(l, 4.0);
    for (auto& s : r.skipped) {
      for (auto& v : s.box.vertices) v = 4.0 * v;
      s.area *= 16;
    }
    return r;
  }

  const auto components = crop_components(mask);
  std::vector<ComponentOutcome> outcomes(components.size());
  std::vector<std::exception_ptr> errors(components.size());
  auto work = [&](std::size_t i) {
    try {
      outcomes[i] = process_component(components[i].mask, components[i].origin, image, cfg);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(cfg.jobs, static_cast<unsigned>(components.size())));
  if (workers <= 1) {
    for (std::size_t i = 0; i < components.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < components.size(); i = next++) work(i);
      });
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::vector<std::size_t> order(outcomes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (outcomes[a].left != outcomes[b].left) return outcomes[a].left < outcomes[b].left;
    return outcomes[a].top < outcomes[b].top;
  });

  SpotResult result;
  for (const std::size_t i : order) {
    if (outcomes[i].line) result.lines.push_back(std::move(*outcomes[i].line));
    if (outcomes[i].skipped) {
      spdlog::warn("skipping component {} (area {}): {}", i, outcomes[i].skipped->area, outcomes[i].skipped->reason);
      result.skipped.push_back(std::move(*outcomes[i].skipped));
    }
  }
  return result;
}

raster::BinaryMask make_kernel_labels(const std::vector<geometry::Polygon>& boxes, int width, int height,
                                      const PipelineConfig& cfg) {
  cfg.validate();
  const geometry::ShrinkParams params(cfg.shrink_ratio);
  raster::BinaryMask labels(width, height);
  for (const auto& box : boxes) {
    const auto kernel = geometry::shrink_polygon(box, params, width, height);
    for (std::size_t i = 0; i < labels.size(); ++i) labels.data()[i] |= kernel.data()[i];
  }
  return labels;
}

}  // namespace textkernel::pipeline
