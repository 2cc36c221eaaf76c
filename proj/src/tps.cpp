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

#include "textkernel/tps.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace textkernel::tps {

double radial_kernel(double r) { return r > 0.0 ? r * r * std::log(r) : 0.0; }

Point2 TpsTransform::operator()(Point2 p) const {
  Point2 out{affine[0][0] + affine[0][1] * p.x + affine[0][2] * p.y,
             affine[1][0] + affine[1][1] * p.x + affine[1][2] * p.y};
  for (std::size_t i = 0; i < source_points.size(); ++i) {
    const double u = radial_kernel(distance(p, source_points[i]));
    out.x += radial_weights[i].x * u;
    out.y += radial_weights[i].y * u;
  }
  return out;
}

double TpsTransform::bending_energy() const {
  double energy = 0.0;
  for (std::size_t i = 0; i < source_points.size(); ++i) {
    for (std::size_t j = 0; j < source_points.size(); ++j) {
      const double u = radial_kernel(distance(source_points[i], source_points[j]));
      energy += u * (radial_weights[i].x * radial_weights[j].x + radial_weights[i].y * radial_weights[j].y);
    }
  }
  return energy;
}

Point2 apply_tps(const TpsTransform& t, Point2 p) { return t(p); }

double default_regularization(std::span<const Point2> source) {
  if (source.empty()) return 0.0;
  Point2 c{};
  for (const auto p : source) c = c + p;
  c = (1.0 / static_cast<double>(source.size())) * c;
  double spread = 0.0;
  for (const auto p : source) spread += dot(p - c, p - c);
  return 1e-8 * spread / static_cast<double>(source.size());
}

namespace {

constexpr double kSolveTolerance = 1e-6;

bool all_collinear(std::span<const Point2> pts) {
  Point2 c{};
  for (const auto p : pts) c = c + p;
  c = (1.0 / static_cast<double>(pts.size())) * c;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (const auto p : pts) {
    const Point2 d = p - c;
    sxx += d.x * d.x;
    syy += d.y * d.y;
    sxy += d.x * d.y;
  }
  // Smallest/largest eigenvalue ratio of the scatter matrix.
  const double tr = sxx + syy;
  const double det = sxx * syy - sxy * sxy;
  if (tr == 0.0) return true;
  return det <= 1e-24 * tr * tr;
}

}  // namespace

TpsTransform fit_tps(std::span<const Point2> source, std::span<const Point2> target, double regularization) {
  if (source.size() != target.size()) throw Error(ErrorKind::kInvalidInput, "source and target sizes differ");
  if (source.size() < 3) throw Error(ErrorKind::kInvalidInput, "TPS needs at least 3 control points");
  if (!(regularization >= 0.0)) throw Error(ErrorKind::kInvalidInput, "regularization must be >= 0");
  for (std::size_t i = 0; i < source.size(); ++i) {
    if (!std::isfinite(source[i].x) || !std::isfinite(source[i].y) || !std::isfinite(target[i].x) ||
        !std::isfinite(target[i].y)) {
      throw Error(ErrorKind::kInvalidInput, "non-finite control point");
    }
  }
  if (all_collinear(source)) throw Error(ErrorKind::kSingularSystem, "control points are collinear");
  if (regularization == 0.0) {
    for (std::size_t i = 0; i < source.size(); ++i)
      for (std::size_t j = i + 1; j < source.size(); ++j)
        if (source[i] == source[j]) throw Error(ErrorKind::kSingularSystem, "duplicate control points");
  }

  const auto n = static_cast<Eigen::Index>(source.size());
  Eigen::MatrixXd system = Eigen::MatrixXd::Zero(n + 3, n + 3);
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n + 3, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Point2 si = source[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < n; ++j) {
      system(i, j) = radial_kernel(distance(si, source[static_cast<std::size_t>(j)]));
    }
    system(i, i) += regularization;
    system(i, n) = 1.0;
    system(i, n + 1) = si.x;
    system(i, n + 2) = si.y;
    system(n, i) = 1.0;
    system(n + 1, i) = si.x;
    system(n + 2, i) = si.y;
    rhs(i, 0) = target[static_cast<std::size_t>(i)].x;
    rhs(i, 1) = target[static_cast<std::size_t>(i)].y;
  }

  // Kernel entries grow like r^2 log r while the affine block stays O(1), so
  // a relative pivot threshold would flag dense but well-posed control sets.
  // Exactly degenerate inputs are rejected above; here the solve is trusted
  // when its refined residual is small.
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
  Eigen::MatrixXd solution = lu.solve(rhs);
  // Two rounds of iterative refinement keep the interpolation residual near
  // machine precision even for clustered control points.
  for (int round = 0; round < 2; ++round) solution += lu.solve(rhs - system * solution);
  if (!solution.allFinite()) throw Error(ErrorKind::kSingularSystem, "TPS solve produced non-finite values");
  const double scale = std::max(1.0, rhs.cwiseAbs().maxCoeff());
  if ((system * solution - rhs).cwiseAbs().maxCoeff() > kSolveTolerance * scale) {
    throw Error(ErrorKind::kSingularSystem, "TPS system is singular");
  }

  TpsTransform t;
  t.source_points.assign(source.begin(), source.end());
  t.radial_weights.resize(source.size());
  for (Eigen::Index i = 0; i < n; ++i) t.radial_weights[static_cast<std::size_t>(i)] = {solution(i, 0), solution(i, 1)};
  for (int k = 0; k < 2; ++k) {
    t.affine[static_cast<std::size_t>(k)] = {solution(n, k), solution(n + 1, k), solution(n + 2, k)};
  }
  return t;
}

ControlPoints control_points_from_centerline(const centerline::CenterLine& line, double height) {
  const auto& pts = line.points;
  if (pts.size() < 2) throw Error(ErrorKind::kDegenerateLine, "center-line needs at least two points");
  if (!(height > 0.0)) throw Error(ErrorKind::kInvalidInput, "strip height must be positive");
  double radius_sum = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!(pts[i].radius > 0.0)) throw Error(ErrorKind::kInvalidInput, "center radius must be positive");
    radius_sum += pts[i].radius;
    if (i > 0 && pts[i].position == pts[i - 1].position) {
      throw Error(ErrorKind::kDegenerateLine, "coincident consecutive centers");
    }
  }
  const double scale = (height / 2.0) / (radius_sum / static_cast<double>(pts.size()));

  ControlPoints cp;
  double arc = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i > 0) arc += distance(pts[i].position, pts[i - 1].position);
    const Point2 ahead = pts[std::min(i + 1, pts.size() - 1)].position;
    const Point2 behind = pts[i == 0 ? 0 : i - 1].position;
    Point2 tangent = ahead - behind;
    const double len = norm(tangent);
    if (len == 0.0) throw Error(ErrorKind::kDegenerateLine, "cannot estimate tangent");
    tangent = (1.0 / len) * tangent;
    const Point2 up{tangent.y, -tangent.x};
    const Point2 c = pts[i].position;
    const double r = pts[i].radius;
    cp.source.push_back(c + r * up);
    cp.target.push_back({arc * scale, 0.0});
    cp.source.push_back(c - r * up);
    cp.target.push_back({arc * scale, height});
  }
  cp.target_width = arc * scale;
  return cp;
}

float sample_bilinear(const raster::Raster& image, Point2 p, int channel) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y)) return 0.0f;
  const double fx = p.x - 0.5;
  const double fy = p.y - 0.5;
  const double x0f = std::floor(fx);
  const double y0f = std::floor(fy);
  if (x0f < -2.0 || y0f < -2.0 || x0f > image.width + 1.0 || y0f > image.height + 1.0) return 0.0f;
  const int x0 = static_cast<int>(x0f);
  const int y0 = static_cast<int>(y0f);
  const double ax = fx - x0f;
  const double ay = fy - y0f;
  auto tap = [&](int x, int y) -> double {
    if (x < 0 || y < 0 || x >= image.width || y >= image.height) return 0.0;
    return image.at(x, y, channel);
  };
  const double top = (1.0 - ax) * tap(x0, y0) + ax * tap(x0 + 1, y0);
  const double bottom = (1.0 - ax) * tap(x0, y0 + 1) + ax * tap(x0 + 1, y0 + 1);
  return static_cast<float>((1.0 - ay) * top + ay * bottom);
}

StripWarp rectification_warp(const centerline::CenterLine& line, int height) {
  if (height < 1) throw Error(ErrorKind::kInvalidInput, "strip height must be positive");
  if (line.points.size() < 2) throw Error(ErrorKind::kDegenerateLine, "center-line needs at least two points");
  double mean_r = 0.0;
  for (const auto& p : line.points) mean_r += p.radius;
  mean_r /= static_cast<double>(line.points.size());
  const auto dense = centerline::resample_center_line(line, std::max(1.0, kControlSpacing * mean_r));
  ControlPoints cp = control_points_from_centerline(dense, static_cast<double>(height));
  // Pin interior rows on each normal too; with only the two edge rows the
  // spline lets the columns bow and tilt inside a bend.
  const std::size_t pairs = cp.source.size() / 2;
  for (std::size_t i = 0; i < pairs; ++i) {
    const Point2 s0 = cp.source[2 * i], s1 = cp.source[2 * i + 1];
    const Point2 t0 = cp.target[2 * i], t1 = cp.target[2 * i + 1];
    for (int k = 1; k < kControlRows - 1; ++k) {
      const double f = static_cast<double>(k) / (kControlRows - 1);
      cp.source.push_back(s0 + f * (s1 - s0));
      cp.target.push_back(t0 + f * (t1 - t0));
    }
  }
  StripWarp w;
  w.to_source = fit_tps(cp.target, cp.source, default_regularization(cp.target));
  w.width = std::max(1, static_cast<int>(std::lround(cp.target_width)));
  w.height = height;
  w.x_step = cp.target_width / static_cast<double>(w.width);
  return w;
}

RectifiedStrip rectify_strip(const raster::Raster& image, const centerline::CenterLine& line, int height) {
  const StripWarp w = rectification_warp(line, height);
  RectifiedStrip strip(w.width, w.height, image.channels);
  for (int v = 0; v < w.height; ++v) {
    for (int u = 0; u < w.width; ++u) {
      const Point2 src = w.source_of({u + 0.5, v + 0.5});
      for (int c = 0; c < image.channels; ++c) strip.at(u, v, c) = sample_bilinear(image, src, c);
    }
  }
  return strip;
}

}  // namespace textkernel::tps
