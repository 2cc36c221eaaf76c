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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "textkernel/tps.hpp"

using namespace textkernel;

namespace {

centerline::CenterLine horizontal_line(double x0, double x1, double y, double r, int n = 2) {
  centerline::CenterLine l;
  for (int i = 0; i < n; ++i) l.points.push_back({{x0 + (x1 - x0) * i / (n - 1), y}, r});
  return l;
}

}  // namespace

TEST(Tps, RadialKernel) {
  EXPECT_EQ(tps::radial_kernel(0.0), 0.0);
  EXPECT_EQ(tps::radial_kernel(1.0), 0.0);
  EXPECT_NEAR(tps::radial_kernel(2.0), 4.0 * std::log(2.0), 1e-15);
}

TEST(Tps, IdentityFit) {
  const std::vector<Point2> pts{{0, 0}, {3, 1}, {1, 4}, {5, 5}, {2, 2.5}};
  const auto t = tps::fit_tps(pts, pts);
  for (const auto& w : t.radial_weights) {
    EXPECT_NEAR(w.x, 0.0, 1e-9);
    EXPECT_NEAR(w.y, 0.0, 1e-9);
  }
  EXPECT_NEAR(t.affine[0][1], 1.0, 1e-9);
  EXPECT_NEAR(t.affine[1][2], 1.0, 1e-9);
  EXPECT_NEAR(t.affine[0][2], 0.0, 1e-9);
  const Point2 q = tps::apply_tps(t, {7.5, -3.25});
  EXPECT_NEAR(q.x, 7.5, 1e-9);
  EXPECT_NEAR(q.y, -3.25, 1e-9);
}

TEST(Tps, AffineReproduction) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = u(rng) / 25, b = u(rng) / 25, c = u(rng), d = u(rng) / 25, e = u(rng) / 25, f = u(rng);
    std::vector<Point2> src(4 + trial % 12), dst;
    for (auto& p : src) p = {u(rng), u(rng)};
    for (auto p : src) dst.push_back({c + a * p.x + b * p.y, f + d * p.x + e * p.y});
    const auto t = tps::fit_tps(src, dst);
    for (const auto& w : t.radial_weights) {
      EXPECT_LE(std::abs(w.x), 1e-6);
      EXPECT_LE(std::abs(w.y), 1e-6);
    }
    EXPECT_NEAR(t.affine[0][0], c, 1e-6);
    EXPECT_NEAR(t.affine[0][1], a, 1e-6);
    EXPECT_NEAR(t.affine[1][2], e, 1e-6);
    EXPECT_NEAR(t.bending_energy(), 0.0, 1e-6);
  }
}

TEST(Tps, UnitSquareWithDisplacedCorner) {
  const std::vector<Point2> src{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const std::vector<Point2> dst{{0, 0}, {1.1, 0}, {1, 1}, {0, 1}};
  const auto t = tps::fit_tps(src, dst);
  for (std::size_t i = 0; i < src.size(); ++i) {
    EXPECT_NEAR(t(src[i]).x, dst[i].x, 1e-9);
    EXPECT_NEAR(t(src[i]).y, dst[i].y, 1e-9);
  }
  EXPECT_GT(t.bending_energy(), 0.0);
}

TEST(Tps, TranslationMapsMidpointToTranslatedMidpoint) {
  const std::vector<Point2> src{{0, 0}, {4, 0}, {0, 3}};
  std::vector<Point2> dst;
  for (auto p : src) dst.push_back(p + Point2{2.5, -1.0});
  const auto t = tps::fit_tps(src, dst);
  const Point2 m = t({2.0, 0.0});
  EXPECT_NEAR(m.x, 4.5, 1e-12);
  EXPECT_NEAR(m.y, -1.0, 1e-12);
}

TEST(Tps, InterpolatesAndSatisfiesSideConditions) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Point2> src(4 + trial % 17), dst;
    for (auto& p : src) p = {u(rng), u(rng)};
    for (auto p : src) dst.push_back(p + Point2{u(rng) / 10 - 5, u(rng) / 10 - 5});
    const auto t = tps::fit_tps(src, dst);
    Point2 sw{}, swx{}, swy{};
    double scale = 0.0;
    for (std::size_t i = 0; i < src.size(); ++i) {
      const Point2 q = t(src[i]);
      EXPECT_LE(distance(q, dst[i]), 1e-6);
      const Point2 w = t.radial_weights[i];
      sw = sw + w;
      swx = swx + src[i].x * w;
      swy = swy + src[i].y * w;
      scale = std::max({scale, std::abs(src[i].x), std::abs(src[i].y)});
    }
    EXPECT_LE(std::max(std::abs(sw.x), std::abs(sw.y)), 1e-8);
    EXPECT_LE(std::max({std::abs(swx.x), std::abs(swx.y), std::abs(swy.x), std::abs(swy.y)}), 1e-6 * scale);
  }
}

TEST(Tps, ErrorCases) {
  const std::vector<Point2> three{{0, 0}, {1, 0}, {0, 1}};
  EXPECT_THROW(tps::fit_tps(std::vector<Point2>{{0, 0}, {1, 1}}, std::vector<Point2>{{0, 0}, {1, 1}}), Error);
  EXPECT_THROW(tps::fit_tps(three, std::vector<Point2>{{0, 0}, {1, 0}}), Error);
  try {
    tps::fit_tps(std::vector<Point2>{{0, 0}, {1, 1}, {2, 2}, {3, 3}}, std::vector<Point2>(4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSingularSystem);
  }
  try {
    tps::fit_tps(std::vector<Point2>{{0, 0}, {1, 0}, {0, 1}, {1, 0}}, std::vector<Point2>(4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSingularSystem);
  }
  EXPECT_NO_THROW(tps::fit_tps(std::vector<Point2>{{0, 0}, {1, 0}, {0, 1}, {1, 0}}, std::vector<Point2>(4), 1e-3));
}

TEST(Tps, DenseControlSetsAreNotFlaggedSingular) {
  std::vector<Point2> src, dst;
  for (int i = 0; i <= 80; ++i) {
    src.push_back({5.0 * i, 0.0});
    src.push_back({5.0 * i, 20.0});
    dst.push_back({5.0 * i, 3.0 * std::sin(i / 10.0)});
    dst.push_back({5.0 * i, 20.0 + 3.0 * std::sin(i / 10.0)});
  }
  const auto t = tps::fit_tps(src, dst);
  for (std::size_t i = 0; i < src.size(); ++i) EXPECT_LE(distance(t(src[i]), dst[i]), 1e-6);
}

TEST(ControlPoints, StraightLineIsRigid) {
  const auto cp = tps::control_points_from_centerline(horizontal_line(10, 50, 20, 16, 3), 32.0);
  ASSERT_EQ(cp.source.size(), 6u);
  for (std::size_t i = 0; i < cp.source.size(); ++i) {
    const Point2 d = cp.source[i] - cp.target[i];
    EXPECT_NEAR(d.x, 10.0, 1e-12);
    EXPECT_NEAR(d.y, 4.0, 1e-12);
  }
  EXPECT_NEAR(cp.target_width, 40.0, 1e-12);
}

TEST(ControlPoints, TwoPointLineGivesRectangleCorners) {
  const auto cp = tps::control_points_from_centerline(horizontal_line(0, 30, 5, 3), 32.0);
  ASSERT_EQ(cp.target.size(), 4u);
  const double w = 30.0 * 16.0 / 3.0;
  EXPECT_EQ(cp.target[0], (Point2{0, 0}));
  EXPECT_EQ(cp.target[1], (Point2{0, 32}));
  EXPECT_NEAR(cp.target[2].x, w, 1e-12);
  EXPECT_EQ(cp.target[3].y, 32.0);
}

TEST(ControlPoints, SemicircleWidthIsScaledArcLength) {
  centerline::CenterLine l;
  const double R = 50.0, r = 5.0;
  const int n = 181;
  for (int i = 0; i < n; ++i) {
    const double a = std::numbers::pi * (1.0 - static_cast<double>(i) / (n - 1));
    l.points.push_back({{100 + R * std::cos(a), 100 - R * std::sin(a)}, r});
  }
  const auto cp = tps::control_points_from_centerline(l, 32.0);
  double chord_sum = 0.0;
  for (int i = 1; i < n; ++i) chord_sum += distance(l.points[i].position, l.points[i - 1].position);
  EXPECT_NEAR(cp.target_width, chord_sum * 16.0 / r, 1e-9);
  EXPECT_NEAR(cp.target_width, std::numbers::pi * R * 16.0 / r, 0.01 * cp.target_width);
  for (std::size_t i = 2; i < cp.target.size(); i += 2) EXPECT_GT(cp.target[i].x, cp.target[i - 2].x);
}

TEST(ControlPoints, Errors) {
  centerline::CenterLine l;
  l.points = {{{1, 1}, 2.0}};
  EXPECT_THROW(tps::control_points_from_centerline(l, 32), Error);
  l.points = {{{1, 1}, 2.0}, {{1, 1}, 2.0}};
  try {
    tps::control_points_from_centerline(l, 32);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDegenerateLine);
  }
}

TEST(Rectify, ConstantImageGivesConstantStrip) {
  raster::Raster img(80, 40, 1, 77.0f);
  const auto strip = tps::rectify_strip(img, horizontal_line(10, 70, 20, 10, 4), 32);
  EXPECT_EQ(strip.height, 32);
  for (float v : strip.data) EXPECT_NEAR(v, 77.0f, 1e-3);
}

TEST(Rectify, StraightStripMatchesCropResize) {
  raster::Raster img(90, 40, 1);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) img.at(x, y) = static_cast<float>((x * 37 + y * 91) % 256);
  const auto line = horizontal_line(12, 80, 19.5, 8, 5);
  for (const int h : {16, 32, 48}) {
    const auto strip = tps::rectify_strip(img, line, h);
    ASSERT_EQ(strip.height, h);
    const auto ref = oracle::crop_resize(img, 12, 80, 11.5, 27.5, strip.width, strip.height);
    double sum = 0.0;
    for (std::size_t i = 0; i < ref.data.size(); ++i) sum += std::abs(ref.data[i] - strip.data[i]);
    EXPECT_LE(sum / static_cast<double>(ref.data.size()), 2.0);
  }
}

TEST(Rectify, MultiChannelAndOutsideSamplesAreZero) {
  raster::Raster img(20, 10, 3, 5.0f);
  const auto strip = tps::rectify_strip(img, horizontal_line(-40, -10, 5, 4), 8);
  EXPECT_EQ(strip.channels, 3);
  for (float v : strip.data) EXPECT_EQ(v, 0.0f);
  EXPECT_EQ(tps::sample_bilinear(img, {std::nan(""), 1.0}, 0), 0.0f);
}
