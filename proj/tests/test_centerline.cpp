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

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "textkernel/centerline.hpp"
#include "textkernel/raster.hpp"
#include "textkernel/synthetic.hpp"

using namespace textkernel;
using centerline::CenterPoint;
using raster::BinaryMask;

namespace {

BinaryMask bar(int w, int h, int margin) {
  BinaryMask m(w + 2 * margin, h + 2 * margin);
  for (int y = margin; y < margin + h; ++y)
    for (int x = margin; x < margin + w; ++x) m.set(x, y);
  return m;
}

BinaryMask disk(double radius) {
  const int size = static_cast<int>(2 * radius) + 6;
  const double c = size / 2.0;
  BinaryMask m(size, size);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x)
      if ((x + 0.5 - c) * (x + 0.5 - c) + (y + 0.5 - c) * (y + 0.5 - c) <= radius * radius) m.set(x, y);
  return m;
}

std::vector<Point2> positions(const centerline::CenterLine& l) {
  std::vector<Point2> out;
  for (const auto& p : l.points) out.push_back(p.position);
  return out;
}

}  // namespace

TEST(CenterPoints, DiskGivesOneCenter) {
  const auto m = disk(20.0);
  const auto c = centerline::generate_center_points(m);
  ASSERT_EQ(c.points.size(), 1u);
  EXPECT_NEAR(c.points[0].radius, 20.0, 1.0);
  EXPECT_NEAR(c.points[0].position.x, m.width() / 2.0, 1.0);
  EXPECT_NEAR(c.min_r, 10.0, 0.6);
  const auto contour = raster::trace_contour(m);
  EXPECT_EQ(c.points, oracle::algorithm1(m, contour.length()));
}

TEST(CenterPoints, HorizontalBarCentersOnMidRow) {
  const auto m = bar(200, 20, 3);
  const auto c = centerline::generate_center_points(m);
  ASSERT_GE(c.points.size(), 2u);
  EXPECT_NEAR(c.min_r, 200.0 * 20.0 / 440.0, 0.2);
  for (const auto& p : c.points) {
    EXPECT_NEAR(p.position.y, 3 + 10.0, 0.51);
    EXPECT_NEAR(p.radius, 10.0, 0.6);
  }
  for (std::size_t i = 0; i < c.points.size(); ++i)
    for (std::size_t j = i + 1; j < c.points.size(); ++j)
      EXPECT_GE(distance(c.points[i].position, c.points[j].position), 4.0 * c.min_r - std::sqrt(2.0));
  EXPECT_EQ(c.points, oracle::algorithm1(m, raster::trace_contour(m).length()));
}

TEST(CenterPoints, SliverGivesNoCenters) {
  // A two-row bar has EDT 1 everywhere and min_r = area / contour length = 1.
  const auto c = centerline::generate_center_points(bar(30, 2, 1));
  EXPECT_NEAR(c.min_r, 1.0, 1e-12);
  EXPECT_TRUE(c.points.empty());
}

TEST(CenterPoints, EmptyRegionThrows) {
  try {
    centerline::generate_center_points(BinaryMask(5, 5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kEmptyRegion);
  }
}

TEST(CenterPoints, CentersInsideWithEdtRadiusAndSpacing) {
  for (const double amp : {0.0, 8.0, 15.0}) {
    synth::StripSpec s;
    s.length = 160;
    s.half_height = 7;
    s.amplitude = amp;
    s.period = 120;
    const auto r = synth::render_strip(s);
    const auto c = centerline::generate_center_points(r.mask);
    const auto d = raster::euclidean_distance_transform(r.mask);
    for (const auto& p : c.points) {
      const int x = static_cast<int>(p.position.x), y = static_cast<int>(p.position.y);
      EXPECT_TRUE(r.mask.at(x, y));
      EXPECT_EQ(p.radius, d.at(x, y));
    }
    for (std::size_t i = 0; i < c.points.size(); ++i)
      for (std::size_t j = i + 1; j < c.points.size(); ++j)
        EXPECT_GE(distance(c.points[i].position, c.points[j].position), 4.0 * c.min_r - std::sqrt(2.0));
  }
}

TEST(Reorder, SinglePoint) {
  const auto l = centerline::reorder_center_points({{{3, 4}, 2.0}}, 1.0);
  ASSERT_EQ(l.points.size(), 1u);
  EXPECT_EQ(l.min_r, 1.0);
}

TEST(Reorder, OrderedCollinearKeepsOrder) {
  std::vector<CenterPoint> pts;
  for (int i = 0; i < 8; ++i) pts.push_back({{10.0 * i, 5.0}, 1.0});
  EXPECT_EQ(centerline::reorder_center_points(pts, 1.0).points, pts);
}

TEST(Reorder, ShuffledCollinearSortsByAbscissa) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<CenterPoint> pts;
    for (int i = 0; i < 10; ++i) pts.push_back({{7.0 * i + 0.1 * trial, 12.0}, 1.0 + i});
    auto sorted = pts;
    std::shuffle(pts.begin(), pts.end(), rng);
    EXPECT_EQ(centerline::reorder_center_points(pts, 1.0).points, sorted) << "trial " << trial;
  }
}

TEST(Reorder, PermutationWithAbscissaRule) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<CenterPoint> pts(1 + trial % 12);
    for (auto& p : pts) p = {{u(rng), u(rng)}, 1.0 + u(rng) / 10.0};
    const auto l = centerline::reorder_center_points(pts, 1.0);
    ASSERT_EQ(l.points.size(), pts.size());
    EXPECT_LE(l.points.front().position.x, l.points.back().position.x);
    auto a = pts, b = l.points;
    auto key = [](const CenterPoint& p, const CenterPoint& q) {
      return std::tie(p.position.x, p.position.y, p.radius) < std::tie(q.position.x, q.position.y, q.radius);
    };
    std::sort(a.begin(), a.end(), key);
    std::sort(b.begin(), b.end(), key);
    EXPECT_EQ(a, b);
  }
}

TEST(Reorder, EmptyThrows) { EXPECT_THROW(centerline::reorder_center_points({}, 1.0), Error); }

TEST(Extend, StraightBarReachesBothEnds) {
  const auto m = bar(200, 20, 3);
  const auto c = centerline::generate_center_points(m);
  const auto line = centerline::reorder_center_points(c.points, c.min_r);
  const auto ext = centerline::extend_center_line(line, m);
  ASSERT_EQ(ext.points.size(), line.points.size() + 2);
  // Ray-march oracle: last in-region pixel-center abscissa along the mid row.
  EXPECT_NEAR(ext.points.front().position.x, 3.0, 1.0);
  EXPECT_NEAR(ext.points.back().position.x, 203.0, 1.0);
  EXPECT_NEAR(ext.points.front().position.y, line.points.front().position.y, 1e-9);
  EXPECT_EQ(ext.points.front().radius, line.points.front().radius);
  EXPECT_EQ(ext.points.back().radius, line.points.back().radius);
}

TEST(Extend, LineAtBorderIsUnchanged) {
  BinaryMask m(10, 3);
  for (int x = 0; x < 10; ++x) m.set(x, 1);
  centerline::CenterLine line;
  line.points = {{{0.5, 1.5}, 1.0}, {{9.5, 1.5}, 1.0}};
  EXPECT_EQ(centerline::extend_center_line(line, m).points, line.points);
}

TEST(Extend, SinglePointUnchanged) {
  const auto m = disk(12.0);
  const auto c = centerline::generate_center_points(m);
  const auto line = centerline::reorder_center_points(c.points, c.min_r);
  ASSERT_EQ(line.points.size(), 1u);
  EXPECT_EQ(centerline::extend_center_line(line, m).points, line.points);
}

TEST(Extend, CurvedStripStaysCloseToMedialLine) {
  synth::StripSpec s;
  s.length = 300;
  s.half_height = 8;
  s.amplitude = 15;
  s.period = 250;
  const auto r = synth::render_strip(s);
  const auto c = centerline::generate_center_points(r.mask);
  const auto line = centerline::extend_center_line(centerline::reorder_center_points(c.points, c.min_r), r.mask);
  EXPECT_LE(oracle::hausdorff(positions(line), r.true_centerline), 0.75 * s.half_height);
}

TEST(Resample, KeepsStraightLinesStraightAndSpacing) {
  centerline::CenterLine line;
  line.points = {{{0, 5}, 2.0}, {{40, 5}, 4.0}, {{45, 5}, 4.0}};
  const auto d = centerline::resample_center_line(line, 3.0);
  // ceil(40 / 3) + ceil(5 / 3) pieces.
  ASSERT_EQ(d.points.size(), 14u + 2u + 1u);
  for (std::size_t i = 1; i < d.points.size(); ++i) {
    EXPECT_NEAR(d.points[i].position.y, 5.0, 1e-12);
    EXPECT_GT(d.points[i].position.x, d.points[i - 1].position.x);
  }
  EXPECT_EQ(d.points.front(), line.points.front());
  EXPECT_EQ(d.points[14], line.points[1]);
  EXPECT_EQ(d.points.back(), line.points.back());
  EXPECT_NEAR(d.points[5].radius, 2.0 + 2.0 * 5.0 / 14.0, 1e-12);
  // Evenly spaced pieces reproduce a uniform straight line exactly.
  centerline::CenterLine even;
  for (int i = 0; i < 4; ++i) even.points.push_back({{10.0 * i, 0.0}, 1.0});
  const auto e = centerline::resample_center_line(even, 2.5);
  ASSERT_EQ(e.points.size(), 13u);
  for (std::size_t i = 0; i < e.points.size(); ++i) EXPECT_NEAR(e.points[i].position.x, 2.5 * i, 1e-9);
  EXPECT_THROW(centerline::resample_center_line(line, 0.0), Error);
}

TEST(Refine, RecoversCrestsBetweenSparseCenters) {
  synth::StripSpec s;
  s.length = 400;
  s.half_height = 14;
  s.amplitude = 10;
  s.period = 200;
  const auto r = synth::render_strip(s);
  const auto c = centerline::generate_center_points(r.mask);
  const auto line = centerline::extend_center_line(centerline::reorder_center_points(c.points, c.min_r), r.mask);
  const auto refined = centerline::refine_center_line(line, r.mask, 7.0);
  double worst = 0.0;
  for (const auto& p : refined.points)
    worst = std::max(worst, oracle::point_polyline_distance(p.position, r.true_centerline));
  EXPECT_LT(worst, 1.0);
}
