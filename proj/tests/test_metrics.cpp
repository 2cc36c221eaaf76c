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
#include <random>

#include "oracles.hpp"
#include "textkernel/metrics.hpp"

using namespace textkernel;
using metrics::LabelSeq;
using metrics::ProbMatrix;

namespace {

metrics::FloatMap filled(int w, int h, double v) { return {w, h, std::vector<double>(static_cast<std::size_t>(w * h), v)}; }

raster::BinaryMask ones(int w, int h) { return raster::BinaryMask(w, h, std::vector<std::uint8_t>(w * h, 1)); }

ProbMatrix one_hot(const std::vector<int>& path, std::size_t classes) {
  std::vector<double> data(path.size() * classes, 0.0);
  for (std::size_t t = 0; t < path.size(); ++t) data[t * classes + static_cast<std::size_t>(path[t])] = 1.0;
  return ProbMatrix(path.size(), classes, data);
}

std::vector<double> random_stochastic(std::mt19937_64& rng, std::size_t T, std::size_t C) {
  std::uniform_real_distribution<double> u(0.01, 1.0);
  std::vector<double> p(T * C);
  for (std::size_t t = 0; t < T; ++t) {
    double s = 0.0;
    for (std::size_t c = 0; c < C; ++c) s += p[t * C + c] = u(rng);
    for (std::size_t c = 0; c < C; ++c) p[t * C + c] /= s;
  }
  return p;
}

}  // namespace

TEST(Dice, WorkedExamples) {
  auto gt = raster::BinaryMask(4, 4);
  metrics::FloatMap same = filled(4, 4, 0.0);
  for (int i = 0; i < 6; ++i) {
    gt.data()[static_cast<std::size_t>(i)] = 1;
    same.data[static_cast<std::size_t>(i)] = 1.0;
  }
  EXPECT_DOUBLE_EQ(metrics::dice_loss(same, gt), 0.0);
  metrics::FloatMap disjoint = filled(4, 4, 0.0);
  disjoint.data[15] = 1.0;
  EXPECT_DOUBLE_EQ(metrics::dice_loss(disjoint, gt), 1.0);
  EXPECT_NEAR(metrics::dice_loss(filled(10, 7, 0.5), ones(10, 7)), 0.2, 1e-15);
  EXPECT_EQ(metrics::dice_loss(filled(3, 3, 0.0), raster::BinaryMask(3, 3)), 0.0);
}

TEST(Dice, ShapeMismatch) {
  try {
    metrics::dice_loss(filled(3, 3, 0.5), ones(3, 4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kShapeMismatch);
  }
}

TEST(Dice, BoundedAndSymmetricOnBinary) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto gt = oracle::random_mask(rng, 13, 9, u(rng));
    auto pred = filled(13, 9, 0.0);
    for (double& v : pred.data) v = u(rng);
    const double l = metrics::dice_loss(pred, gt);
    EXPECT_GE(l, 0.0);
    EXPECT_LE(l, 1.0);
    const auto other = oracle::random_mask(rng, 13, 9, 0.5);
    metrics::FloatMap a = filled(13, 9, 0.0), b = filled(13, 9, 0.0);
    for (std::size_t i = 0; i < gt.size(); ++i) {
      a.data[i] = gt.data()[i];
      b.data[i] = other.data()[i];
    }
    EXPECT_DOUBLE_EQ(metrics::dice_loss(a, other), metrics::dice_loss(b, gt));
  }
}

TEST(CombinedLoss, WorkedExamples) {
  EXPECT_NEAR(metrics::combined_loss(2.0, 0.5), 2.05, 1e-15);
  EXPECT_EQ(metrics::combined_loss(3.5, 99.0, {0.0}), 3.5);
  EXPECT_EQ(metrics::combined_loss(0.0, 0.0, {7.0}), 0.0);
  EXPECT_THROW(metrics::combined_loss(1.0, 1.0, {-1.0}), Error);
}

TEST(Ctc, SingleForcedPath) {
  const ProbMatrix p(1, 2, {0.0, 1.0});
  EXPECT_NEAR(metrics::ctc_forward_loss(p, LabelSeq{1}), 0.0, 1e-15);
}

TEST(Ctc, UniformTwoStepsMatchesEnumeration) {
  const ProbMatrix p(2, 3, std::vector<double>(6, 1.0 / 3.0));
  // Paths collapsing to [1]: 11, 01, 10.
  EXPECT_NEAR(metrics::ctc_forward_loss(p, LabelSeq{1}), -std::log(3.0 / 9.0), 1e-12);
  EXPECT_NEAR(metrics::ctc_forward_loss(p, LabelSeq{1}),
              oracle::ctc_brute_force_nll(std::vector<double>(6, 1.0 / 3.0), 2, 3, {1}), 1e-12);
}

TEST(Ctc, EmptyLabelIsAllBlankPath) {
  std::mt19937_64 rng(1);
  const auto probs = random_stochastic(rng, 5, 3);
  double expected = 0.0;
  for (std::size_t t = 0; t < 5; ++t) expected -= std::log(probs[t * 3]);
  EXPECT_NEAR(metrics::ctc_forward_loss(ProbMatrix(5, 3, probs), LabelSeq{}), expected, 1e-12);
}

TEST(Ctc, InfeasibleLength) {
  EXPECT_EQ(metrics::ctc_min_length(LabelSeq{1, 1, 2}), 4u);
  const ProbMatrix p(3, 3, std::vector<double>(9, 1.0 / 3.0));
  try {
    metrics::ctc_forward_loss(p, LabelSeq{1, 1, 2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInfeasibleLength);
  }
  EXPECT_THROW(metrics::ctc_forward_loss(p, LabelSeq{0}), Error);
  EXPECT_THROW(metrics::ctc_forward_loss(p, LabelSeq{3}), Error);
}

TEST(Ctc, MatchesBruteForceOnRandomMatrices) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t T = 1 + trial % 6, C = 2 + trial % 3;
    const auto probs = random_stochastic(rng, T, C);
    std::uniform_int_distribution<int> sym(1, static_cast<int>(C) - 1);
    LabelSeq labels(static_cast<std::size_t>(trial % 4));
    for (auto& s : labels) s = sym(rng);
    if (metrics::ctc_min_length(labels) > T) continue;
    const double lib = metrics::ctc_forward_loss(ProbMatrix(T, C, probs), labels);
    const double ref = oracle::ctc_brute_force_nll(probs, T, C, std::vector<int>(labels.begin(), labels.end()));
    EXPECT_NEAR(lib, ref, 1e-10) << "trial " << trial;
    EXPECT_GE(lib, 0.0);
  }
}

TEST(Ctc, MovingMassOntoValidPathLowersLoss) {
  const LabelSeq labels{1, 2};
  double prev = std::numeric_limits<double>::infinity();
  for (const double m : {0.34, 0.5, 0.7, 0.9, 0.99}) {
    const double rest = (1.0 - m) / 2.0;
    const ProbMatrix p(3, 3, {rest, m, rest, m, rest, rest, rest, rest, m});
    const double l = metrics::ctc_forward_loss(p, labels);
    EXPECT_LT(l, prev);
    prev = l;
  }
}

TEST(GreedyDecode, Examples) {
  EXPECT_EQ(metrics::ctc_greedy_decode(one_hot({1, 1, 0, 2}, 3)), (LabelSeq{1, 2}));
  EXPECT_TRUE(metrics::ctc_greedy_decode(one_hot({0, 0, 0}, 3)).empty());
  EXPECT_EQ(metrics::ctc_greedy_decode(one_hot({1, 0, 1}, 3)), (LabelSeq{1, 1}));
  // Ties go to the lower class index.
  EXPECT_EQ(metrics::ctc_greedy_decode(ProbMatrix(1, 3, {0.2, 0.4, 0.4})), (LabelSeq{1}));
}

TEST(ProbMatrix, Validation) {
  EXPECT_THROW(ProbMatrix(2, 2, {0.5, 0.5, 0.5}), Error);
  EXPECT_THROW(ProbMatrix(1, 2, {0.6, 0.6}), Error);
  EXPECT_THROW(ProbMatrix(1, 2, {-0.1, 1.1}), Error);
}

TEST(CrAr, WorkedExamples) {
  const std::vector<metrics::Symbol> ref{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  auto r = metrics::cr_ar(ref, ref);
  EXPECT_DOUBLE_EQ(r.cr, 1.0);
  EXPECT_DOUBLE_EQ(r.ar, 1.0);
  auto sub = ref;
  sub[4] = 42;
  r = metrics::cr_ar(ref, sub);
  EXPECT_DOUBLE_EQ(r.cr, 0.9);
  EXPECT_DOUBLE_EQ(r.ar, 0.9);
  auto ins = ref;
  ins.insert(ins.begin() + 3, 50);
  ins.push_back(51);
  r = metrics::cr_ar(ref, ins);
  EXPECT_DOUBLE_EQ(r.cr, 1.0);
  EXPECT_DOUBLE_EQ(r.ar, 0.8);
  const auto counts = metrics::align(ref, ins);
  EXPECT_EQ(counts.insertions, 2u);
  EXPECT_EQ(counts.substitutions + counts.deletions, 0u);
}

TEST(CrAr, EmptyReferenceAndInsertionHeavy) {
  try {
    metrics::cr_ar(std::vector<metrics::Symbol>{}, std::vector<metrics::Symbol>{1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kEmptyReference);
  }
  const auto r = metrics::cr_ar(std::vector<metrics::Symbol>{1}, std::vector<metrics::Symbol>{1, 2, 3, 4});
  EXPECT_DOUBLE_EQ(r.cr, 1.0);
  EXPECT_DOUBLE_EQ(r.ar, -2.0);
}

TEST(CrAr, BoundsAndLevenshteinOracle) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> len(0, 12), sym(1, 4);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<int> a(static_cast<std::size_t>(len(rng) + 1)), b(static_cast<std::size_t>(len(rng)));
    for (int& s : a) s = sym(rng);
    for (int& s : b) s = sym(rng);
    const std::vector<metrics::Symbol> ra(a.begin(), a.end()), rb(b.begin(), b.end());
    const auto counts = metrics::align(ra, rb);
    EXPECT_EQ(counts.distance(), oracle::levenshtein(a, b));
    EXPECT_EQ(counts.reference_length, a.size());
    EXPECT_EQ(b.size() + counts.deletions, a.size() + counts.insertions);
    const auto r = metrics::cr_ar(ra, rb);
    EXPECT_LE(r.ar, r.cr);
    EXPECT_LE(r.cr, 1.0);
  }
}

TEST(Utf8, RoundTripAndNormalize) {
  const std::string s = "ab\xE4\xB8\xAD\xEF\xBC\xA1";  // "ab", U+4E2D, U+FF21
  const auto sym = metrics::utf8_symbols(s);
  ASSERT_EQ(sym.size(), 4u);
  EXPECT_EQ(sym[2], 0x4E2D);
  EXPECT_EQ(metrics::utf8_encode(sym), s);
  const auto n = metrics::normalize_symbols(sym);
  EXPECT_EQ(n[3], 'A');
  EXPECT_EQ(n[2], 0x4E2D);
}
