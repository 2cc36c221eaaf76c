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

#include "textkernel/simd/kernels.hpp"

using namespace textkernel;

namespace {

const simd::Kernels& vector_kernels() {
  const simd::Kernels* k = simd::avx2_kernels();
  return k != nullptr ? *k : simd::scalar_kernels();
}

}  // namespace

class SimdEquivalence : public ::testing::Test {
 protected:
  void SetUp() override {
    if (simd::avx2_kernels() == nullptr) GTEST_SKIP() << "AVX2 backend unavailable";
  }
  const simd::Kernels& ref = simd::scalar_kernels();
  const simd::Kernels& vec = vector_kernels();
  std::mt19937_64 rng{2024};
};

TEST(SimdDispatch, ActiveBackendIsKnown) {
  const auto name = simd::active().name;
  EXPECT_TRUE(name == simd::scalar_kernels().name || (simd::avx2_kernels() && name == simd::avx2_kernels()->name));
}

TEST_F(SimdEquivalence, ColumnPasses) {
  std::uniform_int_distribution<int> bit(0, 3), val(0, 1000);
  for (std::size_t n : {1u, 7u, 8u, 9u, 31u, 64u, 257u}) {
    std::vector<std::uint8_t> mask(n);
    std::vector<std::int32_t> prev(n), a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      mask[i] = bit(rng) != 0;
      prev[i] = val(rng);
    }
    ref.column_forward(mask.data(), prev.data(), a.data(), n);
    vec.column_forward(mask.data(), prev.data(), b.data(), n);
    EXPECT_EQ(a, b) << "n = " << n;
    for (std::size_t i = 0; i < n; ++i) a[i] = b[i] = val(rng);
    ref.column_backward(prev.data(), a.data(), n);
    vec.column_backward(prev.data(), b.data(), n);
    EXPECT_EQ(a, b) << "n = " << n;
  }
}

TEST_F(SimdEquivalence, SuppressDisk) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t w = 1 + trial % 45, h = 1 + trial % 23;
    std::vector<double> a(w * h);
    for (double& v : a) v = u(rng);
    auto b = a;
    const double cx = u(rng) * w, cy = u(rng) * h, r = 0.5 + u(rng) * 12;
    const int x0 = std::max(0, static_cast<int>(cx - r) - 1), x1 = std::min<int>(w, static_cast<int>(cx + r) + 2);
    const int y0 = std::max(0, static_cast<int>(cy - r) - 1), y1 = std::min<int>(h, static_cast<int>(cy + r) + 2);
    ref.suppress_disk(a.data(), w, x0, x1, y0, y1, cx, cy, r);
    vec.suppress_disk(b.data(), w, x0, x1, y0, y1, cx, cy, r);
    EXPECT_EQ(a, b) << "trial " << trial;
  }
}

TEST_F(SimdEquivalence, ArgmaxFirstWithTies) {
  std::uniform_int_distribution<int> val(0, 5);
  for (std::size_t n = 1; n < 100; ++n) {
    std::vector<double> v(n);
    for (double& x : v) x = val(rng);
    EXPECT_EQ(ref.argmax_first(v.data(), n), vec.argmax_first(v.data(), n)) << "n = " << n;
    const std::size_t expect = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
    EXPECT_EQ(ref.argmax_first(v.data(), n), expect);
  }
}

TEST_F(SimdEquivalence, DiceSumsWithinRoundoff) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t n : {1u, 3u, 4u, 5u, 100u, 4097u}) {
    std::vector<double> p(n);
    std::vector<std::uint8_t> g(n);
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = u(rng);
      g[i] = u(rng) < 0.5;
    }
    const auto a = ref.dice_sums(p.data(), g.data(), n);
    const auto b = vec.dice_sums(p.data(), g.data(), n);
    EXPECT_NEAR(a.pred_gt, b.pred_gt, 1e-12 * (1.0 + a.pred_gt));
    EXPECT_NEAR(a.pred_sq, b.pred_sq, 1e-12 * (1.0 + a.pred_sq));
    EXPECT_EQ(a.gt_sq, b.gt_sq);
  }
}
