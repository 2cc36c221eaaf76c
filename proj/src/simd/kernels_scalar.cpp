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

#include <algorithm>
#include <cmath>

#include "textkernel/simd/kernels.hpp"

namespace textkernel::simd {
namespace {

void column_forward(const std::uint8_t* mask_row, const std::int32_t* prev, std::int32_t* out, std::size_t n) {
  for (std::size_t x = 0; x < n; ++x) out[x] = mask_row[x] ? prev[x] + 1 : 0;
}

void column_backward(const std::int32_t* next, std::int32_t* out, std::size_t n) {
  for (std::size_t x = 0; x < n; ++x) out[x] = std::min(out[x], next[x] + 1);
}

void suppress_disk(double* values, std::size_t width, int x0, int x1, int y0, int y1, double cx, double cy,
                   double radius) {
  for (int y = y0; y < y1; ++y) {
    const double dy = (static_cast<double>(y) + 0.5) - cy;
    double* row = values + static_cast<std::size_t>(y) * width;
    for (int x = x0; x < x1; ++x) {
      const double dx = (static_cast<double>(x) + 0.5) - cx;
      if (std::sqrt(dx * dx + dy * dy) < radius) row[x] = 0.0;
    }
  }
}

std::size_t argmax_first(const double* values, std::size_t n) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

DiceSums dice_sums(const double* pred, const std::uint8_t* gt, std::size_t n) {
  DiceSums s;
  for (std::size_t i = 0; i < n; ++i) {
    const double g = gt[i] ? 1.0 : 0.0;
    s.pred_gt += pred[i] * g;
    s.pred_sq += pred[i] * pred[i];
    s.gt_sq += g;
  }
  return s;
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels kernels{"scalar", column_forward, column_backward, suppress_disk, argmax_first, dice_sums};
  return kernels;
}

}  // namespace textkernel::simd
