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
#include <string_view>

namespace textkernel::simd {

struct DiceSums {
  double pred_gt = 0.0;
  double pred_sq = 0.0;
  double gt_sq = 0.0;
};

// Data-parallel inner loops. Every backend must produce bitwise-identical
// results to the scalar reference, except dice_sums whose summation order
// differs (tests bound the difference).
struct Kernels {
  std::string_view name;

  // One row step of the column pass: col[x] = mask[x] ? prev[x] + 1 : 0.
  // Also used backwards with min(): see column_backward.
  void (*column_forward)(const std::uint8_t* mask_row, const std::int32_t* prev, std::int32_t* out,
                         std::size_t n);
  // out[x] = min(out[x], next[x] + 1)
  void (*column_backward)(const std::int32_t* next, std::int32_t* out, std::size_t n);

  // Zero every value of a width x height row-major grid whose pixel center
  // (x + 0.5, y + 0.5) lies at Euclidean distance < radius from (cx, cy),
  // restricted to rows [y0, y1) and columns [x0, x1).
  void (*suppress_disk)(double* values, std::size_t width, int x0, int x1, int y0, int y1, double cx,
                        double cy, double radius);

  // Index of the maximum; ties go to the lowest index. n must be > 0.
  std::size_t (*argmax_first)(const double* values, std::size_t n);

  DiceSums (*dice_sums)(const double* pred, const std::uint8_t* gt, std::size_t n);
};

const Kernels& scalar_kernels();

// nullptr when the CPU or the build lacks AVX2.
const Kernels* avx2_kernels();

// Best available backend; TEXTKERNEL_SIMD=scalar forces the reference path.
const Kernels& active();

}  // namespace textkernel::simd
