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

// Compiled with -mavx2 only; callers reach it through avx2_kernels(), which
// checks CPU support first.
#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <cstring>

#include "textkernel/simd/kernels.hpp"

namespace textkernel::simd::avx2 {
namespace {

void column_forward(const std::uint8_t* mask_row, const std::int32_t* prev, std::int32_t* out, std::size_t n) {
  const __m256i one = _mm256_set1_epi32(1);
  const __m256i zero = _mm256_setzero_si256();
  std::size_t x = 0;
  for (; x + 8 <= n; x += 8) {
    const __m128i bytes = _mm_loadl_epi64(reinterpret_cast<const __m128i*>(mask_row + x));
    const __m256i m = _mm256_cvtepu8_epi32(bytes);
    const __m256i is_bg = _mm256_cmpeq_epi32(m, zero);
    const __m256i p = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(prev + x));
    const __m256i v = _mm256_andnot_si256(is_bg, _mm256_add_epi32(p, one));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + x), v);
  }
  for (; x < n; ++x) out[x] = mask_row[x] ? prev[x] + 1 : 0;
}

void column_backward(const std::int32_t* next, std::int32_t* out, std::size_t n) {
  const __m256i one = _mm256_set1_epi32(1);
  std::size_t x = 0;
  for (; x + 8 <= n; x += 8) {
    const __m256i nx = _mm256_add_epi32(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(next + x)), one);
    const __m256i cur = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(out + x));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + x), _mm256_min_epi32(cur, nx));
  }
  for (; x < n; ++x) out[x] = std::min(out[x], next[x] + 1);
}

void suppress_disk(double* values, std::size_t width, int x0, int x1, int y0, int y1, double cx, double cy,
                   double radius) {
  const __m256d vcx = _mm256_set1_pd(cx);
  const __m256d vr = _mm256_set1_pd(radius);
  const __m256d lane = _mm256_setr_pd(0.5, 1.5, 2.5, 3.5);
  for (int y = y0; y < y1; ++y) {
    const double dy = (static_cast<double>(y) + 0.5) - cy;
    const __m256d dy2 = _mm256_set1_pd(dy * dy);
    double* row = values + static_cast<std::size_t>(y) * width;
    int x = x0;
    for (; x + 4 <= x1; x += 4) {
      // (x + k) + 0.5 is exact for any pixel index, so this matches the scalar path bitwise.
      const __m256d px = _mm256_add_pd(_mm256_set1_pd(static_cast<double>(x)), lane);
      const __m256d dx = _mm256_sub_pd(px, vcx);
      const __m256d d = _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(dx, dx), dy2));
      const __m256d inside = _mm256_cmp_pd(d, vr, _CMP_LT_OQ);
      const __m256d v = _mm256_loadu_pd(row + x);
      _mm256_storeu_pd(row + x, _mm256_andnot_pd(inside, v));
    }
    for (; x < x1; ++x) {
      const double dx = (static_cast<double>(x) + 0.5) - cx;
      if (std::sqrt(dx * dx + dy * dy) < radius) row[x] = 0.0;
    }
  }
}

std::size_t argmax_first(const double* values, std::size_t n) {
  if (n < 8) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (values[i] > values[best]) best = i;
    return best;
  }
  // Pass 1: the maximum value. Pass 2: its first position.
  __m256d vmax = _mm256_loadu_pd(values);
  std::size_t i = 4;
  for (; i + 4 <= n; i += 4) vmax = _mm256_max_pd(vmax, _mm256_loadu_pd(values + i));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, vmax);
  double best = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
  for (; i < n; ++i) best = std::max(best, values[i]);

  const __m256d target = _mm256_set1_pd(best);
  i = 0;
  for (; i + 4 <= n; i += 4) {
    const int hit = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(values + i), target, _CMP_EQ_OQ));
    if (hit != 0) return i + static_cast<std::size_t>(__builtin_ctz(static_cast<unsigned>(hit)));
  }
  for (; i < n; ++i)
    if (values[i] == best) return i;
  return 0;
}

DiceSums dice_sums(const double* pred, const std::uint8_t* gt, std::size_t n) {
  __m256d s_pg = _mm256_setzero_pd();
  __m256d s_pp = _mm256_setzero_pd();
  __m256d s_gg = _mm256_setzero_pd();
  const __m256d zero = _mm256_setzero_pd();
  const __m256d ones = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    int packed;
    std::memcpy(&packed, gt + i, sizeof(packed));
    const __m128i bytes = _mm_cvtsi32_si128(packed);
    const __m256d g_raw = _mm256_cvtepi32_pd(_mm_cvtepu8_epi32(bytes));
    const __m256d g = _mm256_blendv_pd(zero, ones, _mm256_cmp_pd(g_raw, zero, _CMP_NEQ_OQ));
    const __m256d p = _mm256_loadu_pd(pred + i);
    s_pg = _mm256_add_pd(s_pg, _mm256_mul_pd(p, g));
    s_pp = _mm256_add_pd(s_pp, _mm256_mul_pd(p, p));
    s_gg = _mm256_add_pd(s_gg, g);
  }
  alignas(32) double a[4], b[4], c[4];
  _mm256_store_pd(a, s_pg);
  _mm256_store_pd(b, s_pp);
  _mm256_store_pd(c, s_gg);
  DiceSums s{a[0] + a[1] + a[2] + a[3], b[0] + b[1] + b[2] + b[3], c[0] + c[1] + c[2] + c[3]};
  for (; i < n; ++i) {
    const double g = gt[i] ? 1.0 : 0.0;
    s.pred_gt += pred[i] * g;
    s.pred_sq += pred[i] * pred[i];
    s.gt_sq += g;
  }
  return s;
}

}  // namespace

const Kernels& kernels() {
  static const Kernels k{"avx2", column_forward, column_backward, suppress_disk, argmax_first, dice_sums};
  return k;
}

}  // namespace textkernel::simd::avx2
