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

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "textkernel/common.hpp"
#include "textkernel/raster.hpp"

namespace textkernel::metrics {

using Symbol = std::int32_t;
using LabelSeq = std::vector<Symbol>;

inline constexpr Symbol kBlank = 0;

// Float map for soft predictions (values in [0, 1]).
struct FloatMap {
  int width = 0;
  int height = 0;
  std::vector<double> data;
};

// T x C per-step class posteriors; class 0 is the CTC blank.
class ProbMatrix {
 public:
  // Rows must sum to 1 within 1e-6 and entries lie in [0, 1].
  ProbMatrix(std::size_t timesteps, std::size_t classes, std::vector<double> data);

  std::size_t timesteps() const noexcept { return timesteps_; }
  std::size_t classes() const noexcept { return classes_; }
  double at(std::size_t t, std::size_t c) const { return data_[t * classes_ + c]; }
  std::span<const double> row(std::size_t t) const { return {data_.data() + t * classes_, classes_}; }

 private:
  std::size_t timesteps_;
  std::size_t classes_;
  std::vector<double> data_;
};

struct LossWeights {
  double alpha = 0.1;
};

// 1 - 2 sum(P G) / (sum P^2 + sum G^2); 0 when both maps are all zero.
double dice_loss(const FloatMap& pred, const raster::BinaryMask& gt);

// l_text + alpha * l_kernel
double combined_loss(double l_text, double l_kernel, const LossWeights& w = {});

// Smallest T that can emit `labels`: one step per symbol plus one blank
// between each adjacent equal pair.
std::size_t ctc_min_length(std::span<const Symbol> labels);

// Negative log-likelihood of `labels` summed over all blank-augmented
// alignments (log-space forward recursion). +inf when every path has zero
// probability.
double ctc_forward_loss(const ProbMatrix& probs, std::span<const Symbol> labels);

// Best-path decode: per-step argmax (lowest class on ties), collapse repeats,
// drop blanks.
LabelSeq ctc_greedy_decode(const ProbMatrix& probs);

struct EditCounts {
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  std::size_t reference_length = 0;

  std::size_t distance() const { return substitutions + deletions + insertions; }
  EditCounts& operator+=(const EditCounts& o);
};

// Unit-cost Levenshtein alignment. Backtrace prefers substitution/match,
// then insertion, then deletion.
EditCounts align(std::span<const Symbol> reference, std::span<const Symbol> hypothesis);

struct Rates {
  double cr = 0.0;  // (N - S - D) / N
  double ar = 0.0;  // (N - S - D - I) / N
};

Rates rates_from_counts(const EditCounts& counts);

// Throws EmptyReference when the reference is empty.
Rates cr_ar(std::span<const Symbol> reference, std::span<const Symbol> hypothesis);

// UTF-8 decode into code points; malformed bytes become U+FFFD.
std::vector<Symbol> utf8_symbols(std::string_view text);
std::string utf8_encode(std::span<const Symbol> symbols);

// Optional pre-pass mapping visually confusable full-width forms onto their
// ASCII counterparts (U+FF01..U+FF5E and the ideographic space).
std::vector<Symbol> normalize_symbols(std::span<const Symbol> symbols);

// Symbol -> class index table for CTC label sequences.
using ClassMap = std::unordered_map<std::string, Symbol>;
LabelSeq encode_labels(std::string_view text, const ClassMap& classes);

}  // namespace textkernel::metrics
