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
#include <string>
#include <vector>

#include "textkernel/geometry.hpp"
#include "textkernel/metrics.hpp"

namespace textkernel::eval {

struct TextBox {
  geometry::Polygon poly;
  std::vector<metrics::Symbol> text;
};

struct PageRecord {
  std::string id;
  std::vector<TextBox> gt;
  std::vector<TextBox> pred;
};

struct Grouping {
  // groups[g] lists pred indices assigned to gt box g, left to right.
  std::vector<std::vector<std::size_t>> groups;
  // Pred indices whose IOU with every gt box is zero. They are also placed in
  // group 0 but never contribute text.
  std::vector<std::size_t> unmatched;

  bool is_unmatched(std::size_t pred_index) const;
};

// Sort preds by leftmost x (ties: top y, then vertex coordinates) and assign
// each to its highest-IOU gt box; ties go to the lowest gt index.
Grouping group_kernel_boxes(const std::vector<geometry::Polygon>& preds, const std::vector<geometry::Polygon>& gts,
                            double iou_cell = 1.0);

struct PageScore {
  std::string id;
  std::size_t gt_lines = 0;
  std::size_t detected = 0;      // true positives
  std::size_t matched_lines = 0; // gt lines that received at least one box
  std::size_t unmatched_boxes = 0;
  metrics::EditCounts edits;
};

struct DetectionScores {
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
};

struct EvalReport {
  DetectionScores detection;
  double cr = 0.0;
  double ar = 0.0;
  std::vector<PageScore> pages;
};

struct EvalOptions {
  double iou_cell = 1.0;
  bool normalize_symbols = false;
  unsigned jobs = 1;
};

// Per gt line: the grouped transcripts concatenated left to right.
std::vector<std::vector<metrics::Symbol>> grouped_transcripts(const PageRecord& page, const Grouping& grouping);

// A line is detected when it received a box and 10 * |grouped text| >= 9 * |gt text|.
PageScore score_page(const PageRecord& page, const EvalOptions& options = {});

DetectionScores detection_scores(const std::vector<PageRecord>& pages, const EvalOptions& options = {});

metrics::Rates page_cr_ar(const std::vector<PageRecord>& pages, const EvalOptions& options = {});

EvalReport evaluate(const std::vector<PageRecord>& pages, const EvalOptions& options = {});

DetectionScores scores_from_pages(const std::vector<PageScore>& pages);

// Moves every vertex by independent uniform offsets in
// [-amp_v * short_side, amp_v * short_side] vertically and
// [-amp_h * short_side, amp_h * short_side] horizontally. Deterministic for a
// fixed seed on every platform.
geometry::Polygon perturb_box(const geometry::Polygon& box, double amp_v, double amp_h, std::uint64_t seed);

}  // namespace textkernel::eval
