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

#include "textkernel/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <random>
#include <thread>
#include <tuple>

namespace textkernel::eval {

bool Grouping::is_unmatched(std::size_t pred_index) const {
  return std::find(unmatched.begin(), unmatched.end(), pred_index) != unmatched.end();
}

namespace {

// Canonical left-to-right key so the grouping does not depend on input order.
bool box_before(const geometry::Polygon& a, const geometry::Polygon& b) {
  const double ax = a.min_x(), bx = b.min_x();
  if (ax != bx) return ax < bx;
  const double ay = a.min_y(), by = b.min_y();
  if (ay != by) return ay < by;
  return std::lexicographical_compare(a.vertices.begin(), a.vertices.end(), b.vertices.begin(), b.vertices.end(),
                                      [](Point2 p, Point2 q) { return std::tie(p.x, p.y) < std::tie(q.x, q.y); });
}

}  // namespace

Grouping group_kernel_boxes(const std::vector<geometry::Polygon>& preds, const std::vector<geometry::Polygon>& gts,
                            double iou_cell) {
  if (gts.empty()) throw Error(ErrorKind::kNoGroundTruth, "grouping needs at least one ground-truth box");
  std::vector<std::size_t> order(preds.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return box_before(preds[i], preds[j]); });

  Grouping g;
  g.groups.resize(gts.size());
  for (const std::size_t i : order) {
    std::size_t best = 0;
    double best_iou = 0.0;
    for (std::size_t j = 0; j < gts.size(); ++j) {
      const double iou = geometry::polygon_iou(preds[i], gts[j], iou_cell);
      if (iou > best_iou) {
        best_iou = iou;
        best = j;
      }
    }
    if (best_iou == 0.0) g.unmatched.push_back(i);
    g.groups[best].push_back(i);
  }
  return g;
}

std::vector<std::vector<metrics::Symbol>> grouped_transcripts(const PageRecord& page, const Grouping& grouping) {
  std::vector<std::vector<metrics::Symbol>> out(grouping.groups.size());
  for (std::size_t g = 0; g < grouping.groups.size(); ++g) {
    for (const std::size_t i : grouping.groups[g]) {
      if (grouping.is_unmatched(i)) continue;
      const auto& text = page.pred[i].text;
      out[g].insert(out[g].end(), text.begin(), text.end());
    }
  }
  return out;
}

PageScore score_page(const PageRecord& page, const EvalOptions& options) {
  PageScore score;
  score.id = page.id;
  score.gt_lines = page.gt.size();
  if (page.gt.empty()) {
    score.unmatched_boxes = page.pred.size();
    return score;
  }

  std::vector<geometry::Polygon> gts, preds;
  for (const auto& b : page.gt) gts.push_back(b.poly);
  for (const auto& b : page.pred) preds.push_back(b.poly);
  const Grouping grouping = group_kernel_boxes(preds, gts, options.iou_cell);
  score.unmatched_boxes = grouping.unmatched.size();
  const auto texts = grouped_transcripts(page, grouping);

  for (std::size_t g = 0; g < page.gt.size(); ++g) {
    const bool received = std::any_of(grouping.groups[g].begin(), grouping.groups[g].end(),
                                      [&](std::size_t i) { return !grouping.is_unmatched(i); });
    auto reference = page.gt[g].text;
    auto hypothesis = texts[g];
    if (options.normalize_symbols) {
      reference = metrics::normalize_symbols(reference);
      hypothesis = metrics::normalize_symbols(hypothesis);
    }
    if (received) {
      ++score.matched_lines;
      if (10 * hypothesis.size() >= 9 * reference.size()) ++score.detected;
    }
    score.edits += metrics::align(reference, hypothesis);
  }
  return score;
}

namespace {

std::vector<PageScore> score_pages(const std::vector<PageRecord>& pages, const EvalOptions& options) {
  std::vector<PageScore> scores(pages.size());
  const unsigned workers = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(pages.size())));
  if (workers <= 1) {
    for (std::size_t i = 0; i < pages.size(); ++i) scores[i] = score_page(pages[i], options);
    return scores;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = next++; i < pages.size(); i = next++) scores[i] = score_page(pages[i], options);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return scores;
}

}  // namespace

DetectionScores scores_from_pages(const std::vector<PageScore>& pages) {
  std::size_t tp = 0, gt = 0, claimed = 0;
  for (const auto& p : pages) {
    tp += p.detected;
    gt += p.gt_lines;
    claimed += p.matched_lines + p.unmatched_boxes;
  }
  DetectionScores s;
  s.recall = gt == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(gt);
  s.precision = claimed == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(claimed);
  s.f_measure = s.precision + s.recall > 0.0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
  return s;
}

DetectionScores detection_scores(const std::vector<PageRecord>& pages, const EvalOptions& options) {
  return scores_from_pages(score_pages(pages, options));
}

metrics::Rates page_cr_ar(const std::vector<PageRecord>& pages, const EvalOptions& options) {
  metrics::EditCounts total;
  for (const auto& p : score_pages(pages, options)) total += p.edits;
  return metrics::rates_from_counts(total);
}

EvalReport evaluate(const std::vector<PageRecord>& pages, const EvalOptions& options) {
  EvalReport report;
  report.pages = score_pages(pages, options);
  report.detection = scores_from_pages(report.pages);
  metrics::EditCounts total;
  for (const auto& p : report.pages) total += p.edits;
  if (total.reference_length > 0) {
    const auto rates = metrics::rates_from_counts(total);
    report.cr = rates.cr;
    report.ar = rates.ar;
  }
  return report;
}

geometry::Polygon perturb_box(const geometry::Polygon& box, double amp_v, double amp_h, std::uint64_t seed) {
  if (box.vertices.size() != 4) throw Error(ErrorKind::kInvalidInput, "perturbation expects a 4-vertex box");
  if (!(amp_v >= 0.0) || !(amp_h >= 0.0)) throw Error(ErrorKind::kInvalidInput, "amplitudes must be >= 0");
  const auto& v = box.vertices;
  const double short_side = std::min(distance(v[0], v[1]), distance(v[1], v[2]));

  // mt19937_64 is fully specified; mapping its output by hand (instead of
  // std::uniform_real_distribution) keeps results identical across standard libraries.
  std::mt19937_64 rng(seed);
  auto symmetric = [&](double amplitude) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return (2.0 * u - 1.0) * amplitude;
  };
  geometry::Polygon out = box;
  for (auto& p : out.vertices) {
    const double dy = symmetric(amp_v * short_side);
    const double dx = symmetric(amp_h * short_side);
    p.x += dx;
    p.y += dy;
  }
  return out;
}

}  // namespace textkernel::eval
