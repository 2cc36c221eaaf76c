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

#include "textkernel/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "textkernel/simd/kernels.hpp"

namespace textkernel::metrics {

ProbMatrix::ProbMatrix(std::size_t timesteps, std::size_t classes, std::vector<double> data)
    : timesteps_(timesteps), classes_(classes), data_(std::move(data)) {
  if (classes_ < 1) throw Error(ErrorKind::kInvalidInput, "probability matrix needs at least one class");
  if (data_.size() != timesteps_ * classes_) throw Error(ErrorKind::kShapeMismatch, "probability data is not T x C");
  for (std::size_t t = 0; t < timesteps_; ++t) {
    double sum = 0.0;
    for (std::size_t c = 0; c < classes_; ++c) {
      const double p = data_[t * classes_ + c];
      if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::kInvalidInput, "probabilities must lie in [0, 1]");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-6) {
      throw Error(ErrorKind::kInvalidInput, "row " + std::to_string(t) + " does not sum to 1");
    }
  }
}

double dice_loss(const FloatMap& pred, const raster::BinaryMask& gt) {
  if (pred.width != gt.width() || pred.height != gt.height() || pred.data.size() != gt.size()) {
    throw Error(ErrorKind::kShapeMismatch, "prediction and ground truth differ in shape");
  }
  const auto s = simd::active().dice_sums(pred.data.data(), gt.data().data(), gt.size());
  const double denom = s.pred_sq + s.gt_sq;
  if (denom == 0.0) return 0.0;
  // Same value as 1 - 2 PG / (P^2 + G^2) without the cancellation; the
  // numerator is sum (P - G)^2 >= 0 up to rounding.
  const double num = std::max(0.0, denom - 2.0 * s.pred_gt);
  return std::min(1.0, num / denom);
}

double combined_loss(double l_text, double l_kernel, const LossWeights& w) {
  if (!(w.alpha >= 0.0)) throw Error(ErrorKind::kInvalidInput, "alpha must be >= 0");
  return l_text + w.alpha * l_kernel;
}

std::size_t ctc_min_length(std::span<const Symbol> labels) {
  std::size_t n = labels.size();
  for (std::size_t i = 1; i < labels.size(); ++i)
    if (labels[i] == labels[i - 1]) ++n;
  return n;
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

double safe_log(double p) { return p > 0.0 ? std::log(p) : kNegInf; }

}  // namespace

double ctc_forward_loss(const ProbMatrix& probs, std::span<const Symbol> labels) {
  for (const Symbol s : labels) {
    if (s <= kBlank || static_cast<std::size_t>(s) >= probs.classes()) {
      throw Error(ErrorKind::kInvalidInput, "label " + std::to_string(s) + " outside 1..C-1");
    }
  }
  const std::size_t steps = probs.timesteps();
  if (steps < ctc_min_length(labels) || steps == 0) {
    throw Error(ErrorKind::kInfeasibleLength, "sequence too short for the label");
  }

  // Blank-augmented label: b l1 b l2 ... b
  const std::size_t ext = 2 * labels.size() + 1;
  auto ext_symbol = [&](std::size_t s) { return s % 2 == 0 ? kBlank : labels[s / 2]; };

  std::vector<double> alpha(ext, kNegInf), next(ext, kNegInf);
  alpha[0] = safe_log(probs.at(0, kBlank));
  if (ext > 1) alpha[1] = safe_log(probs.at(0, static_cast<std::size_t>(labels[0])));
  for (std::size_t t = 1; t < steps; ++t) {
    for (std::size_t s = 0; s < ext; ++s) {
      double acc = alpha[s];
      if (s >= 1) acc = log_add(acc, alpha[s - 1]);
      if (s >= 2 && ext_symbol(s) != kBlank && ext_symbol(s) != ext_symbol(s - 2)) acc = log_add(acc, alpha[s - 2]);
      next[s] = acc == kNegInf ? kNegInf : acc + safe_log(probs.at(t, static_cast<std::size_t>(ext_symbol(s))));
    }
    std::swap(alpha, next);
  }
  double total = alpha[ext - 1];
  if (ext > 1) total = log_add(total, alpha[ext - 2]);
  return total == kNegInf ? std::numeric_limits<double>::infinity() : -total;
}

LabelSeq ctc_greedy_decode(const ProbMatrix& probs) {
  LabelSeq out;
  Symbol prev = kBlank;
  for (std::size_t t = 0; t < probs.timesteps(); ++t) {
    const auto row = probs.row(t);
    const auto best = static_cast<Symbol>(std::max_element(row.begin(), row.end()) - row.begin());
    if (best != kBlank && best != prev) out.push_back(best);
    prev = best;
  }
  return out;
}

EditCounts& EditCounts::operator+=(const EditCounts& o) {
  substitutions += o.substitutions;
  deletions += o.deletions;
  insertions += o.insertions;
  reference_length += o.reference_length;
  return *this;
}

EditCounts align(std::span<const Symbol> reference, std::span<const Symbol> hypothesis) {
  const std::size_t n = reference.size();
  const std::size_t m = hypothesis.size();
  std::vector<std::size_t> dp((n + 1) * (m + 1));
  auto cell = [&](std::size_t i, std::size_t j) -> std::size_t& { return dp[i * (m + 1) + j]; };
  for (std::size_t i = 0; i <= n; ++i) cell(i, 0) = i;
  for (std::size_t j = 0; j <= m; ++j) cell(0, j) = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t sub = cell(i - 1, j - 1) + (reference[i - 1] != hypothesis[j - 1] ? 1 : 0);
      cell(i, j) = std::min({sub, cell(i, j - 1) + 1, cell(i - 1, j) + 1});
    }
  }

  EditCounts counts;
  counts.reference_length = n;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const bool differ = reference[i - 1] != hypothesis[j - 1];
      if (cell(i, j) == cell(i - 1, j - 1) + (differ ? 1 : 0)) {
        counts.substitutions += differ ? 1 : 0;
        --i;
        --j;
        continue;
      }
    }
    if (j > 0 && cell(i, j) == cell(i, j - 1) + 1) {
      ++counts.insertions;
      --j;
    } else {
      ++counts.deletions;
      --i;
    }
  }
  return counts;
}

Rates rates_from_counts(const EditCounts& c) {
  if (c.reference_length == 0) throw Error(ErrorKind::kEmptyReference, "reference has no symbols");
  const auto n = static_cast<double>(c.reference_length);
  const auto sd = static_cast<double>(c.substitutions + c.deletions);
  return {(n - sd) / n, (n - sd - static_cast<double>(c.insertions)) / n};
}

Rates cr_ar(std::span<const Symbol> reference, std::span<const Symbol> hypothesis) {
  if (reference.empty()) throw Error(ErrorKind::kEmptyReference, "reference has no symbols");
  return rates_from_counts(align(reference, hypothesis));
}

std::vector<Symbol> utf8_symbols(std::string_view text) {
  constexpr Symbol kReplacement = 0xFFFD;
  std::vector<Symbol> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto b0 = static_cast<unsigned char>(text[i]);
    int extra = 0;
    Symbol cp = 0;
    if (b0 < 0x80) {
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      extra = 1;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      extra = 2;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      extra = 3;
      cp = b0 & 0x07;
    } else {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    if (i + static_cast<std::size_t>(extra) >= text.size()) {
      out.push_back(kReplacement);
      break;
    }
    bool ok = true;
    for (int k = 1; k <= extra; ++k) {
      const auto b = static_cast<unsigned char>(text[i + static_cast<std::size_t>(k)]);
      if ((b & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (b & 0x3F);
    }
    if (!ok) {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += static_cast<std::size_t>(extra) + 1;
  }
  return out;
}

std::string utf8_encode(std::span<const Symbol> symbols) {
  std::string out;
  for (const Symbol s : symbols) {
    const auto cp = static_cast<std::uint32_t>(s);
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }
  return out;
}

std::vector<Symbol> normalize_symbols(std::span<const Symbol> symbols) {
  std::vector<Symbol> out(symbols.begin(), symbols.end());
  for (auto& s : out) {
    if (s >= 0xFF01 && s <= 0xFF5E) {
      s = s - 0xFF01 + 0x21;
    } else if (s == 0x3000) {
      s = 0x20;
    }
  }
  return out;
}

LabelSeq encode_labels(std::string_view text, const ClassMap& classes) {
  LabelSeq out;
  for (const Symbol cp : utf8_symbols(text)) {
    const Symbol one[] = {cp};
    const auto key = utf8_encode(one);
    const auto it = classes.find(key);
    if (it == classes.end()) throw Error(ErrorKind::kInvalidInput, "symbol '" + key + "' missing from class map");
    if (it->second <= kBlank) throw Error(ErrorKind::kInvalidInput, "class map assigns the blank index");
    out.push_back(it->second);
  }
  return out;
}

}  // namespace textkernel::metrics
