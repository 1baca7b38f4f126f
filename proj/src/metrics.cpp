/*
 * Copyright 2026 The scads Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "scads/metrics.hpp"

#include <string>

namespace scads {
namespace {

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) {
    throw Error(ErrorCode::kLengthMismatch,
                "label vectors of length " + std::to_string(a) + " and " + std::to_string(b));
  }
}

double ratio(std::uint64_t num, std::uint64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

double hamming(std::span<const std::uint8_t> y, std::span<const std::uint8_t> yhat) {
  check_lengths(y.size(), yhat.size());
  if (y.empty()) return 0.0;
  std::size_t diff = 0;
  for (std::size_t k = 0; k < y.size(); ++k) diff += (y[k] != 0) != (yhat[k] != 0);
  return static_cast<double>(diff) / static_cast<double>(y.size());
}

double jaccard(std::span<const std::uint8_t> y, std::span<const std::uint8_t> yhat) {
  check_lengths(y.size(), yhat.size());
  std::size_t inter = 0, uni = 0;
  for (std::size_t k = 0; k < y.size(); ++k) {
    const bool a = y[k] != 0, b = yhat[k] != 0;
    inter += a && b;
    uni += a || b;
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

std::vector<LabelCounts> label_counts(std::span<const Prediction> rounds) {
  std::vector<LabelCounts> counts;
  if (rounds.empty()) return counts;
  const std::size_t K = rounds.front().truth.size();
  counts.resize(K);
  for (const auto& r : rounds) {
    check_lengths(r.truth.size(), K);
    check_lengths(r.predicted.size(), K);
    for (std::size_t k = 0; k < K; ++k) {
      const bool y = r.truth[k] != 0, p = r.predicted[k] != 0;
      LabelCounts& c = counts[k];
      if (y && p) ++c.tp;
      else if (p) ++c.fp;
      else if (y) ++c.fn;
      else ++c.tn;
    }
  }
  return counts;
}

F1Result f1_from_counts(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn) {
  const double p = ratio(tp, tp + fp);
  const double r = ratio(tp, tp + fn);
  if (p + r == 0.0) return {0.0, true};
  return {2.0 * p * r / (p + r), false};
}

F1Result micro_f1(std::span<const Prediction> rounds) {
  std::uint64_t tp = 0, fp = 0, fn = 0;
  for (const auto& c : label_counts(rounds)) {
    tp += c.tp;
    fp += c.fp;
    fn += c.fn;
  }
  return f1_from_counts(tp, fp, fn);
}

double macro_f1(std::span<const Prediction> rounds, bool skip_empty) {
  const auto counts = label_counts(rounds);
  double total = 0.0;
  std::size_t used = 0;
  for (const auto& c : counts) {
    if (skip_empty && c.tp + c.fp + c.fn == 0) continue;
    total += f1_from_counts(c.tp, c.fp, c.fn).value;
    ++used;
  }
  return used == 0 ? 0.0 : total / static_cast<double>(used);
}

MetricsSummary summarize(std::span<const Prediction> rounds, bool skip_empty) {
  if (rounds.empty()) {
    throw Error(ErrorCode::kEmptyDataset, "no rounds to evaluate");
  }
  MetricsSummary s;
  double ham = 0.0, jac = 0.0;
  for (const auto& r : rounds) {
    ham += hamming(r.truth, r.predicted);
    jac += jaccard(r.truth, r.predicted);
  }
  const auto n = static_cast<double>(rounds.size());
  s.mean_hamming = ham / n;
  s.mean_jaccard = jac / n;
  const auto micro = micro_f1(rounds);
  s.micro_f1 = micro.value;
  s.micro_degenerate = micro.degenerate;
  s.macro_f1 = macro_f1(rounds, skip_empty);
  s.per_label = label_counts(rounds);
  s.n_rounds = rounds.size();
  return s;
}

}  // namespace scads
