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

// Multi-label evaluation metrics.
//
// Zero-division convention: precision, recall and F1 are 0 when their
// denominator is 0. Macro-F1 averages over every label unless skip_empty is
// set, in which case labels with TP = FP = FN = 0 are left out.

#ifndef SCADS_METRICS_HPP
#define SCADS_METRICS_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "scads/types.hpp"

namespace scads {

struct LabelCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  friend bool operator==(const LabelCounts&, const LabelCounts&) = default;
};

// One evaluated sample: truth and prediction over the same label space.
struct Prediction {
  BinaryVector truth;
  BinaryVector predicted;
};

struct F1Result {
  double value = 0.0;
  bool degenerate = false;  // P + R == 0
};

double hamming(std::span<const std::uint8_t> y, std::span<const std::uint8_t> yhat);
double jaccard(std::span<const std::uint8_t> y, std::span<const std::uint8_t> yhat);

std::vector<LabelCounts> label_counts(std::span<const Prediction> rounds);

F1Result f1_from_counts(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn);
F1Result micro_f1(std::span<const Prediction> rounds);
double macro_f1(std::span<const Prediction> rounds, bool skip_empty = false);

struct MetricsSummary {
  double mean_hamming = 0.0;
  double micro_f1 = 0.0;
  double macro_f1 = 0.0;
  double mean_jaccard = 0.0;
  bool micro_degenerate = false;
  std::vector<LabelCounts> per_label;
  std::uint64_t n_rounds = 0;
};

// Throws EmptyDataset when `rounds` is empty.
MetricsSummary summarize(std::span<const Prediction> rounds, bool skip_empty = false);

}  // namespace scads

#endif  // SCADS_METRICS_HPP
