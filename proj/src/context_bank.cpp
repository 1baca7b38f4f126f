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

#include "scads/context_bank.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace scads {

ContextVector ContextVector::normalize(std::span<const double> raw) {
  double sq = 0.0;
  for (double v : raw) sq += v * v;
  const double norm = std::sqrt(sq);
  if (!(norm > 1e-12)) {
    throw Error(ErrorCode::kZeroVector, "context vector has zero norm");
  }
  ContextVector out;
  // already unit up to rounding: keep as is so re-normalizing is a no-op
  if (std::abs(sq - 1.0) <= 8 * std::numeric_limits<double>::epsilon()) {
    out.values_.assign(raw.begin(), raw.end());
    return out;
  }
  out.values_.reserve(raw.size());
  for (double v : raw) out.values_.push_back(v / norm);
  return out;
}

double kernel(const ContextVector& x, const ContextVector& y, double exponent) {
  if (x.dimension() != y.dimension()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "kernel: dimensions " + std::to_string(x.dimension()) + " and " +
                    std::to_string(y.dimension()));
  }
  const auto a = x.values();
  const auto b = y.values();
  double dot = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
  const double c = std::clamp(dot, 0.0, 1.0);
  return std::pow(c, exponent);
}

NeighborSet NeighborSet::prefix(std::size_t k) const {
  NeighborSet out;
  const auto n = std::min(k, entries.size());
  out.entries.assign(entries.begin(), entries.begin() + static_cast<std::ptrdiff_t>(n));
  return out;
}

void ContextBank::check_dimension(std::size_t d) const {
  if (dimension_ != 0 && d != dimension_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "context dimension " + std::to_string(d) + " != bank dimension " +
                    std::to_string(dimension_));
  }
}

ContextVector ContextBank::normalize(std::span<const double> raw) const {
  check_dimension(raw.size());
  return ContextVector::normalize(raw);
}

void ContextBank::insert(RecordPtr record) {
  if (!record->labelled()) {
    throw Error(ErrorCode::kUnlabelledRecord,
                "round " + std::to_string(record->round_id) + " has no truth");
  }
  check_dimension(record->context.dimension());
  if (ids_.count(record->round_id) != 0) {
    throw Error(ErrorCode::kDuplicateRoundId,
                "round " + std::to_string(record->round_id) + " already banked");
  }
  if (dimension_ == 0) dimension_ = record->context.dimension();
  ids_.insert(record->round_id);
  records_.push_back(std::move(record));
  if (bank_max_ != 0 && records_.size() > bank_max_) {
    ids_.erase(records_.front()->round_id);
    records_.pop_front();
  }
}

NeighborSet ContextBank::query_topk(const ContextVector& x, std::size_t k,
                                    double exponent) const {
  NeighborSet out;
  if (records_.empty() || k == 0) return out;
  check_dimension(x.dimension());

  out.entries.reserve(records_.size());
  for (const auto& r : records_) {
    out.entries.push_back({r, kernel(x, r->context, exponent)});
  }
  const auto before = [](const Neighbor& a, const Neighbor& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    return a.record->round_id < b.record->round_id;
  };
  const auto n = std::min(k, out.entries.size());
  std::partial_sort(out.entries.begin(),
                    out.entries.begin() + static_cast<std::ptrdiff_t>(n),
                    out.entries.end(), before);
  out.entries.resize(n);
  return out;
}

}  // namespace scads
