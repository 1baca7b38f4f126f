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

// Labelled-round store with exact cosine-kernel top-K retrieval.
//
// Records are immutable once inserted and shared by pointer, so copies of a
// bank (and of the public state that owns it) are cheap snapshots.

#ifndef SCADS_CONTEXT_BANK_HPP
#define SCADS_CONTEXT_BANK_HPP

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <span>
#include <unordered_set>
#include <vector>

#include "scads/types.hpp"

namespace scads {

// Unit-norm embedding of one round.
class ContextVector {
 public:
  ContextVector() = default;

  // Throws ZeroVector when the norm is <= 1e-12.
  static ContextVector normalize(std::span<const double> raw);

  std::span<const double> values() const { return values_; }
  std::size_t dimension() const { return values_.size(); }

 private:
  std::vector<double> values_;
};

// max(0, cos(x, y))^exponent, clamped to [0, 1]. Exactly symmetric.
double kernel(const ContextVector& x, const ContextVector& y, double exponent);

struct RoundRecord {
  std::int64_t round_id = 0;
  ContextVector context;
  // reports[i][k] = 1 iff expert i reported label k.
  std::vector<BinaryVector> reports;
  std::optional<BinaryVector> truth;

  bool labelled() const { return truth.has_value(); }
};

using RecordPtr = std::shared_ptr<const RoundRecord>;

struct Neighbor {
  RecordPtr record;
  double weight = 0.0;
};

// Descending by weight, ties by ascending round_id. Weights are raw kernel
// values and are never re-normalized.
struct NeighborSet {
  std::vector<Neighbor> entries;

  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
  // First min(k, size()) entries; a top-k set is a prefix of any top-k' set
  // with k' >= k.
  NeighborSet prefix(std::size_t k) const;
};

class ContextBank {
 public:
  // dimension 0 means "fixed by the first insert". bank_max 0 means unbounded.
  explicit ContextBank(std::size_t dimension = 0, std::size_t bank_max = 0)
      : dimension_(dimension), bank_max_(bank_max) {}

  // Normalizes and checks the dimension against the bank's.
  ContextVector normalize(std::span<const double> raw) const;

  void insert(RecordPtr record);
  void insert(RoundRecord record) {
    insert(std::make_shared<const RoundRecord>(std::move(record)));
  }

  NeighborSet query_topk(const ContextVector& x, std::size_t k,
                         double exponent) const;

  std::size_t size() const { return records_.size(); }
  std::size_t dimension() const { return dimension_; }
  const std::deque<RecordPtr>& records() const { return records_; }

 private:
  void check_dimension(std::size_t d) const;

  std::size_t dimension_;
  std::size_t bank_max_;
  std::deque<RecordPtr> records_;
  std::unordered_set<std::int64_t> ids_;
};

}  // namespace scads

#endif  // SCADS_CONTEXT_BANK_HPP
