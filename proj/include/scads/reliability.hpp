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

// Context-conditioned expert reliabilities.
//
// For expert i and label k, the true-positive rate theta+ = P(r=1 | y=1, x)
// and false-positive rate theta- = P(r=1 | y=0, x) are posterior means of
// Beta(1,1) priors updated with kernel-weighted counts from the neighbors of
// x. The context-agnostic variant pools every labelled round with unit
// weight, which reduces to integer counts kept in GlobalCounts.

#ifndef SCADS_RELIABILITY_HPP
#define SCADS_RELIABILITY_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "scads/context_bank.hpp"

namespace scads {

inline constexpr double kBetaPrior = 1.0;

struct ReliabilityEstimate {
  double alpha_pos = kBetaPrior;
  double beta_pos = kBetaPrior;
  double alpha_neg = kBetaPrior;
  double beta_neg = kBetaPrior;

  double theta_pos() const { return alpha_pos / (alpha_pos + beta_pos); }
  double theta_neg() const { return alpha_neg / (alpha_neg + beta_neg); }
};

// Throws MissingExpertReport if a neighbor lacks a report for `expert`.
ReliabilityEstimate pooled_stats(const NeighborSet& neighbors, std::size_t expert,
                                 std::size_t label);

// Kernel-weighted smoothed base rate (1 + sum k*y) / (2 + sum k), clipped to
// [epsilon, 1 - epsilon].
double contextual_prior(const NeighborSet& neighbors, std::size_t label,
                        double epsilon);
double contextual_prior(const ContextVector& x, std::size_t label,
                        const ContextBank& bank, std::size_t k_prior,
                        double exponent, double epsilon);

// Unit-weight pooling over the whole labelled history.
class GlobalCounts {
 public:
  GlobalCounts() = default;
  GlobalCounts(std::size_t n_experts, std::size_t n_labels);

  void add(const RoundRecord& record);

  ReliabilityEstimate estimate(std::size_t expert, std::size_t label) const;
  double base_rate(std::size_t label, double epsilon) const;
  std::uint64_t rounds() const { return rounds_; }

 private:
  struct Cell {
    std::uint64_t r1y1 = 0, r0y1 = 0, r1y0 = 0, r0y0 = 0;
  };
  std::size_t n_experts_ = 0;
  std::size_t n_labels_ = 0;
  std::vector<Cell> cells_;  // expert-major
  std::vector<std::uint64_t> positives_;
  std::uint64_t rounds_ = 0;
};

}  // namespace scads

#endif  // SCADS_RELIABILITY_HPP
