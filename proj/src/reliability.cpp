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

#include "scads/reliability.hpp"

#include <algorithm>
#include <string>

namespace scads {

ReliabilityEstimate pooled_stats(const NeighborSet& neighbors, std::size_t expert,
                                 std::size_t label) {
  ReliabilityEstimate est;
  for (const auto& n : neighbors.entries) {
    const RoundRecord& rec = *n.record;
    if (expert >= rec.reports.size() || label >= rec.reports[expert].size()) {
      throw Error(ErrorCode::kMissingExpertReport,
                  "round " + std::to_string(rec.round_id) + " has no report from expert " +
                      std::to_string(expert));
    }
    const bool r = rec.reports[expert][label] != 0;
    const bool y = (*rec.truth)[label] != 0;
    double& cell = y ? (r ? est.alpha_pos : est.beta_pos)
                     : (r ? est.alpha_neg : est.beta_neg);
    cell += n.weight;
  }
  return est;
}

double contextual_prior(const NeighborSet& neighbors, std::size_t label,
                        double epsilon) {
  double hits = 0.0;
  double mass = 0.0;
  for (const auto& n : neighbors.entries) {
    mass += n.weight;
    if ((*n.record->truth)[label] != 0) hits += n.weight;
  }
  const double p = (1.0 + hits) / (2.0 + mass);
  return std::clamp(p, epsilon, 1.0 - epsilon);
}

double contextual_prior(const ContextVector& x, std::size_t label,
                        const ContextBank& bank, std::size_t k_prior,
                        double exponent, double epsilon) {
  return contextual_prior(bank.query_topk(x, k_prior, exponent), label, epsilon);
}

GlobalCounts::GlobalCounts(std::size_t n_experts, std::size_t n_labels)
    : n_experts_(n_experts),
      n_labels_(n_labels),
      cells_(n_experts * n_labels),
      positives_(n_labels, 0) {}

void GlobalCounts::add(const RoundRecord& record) {
  if (!record.labelled()) {
    throw Error(ErrorCode::kUnlabelledRecord, "global counts need labelled rounds");
  }
  const BinaryVector& y = *record.truth;
  for (std::size_t k = 0; k < n_labels_; ++k) positives_[k] += y[k];
  for (std::size_t i = 0; i < n_experts_; ++i) {
    for (std::size_t k = 0; k < n_labels_; ++k) {
      Cell& c = cells_[i * n_labels_ + k];
      const bool r = record.reports[i][k] != 0;
      if (y[k]) {
        ++(r ? c.r1y1 : c.r0y1);
      } else {
        ++(r ? c.r1y0 : c.r0y0);
      }
    }
  }
  ++rounds_;
}

ReliabilityEstimate GlobalCounts::estimate(std::size_t expert, std::size_t label) const {
  const Cell& c = cells_.at(expert * n_labels_ + label);
  ReliabilityEstimate est;
  est.alpha_pos += static_cast<double>(c.r1y1);
  est.beta_pos += static_cast<double>(c.r0y1);
  est.alpha_neg += static_cast<double>(c.r1y0);
  est.beta_neg += static_cast<double>(c.r0y0);
  return est;
}

double GlobalCounts::base_rate(std::size_t label, double epsilon) const {
  const double p = (1.0 + static_cast<double>(positives_.at(label))) /
                   (2.0 + static_cast<double>(rounds_));
  return std::clamp(p, epsilon, 1.0 - epsilon);
}

}  // namespace scads
