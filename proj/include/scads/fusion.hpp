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

#ifndef SCADS_FUSION_HPP
#define SCADS_FUSION_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "scads/signals.hpp"
#include "scads/types.hpp"

namespace scads {

inline constexpr double kDefaultEpsilon = 1e-6;

// Everything the aggregator needs for one round, before reputation weights.
struct RoundSignals {
  std::vector<double> priors;               // pi_k, already in [eps, 1-eps]
  std::vector<std::vector<double>> llr;     // raw lambda_{i,k}
  std::vector<BinaryVector> reports;        // r_{i,k}
  CorrelationMatrix rho;

  std::size_t n_experts() const { return llr.size(); }
  std::size_t n_labels() const { return priors.size(); }
};

using PosteriorVector = std::vector<double>;

double clip_probability(double p, double epsilon);
double logit(double p, double epsilon);
double sigmoid(double z);

// Coalition-restricted guardrailed signal for every (expert in C, label);
// entries of experts outside C are 0.
std::vector<std::vector<double>> guarded_llrs(const RoundSignals& s, Coalition c);

// q(k) = sigmoid(logit pi_k + sum_{i in C} w_i * guarded lambda_{i,k}),
// clipped to [eps, 1-eps]. Returns pi exactly when the evidence sum is 0.
PosteriorVector coalition_posterior(Coalition c, const RoundSignals& s,
                                    std::span<const double> weights, double epsilon);

// The full-coalition posterior written as a ratio of the prior-weighted
// evidence, evaluated in log space. Agrees with coalition_posterior(full).
PosteriorVector full_posterior(const RoundSignals& s, std::span<const double> weights,
                               double epsilon);

// Label k is included iff q(k) >= threshold.
BinaryVector decide(std::span<const double> q, double threshold);

// Grid search over 0.01..0.99 for the threshold with the highest mean Jaccard;
// smallest threshold wins ties. Throws EmptySplit on empty input.
double tune_threshold(std::span<const PosteriorVector> posteriors,
                      std::span<const BinaryVector> truths);

}  // namespace scads

#endif  // SCADS_FUSION_HPP
