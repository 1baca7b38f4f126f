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

// Synthetic experts with known reliabilities.
//
// Contexts cluster around well-separated random unit centroids, one per
// regime. Truth is drawn from per-regime label base rates and each expert
// reports label k with probability TPR (y = 1) or FPR (y = 0) of the round's
// regime. An expert with a correlation partner copies the partner's error
// event with probability correlation_strength.
//
// Every round draws from its own generator seeded from (seed, round index),
// so the stream is a pure function of the config.

#ifndef SCADS_SIMULATOR_HPP
#define SCADS_SIMULATOR_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scads/context_bank.hpp"

namespace scads {

struct SyntheticExpertProfile {
  std::string id;
  std::vector<std::vector<double>> tpr;  // [regime][label]
  std::vector<std::vector<double>> fpr;  // [regime][label]
  std::optional<std::size_t> correlation_partner;
  double correlation_strength = 0.0;
};

struct SimConfig {
  std::size_t n_experts = 3;
  std::size_t n_labels = 14;
  std::size_t n_rounds = 3000;
  std::size_t n_regimes = 4;
  std::size_t dimension = 16;
  std::vector<std::vector<double>> base_rates;  // [regime][label]; empty = 0.3
  double centroid_max_cosine = 0.3;
  double noise_scale = 0.1;
  double labelled_fraction = 1.0;
  std::uint64_t seed = 42;

  void validate() const;
  double base_rate(std::size_t regime, std::size_t label) const;
};

// High/medium/low quality experts for the default three: TPR 0.85/0.75/0.65,
// FPR 0.05/0.10/0.15, the same in every regime and label. Other expert counts
// interpolate linearly between the extremes.
std::vector<SyntheticExpertProfile> default_profiles(const SimConfig& sim);

struct SimDataset {
  std::vector<RoundRecord> rounds;
  std::vector<ContextVector> centroids;
  std::vector<std::size_t> regimes;  // regime of each round
};

// Round ids run 1..n_rounds. Throws ProfileCountMismatch, InvalidConfig.
SimDataset generate_dataset(const SimConfig& sim,
                            std::span<const SyntheticExpertProfile> profiles);

// Label k is included iff strictly more than half of the experts report it.
BinaryVector majority_vote(std::span<const BinaryVector> reports);

}  // namespace scads

#endif  // SCADS_SIMULATOR_HPP
