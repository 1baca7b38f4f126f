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

// Team credit and reputation dynamics.
//
// A coalition's value is the log-score gain of its aggregated forecast over
// the prior alone, summed over labels. Each expert is credited with its exact
// Shapley value of that game, and the public reputation moves
// multiplicatively in exp(eta * credit).

#ifndef SCADS_CREDIT_HPP
#define SCADS_CREDIT_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "scads/fusion.hpp"

namespace scads {

// Simplex weights with strictly positive entries.
class ReputationVector {
 public:
  ReputationVector() = default;
  // Throws InvalidArgument unless entries are > 0 and sum to 1 within 1e-9.
  explicit ReputationVector(std::vector<double> w);
  static ReputationVector uniform(std::size_t n);

  std::span<const double> values() const { return w_; }
  double operator[](std::size_t i) const { return w_[i]; }
  std::size_t size() const { return w_.size(); }

  friend bool operator==(const ReputationVector&, const ReputationVector&) = default;

 private:
  std::vector<double> w_;
};

struct CreditReport {
  std::vector<double> phi;
  double v_full = 0.0;
  // Indexed by coalition bitmask.
  std::vector<double> coalition_values;
};

// y log q + (1 - y) log(1 - q) with q clipped to [eps, 1-eps].
double log_score(double q, bool y, double epsilon);

// sum_k [s(q^C(k)) - s(pi_k)]; exactly 0 for the empty coalition.
double team_value(Coalition c, const RoundSignals& s, std::span<const double> weights,
                  std::span<const std::uint8_t> truth, double epsilon);

// Exact Shapley values by enumerating all 2^n coalitions. Throws
// TooManyExperts above Coalition::kMaxExperts and InvalidArgument on a
// truth vector of the wrong length.
CreditReport shapley(const RoundSignals& s, std::span<const double> weights,
                     std::span<const std::uint8_t> truth, double epsilon);

// Solo credit: phi_i = v({i}). No coalition baselines.
CreditReport naive_credit(const RoundSignals& s, std::span<const double> weights,
                          std::span<const std::uint8_t> truth, double epsilon);

// Round-level forms: truth is the round's revealed label set, absent for an
// unlabelled round (UnlabelledRound).
double round_team_value(Coalition c, const RoundSignals& s, std::span<const double> weights,
                        const std::optional<BinaryVector>& truth, double epsilon);
CreditReport round_credit(const RoundSignals& s, std::span<const double> weights,
                          const std::optional<BinaryVector>& truth, double epsilon,
                          bool naive = false);

double stage_payoff(double phi, double w_i, double w_sum, double prize, double alpha);

// w'_i proportional to w_i exp(eta phi_i), evaluated with the largest exponent
// subtracted. When floor > 0 entries are raised to at least `floor` and the
// vector renormalized.
ReputationVector update_reputation(const ReputationVector& w, std::span<const double> phi,
                                   double eta, double floor = 1e-8);

double discounted_utility(std::span<const double> u, double delta);

}  // namespace scads

#endif  // SCADS_CREDIT_HPP
