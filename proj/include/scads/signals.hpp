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

// Report log-likelihood ratios, pairwise error correlations and the
// agreement guardrail that shrinks signals of experts whose errors co-occur.

#ifndef SCADS_SIGNALS_HPP
#define SCADS_SIGNALS_HPP

#include <cstddef>
#include <deque>
#include <span>
#include <vector>

#include "scads/context_bank.hpp"
#include "scads/reliability.hpp"
#include "scads/types.hpp"

namespace scads {

// log(theta+/theta-) for a positive report, log((1-theta+)/(1-theta-)) for a
// negative one. Rates are clipped to [epsilon, 1-epsilon] first.
double llr(const ReliabilityEstimate& estimate, bool report, double epsilon);

// Symmetric per-label matrix over experts, entries in [0, rho_max], zero
// diagonal.
class CorrelationMatrix {
 public:
  CorrelationMatrix() = default;
  CorrelationMatrix(std::size_t n_experts, std::size_t n_labels)
      : n_(n_experts), labels_(n_labels), rho_(n_experts * n_experts * n_labels, 0.0) {}

  double at(std::size_t i, std::size_t j, std::size_t label) const {
    return rho_[(label * n_ + i) * n_ + j];
  }
  void set(std::size_t i, std::size_t j, std::size_t label, double v) {
    rho_[(label * n_ + i) * n_ + j] = v;
    rho_[(label * n_ + j) * n_ + i] = v;
  }

  std::size_t n_experts() const { return n_; }
  std::size_t n_labels() const { return labels_; }

  friend bool operator==(const CorrelationMatrix&, const CorrelationMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t labels_ = 0;
  std::vector<double> rho_;
};

// The W most recently revealed labelled rounds.
class LabelledWindow {
 public:
  explicit LabelledWindow(std::size_t capacity = 200) : capacity_(capacity) {}

  void push(RecordPtr record);

  std::size_t size() const { return rounds_.size(); }
  std::size_t capacity() const { return capacity_; }
  const std::deque<RecordPtr>& rounds() const { return rounds_; }

 private:
  std::size_t capacity_;
  std::deque<RecordPtr> rounds_;
};

// Add-one smoothed phi coefficient of pairwise error indicators over the
// window, clipped to [0, rho_max].
CorrelationMatrix update_correlations(const LabelledWindow& window,
                                      std::size_t n_experts, std::size_t n_labels,
                                      double rho_max);

// Smoothed phi from the four cells of a 2x2 table of (e_i, e_j), before any
// clipping. Cells are raw counts; smoothing is applied here.
double smoothed_phi(double n11, double n10, double n01, double n00);

// lambda / (1 + sum_{j in coalition, j != expert} rho_ijk [r_jk == r_ik]).
// `reports` holds every expert's report for `label`.
double guardrail(double lambda, std::size_t expert, std::size_t label,
                 std::span<const std::uint8_t> reports, const CorrelationMatrix& rho,
                 Coalition coalition);

}  // namespace scads

#endif  // SCADS_SIGNALS_HPP
