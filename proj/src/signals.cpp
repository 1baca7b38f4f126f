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

#include "scads/signals.hpp"

#include <algorithm>
#include <cmath>

namespace scads {

double llr(const ReliabilityEstimate& estimate, bool report, double epsilon) {
  const double tp = std::clamp(estimate.theta_pos(), epsilon, 1.0 - epsilon);
  const double fp = std::clamp(estimate.theta_neg(), epsilon, 1.0 - epsilon);
  if (report) return std::log(tp / fp);
  return std::log((1.0 - tp) / (1.0 - fp));
}

void LabelledWindow::push(RecordPtr record) {
  if (!record->labelled()) {
    throw Error(ErrorCode::kUnlabelledRecord, "window only holds labelled rounds");
  }
  if (capacity_ == 0) return;
  rounds_.push_back(std::move(record));
  while (rounds_.size() > capacity_) rounds_.pop_front();
}

double smoothed_phi(double n11, double n10, double n01, double n00) {
  n11 += 1.0;
  n10 += 1.0;
  n01 += 1.0;
  n00 += 1.0;
  const double num = n11 * n00 - n10 * n01;
  const double den = std::sqrt((n11 + n10) * (n01 + n00) * (n11 + n01) * (n10 + n00));
  return num / den;
}

CorrelationMatrix update_correlations(const LabelledWindow& window,
                                      std::size_t n_experts, std::size_t n_labels,
                                      double rho_max) {
  CorrelationMatrix out(n_experts, n_labels);
  if (n_experts < 2) return out;

  // Error indicators, round-major then expert-major.
  const std::size_t rounds = window.size();
  std::vector<std::uint8_t> err(rounds * n_experts);

  for (std::size_t k = 0; k < n_labels; ++k) {
    for (std::size_t t = 0; t < rounds; ++t) {
      const RoundRecord& rec = *window.rounds()[t];
      const std::uint8_t y = (*rec.truth)[k];
      for (std::size_t i = 0; i < n_experts; ++i) {
        err[t * n_experts + i] = rec.reports[i][k] != y;
      }
    }
    for (std::size_t i = 0; i < n_experts; ++i) {
      for (std::size_t j = i + 1; j < n_experts; ++j) {
        std::uint64_t c11 = 0, c10 = 0, c01 = 0, c00 = 0;
        for (std::size_t t = 0; t < rounds; ++t) {
          const bool ei = err[t * n_experts + i];
          const bool ej = err[t * n_experts + j];
          if (ei && ej) ++c11;
          else if (ei) ++c10;
          else if (ej) ++c01;
          else ++c00;
        }
        const double phi = smoothed_phi(static_cast<double>(c11), static_cast<double>(c10),
                                        static_cast<double>(c01), static_cast<double>(c00));
        out.set(i, j, k, std::clamp(phi, 0.0, rho_max));
      }
    }
  }
  return out;
}

double guardrail(double lambda, std::size_t expert, std::size_t label,
                 std::span<const std::uint8_t> reports, const CorrelationMatrix& rho,
                 Coalition coalition) {
  double denom = 1.0;
  for (std::size_t j = 0; j < reports.size(); ++j) {
    if (j == expert || !coalition.contains(j)) continue;
    if (reports[j] == reports[expert]) denom += rho.at(expert, j, label);
  }
  return lambda / denom;
}

}  // namespace scads
