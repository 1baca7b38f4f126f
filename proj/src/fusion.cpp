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

#include "scads/fusion.hpp"

#include <algorithm>
#include <cmath>

#include "scads/metrics.hpp"

namespace scads {

double clip_probability(double p, double epsilon) {
  return std::clamp(p, epsilon, 1.0 - epsilon);
}

double logit(double p, double epsilon) {
  const double c = clip_probability(p, epsilon);
  return std::log(c) - std::log1p(-c);
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

std::vector<std::vector<double>> guarded_llrs(const RoundSignals& s, Coalition c) {
  const std::size_t n = s.n_experts();
  const std::size_t K = s.n_labels();
  std::vector<std::vector<double>> out(n, std::vector<double>(K, 0.0));
  std::vector<std::uint8_t> column(n);
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t j = 0; j < n; ++j) column[j] = s.reports[j][k];
    for (std::size_t i = 0; i < n; ++i) {
      if (!c.contains(i)) continue;
      out[i][k] = guardrail(s.llr[i][k], i, k, column, s.rho, c);
    }
  }
  return out;
}

PosteriorVector coalition_posterior(Coalition c, const RoundSignals& s,
                                    std::span<const double> weights, double epsilon) {
  const std::size_t K = s.n_labels();
  if (c.empty()) return s.priors;

  const auto guarded = guarded_llrs(s, c);
  PosteriorVector q(K);
  for (std::size_t k = 0; k < K; ++k) {
    double evidence = 0.0;
    for (std::size_t i = 0; i < s.n_experts(); ++i) {
      if (c.contains(i)) evidence += weights[i] * guarded[i][k];
    }
    if (evidence == 0.0) {
      q[k] = s.priors[k];
    } else {
      q[k] = clip_probability(sigmoid(logit(s.priors[k], epsilon) + evidence), epsilon);
    }
  }
  return q;
}

PosteriorVector full_posterior(const RoundSignals& s, std::span<const double> weights,
                               double epsilon) {
  const std::size_t n = s.n_experts();
  const std::size_t K = s.n_labels();
  const auto guarded = guarded_llrs(s, Coalition::full(n));
  PosteriorVector q(K);
  for (std::size_t k = 0; k < K; ++k) {
    double evidence = 0.0;
    for (std::size_t i = 0; i < n; ++i) evidence += weights[i] * guarded[i][k];
    const double pi = s.priors[k];
    if (evidence == 0.0) {
      q[k] = pi;
      continue;
    }
    // pi e^S / ((1 - pi) + pi e^S), with both terms kept in log space.
    const double log_num = std::log(pi) + evidence;
    const double log_other = std::log1p(-pi);
    const double hi = std::max(log_num, log_other);
    const double log_den = hi + std::log(std::exp(log_num - hi) + std::exp(log_other - hi));
    q[k] = clip_probability(std::exp(log_num - log_den), epsilon);
  }
  return q;
}

BinaryVector decide(std::span<const double> q, double threshold) {
  BinaryVector out(q.size(), 0);
  for (std::size_t k = 0; k < q.size(); ++k) out[k] = q[k] >= threshold;
  return out;
}

double tune_threshold(std::span<const PosteriorVector> posteriors,
                      std::span<const BinaryVector> truths) {
  if (posteriors.empty() || posteriors.size() != truths.size()) {
    throw Error(ErrorCode::kEmptySplit,
                "threshold tuning needs at least one labelled round");
  }
  double best_tau = 0.01;
  double best_score = -1.0;
  for (int step = 1; step <= 99; ++step) {
    const double tau = step / 100.0;
    double total = 0.0;
    for (std::size_t t = 0; t < posteriors.size(); ++t) {
      total += jaccard(truths[t], decide(posteriors[t], tau));
    }
    const double score = total / static_cast<double>(posteriors.size());
    if (score > best_score) {
      best_score = score;
      best_tau = tau;
    }
  }
  return best_tau;
}

}  // namespace scads
