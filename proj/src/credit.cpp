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

#include "scads/credit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace scads {

ReputationVector::ReputationVector(std::vector<double> w) : w_(std::move(w)) {
  if (w_.empty()) throw Error(ErrorCode::kInvalidArgument, "empty reputation vector");
  double sum = 0.0;
  for (double v : w_) {
    if (!(v > 0.0)) throw Error(ErrorCode::kInvalidArgument, "reputation entry <= 0");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidArgument, "reputation does not sum to 1");
  }
}

ReputationVector ReputationVector::uniform(std::size_t n) {
  return ReputationVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

double log_score(double q, bool y, double epsilon) {
  const double c = clip_probability(q, epsilon);
  return y ? std::log(c) : std::log1p(-c);
}

double team_value(Coalition c, const RoundSignals& s, std::span<const double> weights,
                  std::span<const std::uint8_t> truth, double epsilon) {
  if (truth.size() != s.n_labels()) {
    throw Error(ErrorCode::kInvalidArgument, "truth length does not match labels");
  }
  if (c.empty()) return 0.0;
  const auto q = coalition_posterior(c, s, weights, epsilon);
  double v = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) {
    const bool y = truth[k] != 0;
    v += log_score(q[k], y, epsilon) - log_score(s.priors[k], y, epsilon);
  }
  return v;
}

CreditReport shapley(const RoundSignals& s, std::span<const double> weights,
                     std::span<const std::uint8_t> truth, double epsilon) {
  const std::size_t n = s.n_experts();
  if (n > Coalition::kMaxExperts) {
    throw Error(ErrorCode::kTooManyExperts,
                std::to_string(n) + " experts exceeds the exact-enumeration limit");
  }
  CreditReport out;
  const std::uint32_t count = 1u << n;
  out.coalition_values.resize(count);
  for (std::uint32_t bits = 0; bits < count; ++bits) {
    out.coalition_values[bits] = team_value(Coalition(bits), s, weights, truth, epsilon);
  }

  // |C|! (n - |C| - 1)! / n! for each coalition size.
  std::vector<double> size_weight(n, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    double w = 1.0;
    for (std::size_t m = 1; m <= c; ++m) w *= static_cast<double>(m);
    for (std::size_t m = 1; m <= n - c - 1; ++m) w *= static_cast<double>(m);
    for (std::size_t m = 1; m <= n; ++m) w /= static_cast<double>(m);
    size_weight[c] = w;
  }

  out.phi.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::uint32_t bits = 0; bits < count; ++bits) {
      const Coalition c(bits);
      if (c.contains(i)) continue;
      const double marginal =
          out.coalition_values[c.with(i).bits()] - out.coalition_values[bits];
      out.phi[i] += size_weight[static_cast<std::size_t>(c.size())] * marginal;
    }
  }
  out.v_full = out.coalition_values[Coalition::full(n).bits()];
  const double total = std::accumulate(out.phi.begin(), out.phi.end(), 0.0);
  if (std::abs(total - out.v_full) > 1e-9 * std::max(1.0, std::abs(out.v_full))) {
    throw Error(ErrorCode::kInternal, "Shapley values do not sum to the team value");
  }
  return out;
}

CreditReport naive_credit(const RoundSignals& s, std::span<const double> weights,
                          std::span<const std::uint8_t> truth, double epsilon) {
  const std::size_t n = s.n_experts();
  CreditReport out;
  out.phi.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.phi[i] = team_value(Coalition::single(i), s, weights, truth, epsilon);
  }
  out.v_full = team_value(Coalition::full(n), s, weights, truth, epsilon);
  return out;
}

namespace {
const BinaryVector& require_truth(const std::optional<BinaryVector>& truth) {
  if (!truth) throw Error(ErrorCode::kUnlabelledRound, "credit needs a labelled round");
  return *truth;
}
}  // namespace

double round_team_value(Coalition c, const RoundSignals& s, std::span<const double> weights,
                        const std::optional<BinaryVector>& truth, double epsilon) {
  return team_value(c, s, weights, require_truth(truth), epsilon);
}

CreditReport round_credit(const RoundSignals& s, std::span<const double> weights,
                          const std::optional<BinaryVector>& truth, double epsilon,
                          bool naive) {
  const BinaryVector& y = require_truth(truth);
  return naive ? naive_credit(s, weights, y, epsilon) : shapley(s, weights, y, epsilon);
}

double stage_payoff(double phi, double w_i, double w_sum, double prize, double alpha) {
  if (alpha == 0.0 || prize == 0.0) return phi;
  return phi + alpha * prize * w_i / w_sum;
}

ReputationVector update_reputation(const ReputationVector& w, std::span<const double> phi,
                                   double eta, double floor) {
  const std::size_t n = w.size();
  if (phi.size() != n) {
    throw Error(ErrorCode::kInvalidArgument, "credit and reputation sizes differ");
  }
  std::vector<double> log_w(n);
  double hi = -INFINITY;
  for (std::size_t i = 0; i < n; ++i) {
    log_w[i] = std::log(w[i]) + eta * phi[i];
    hi = std::max(hi, log_w[i]);
  }
  std::vector<double> next(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    next[i] = std::exp(log_w[i] - hi);
    sum += next[i];
  }
  for (double& v : next) v /= sum;

  if (floor > 0.0 && *std::min_element(next.begin(), next.end()) < floor) {
    for (double& v : next) v = std::max(v, floor);
    const double total = std::accumulate(next.begin(), next.end(), 0.0);
    for (double& v : next) v /= total;
  }
  return ReputationVector(std::move(next));
}

double discounted_utility(std::span<const double> u, double delta) {
  double total = 0.0;
  double factor = 1.0;
  for (double v : u) {
    total += factor * v;
    factor *= delta;
  }
  return total;
}

}  // namespace scads
