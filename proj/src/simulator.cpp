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

#include "scads/simulator.hpp"

#include <cmath>
#include <random>
#include <string>

namespace scads {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

void invalid(const std::string& what) { throw Error(ErrorCode::kInvalidConfig, what); }

bool closed_unit(double p) { return p >= 0.0 && p <= 1.0; }

void check_table(const std::vector<std::vector<double>>& table, const SimConfig& sim,
                 const std::string& name) {
  if (table.size() != sim.n_regimes) invalid(name + ": wrong regime count");
  for (const auto& row : table) {
    if (row.size() != sim.n_labels) invalid(name + ": wrong label count");
    for (double p : row) {
      if (!closed_unit(p)) invalid(name + ": out of range");
    }
  }
}

std::vector<ContextVector> draw_centroids(const SimConfig& sim) {
  std::mt19937_64 rng(splitmix64(sim.seed ^ 0xc0ffee));
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<ContextVector> out;
  std::vector<double> raw(sim.dimension);
  constexpr int kMaxAttempts = 100000;
  for (int attempt = 0; out.size() < sim.n_regimes; ++attempt) {
    if (attempt > kMaxAttempts) {
      invalid("cannot place regime centroids below the requested cosine");
    }
    for (double& v : raw) v = gauss(rng);
    auto c = ContextVector::normalize(raw);
    bool ok = true;
    for (const auto& other : out) {
      double dot = 0.0;
      for (std::size_t i = 0; i < sim.dimension; ++i) dot += c.values()[i] * other.values()[i];
      if (dot >= sim.centroid_max_cosine) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

void SimConfig::validate() const {
  if (n_experts == 0 || n_labels == 0 || n_rounds == 0 || n_regimes == 0 || dimension == 0) {
    invalid("n_experts, n_labels, n_rounds, n_regimes and dimension must be positive");
  }
  if (!base_rates.empty()) check_table(base_rates, *this, "base_rates");
  if (!(centroid_max_cosine > -1.0 && centroid_max_cosine <= 1.0)) {
    invalid("centroid_max_cosine must lie in (-1, 1]");
  }
  if (!(noise_scale >= 0.0)) invalid("noise_scale must be >= 0");
  if (!(labelled_fraction > 0.0 && labelled_fraction <= 1.0)) {
    invalid("labelled_fraction must lie in (0, 1]");
  }
}

double SimConfig::base_rate(std::size_t regime, std::size_t label) const {
  return base_rates.empty() ? 0.3 : base_rates[regime][label];
}

std::vector<SyntheticExpertProfile> default_profiles(const SimConfig& sim) {
  std::vector<SyntheticExpertProfile> out;
  for (std::size_t i = 0; i < sim.n_experts; ++i) {
    const double f = sim.n_experts == 1 ? 0.0
                                        : static_cast<double>(i) /
                                              static_cast<double>(sim.n_experts - 1);
    SyntheticExpertProfile p;
    p.id = "model_" + std::to_string(i + 1);
    p.tpr.assign(sim.n_regimes, std::vector<double>(sim.n_labels, std::lerp(0.85, 0.65, f)));
    p.fpr.assign(sim.n_regimes, std::vector<double>(sim.n_labels, std::lerp(0.05, 0.15, f)));
    out.push_back(std::move(p));
  }
  return out;
}

SimDataset generate_dataset(const SimConfig& sim,
                            std::span<const SyntheticExpertProfile> profiles) {
  sim.validate();
  if (profiles.size() != sim.n_experts) {
    throw Error(ErrorCode::kProfileCountMismatch,
                std::to_string(profiles.size()) + " profiles for " +
                    std::to_string(sim.n_experts) + " experts");
  }
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    const auto& p = profiles[i];
    check_table(p.tpr, sim, p.id + ".tpr");
    check_table(p.fpr, sim, p.id + ".fpr");
    if (p.correlation_partner) {
      // Partners are generated first so their error events exist to copy.
      if (*p.correlation_partner >= i) invalid(p.id + ": partner must precede the expert");
      if (!closed_unit(p.correlation_strength)) invalid(p.id + ": correlation_strength");
    }
  }

  SimDataset out;
  out.centroids = draw_centroids(sim);
  out.rounds.reserve(sim.n_rounds);
  out.regimes.reserve(sim.n_rounds);

  std::normal_distribution<double> gauss(0.0, sim.noise_scale > 0.0 ? sim.noise_scale : 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick_regime(0, sim.n_regimes - 1);
  std::vector<double> raw(sim.dimension);
  std::vector<BinaryVector> errors(sim.n_experts, BinaryVector(sim.n_labels));

  for (std::size_t t = 0; t < sim.n_rounds; ++t) {
    std::mt19937_64 rng(splitmix64(sim.seed ^ splitmix64(t + 1)));
    gauss.reset();  // no cached variate may leak across rounds
    const std::size_t g = pick_regime(rng);
    const auto centroid = out.centroids[g].values();
    for (std::size_t d = 0; d < sim.dimension; ++d) {
      raw[d] = centroid[d] + (sim.noise_scale > 0.0 ? gauss(rng) : 0.0);
    }

    RoundRecord rec;
    rec.round_id = static_cast<std::int64_t>(t + 1);
    rec.context = ContextVector::normalize(raw);

    BinaryVector truth(sim.n_labels);
    for (std::size_t k = 0; k < sim.n_labels; ++k) truth[k] = unit(rng) < sim.base_rate(g, k);

    rec.reports.assign(sim.n_experts, BinaryVector(sim.n_labels));
    for (std::size_t i = 0; i < sim.n_experts; ++i) {
      const auto& p = profiles[i];
      for (std::size_t k = 0; k < sim.n_labels; ++k) {
        const double copy_draw = unit(rng);
        const double report_draw = unit(rng);
        std::uint8_t r;
        if (p.correlation_partner && copy_draw < p.correlation_strength) {
          r = truth[k] ^ errors[*p.correlation_partner][k];
        } else {
          const double rate = truth[k] ? p.tpr[g][k] : p.fpr[g][k];
          r = report_draw < rate;
        }
        rec.reports[i][k] = r;
        errors[i][k] = r != truth[k];
      }
    }

    if (sim.labelled_fraction >= 1.0 || unit(rng) < sim.labelled_fraction) {
      rec.truth = std::move(truth);
    }
    out.rounds.push_back(std::move(rec));
    out.regimes.push_back(g);
  }
  return out;
}

BinaryVector majority_vote(std::span<const BinaryVector> reports) {
  if (reports.empty()) return {};
  const std::size_t K = reports.front().size();
  BinaryVector out(K, 0);
  for (std::size_t k = 0; k < K; ++k) {
    std::size_t votes = 0;
    for (const auto& r : reports) votes += r[k] != 0;
    out[k] = 2 * votes > reports.size();
  }
  return out;
}

}  // namespace scads
