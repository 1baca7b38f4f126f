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

#include "scads/game.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <unordered_set>

#include "scads/simulator.hpp"

namespace scads {
namespace {

void invalid(const std::string& what) { throw Error(ErrorCode::kInvalidConfig, what); }

void check_unique(const std::vector<std::string>& names, const std::string& field) {
  if (names.empty()) invalid(field + " must not be empty");
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (n.empty()) invalid(field + " contains an empty name");
    if (!seen.insert(n).second) invalid(field + " contains duplicate '" + n + "'");
  }
}

void check_round_shape(const PublicState& state, const RoundRecord& round,
                       const GameConfig& config) {
  if (round.reports.size() != config.n_experts()) {
    throw Error(ErrorCode::kMissingExpertReport,
                "round " + std::to_string(round.round_id) + " has " +
                    std::to_string(round.reports.size()) + " reports for " +
                    std::to_string(config.n_experts()) + " experts");
  }
  for (const auto& r : round.reports) {
    if (r.size() != config.n_labels()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "round " + std::to_string(round.round_id) + ": report has " +
                      std::to_string(r.size()) + " labels");
    }
  }
  if (round.truth && round.truth->size() != config.n_labels()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "round " + std::to_string(round.round_id) + ": truth has wrong length");
  }
  if (state.dimension != 0 && round.context.dimension() != state.dimension) {
    throw Error(ErrorCode::kDimensionMismatch,
                "round " + std::to_string(round.round_id) + ": context dimension " +
                    std::to_string(round.context.dimension()) + " != " +
                    std::to_string(state.dimension));
  }
  if (round.context.dimension() == 0) {
    throw Error(ErrorCode::kDimensionMismatch, "empty context vector");
  }
}

}  // namespace

const std::vector<std::string>& default_labels() {
  static const std::vector<std::string> labels = {
      "turn left",
      "turn right",
      "brake",
      "accelerate",
      "stop",
      "traffic light ahead",
      "junction ahead",
      "pedestrian crossing ahead",
      "merge",
      "maintain safe distance",
      "check blind spot",
      "adjust speed due to weather",
      "yield to traffic",
      "drive as normal",
  };
  return labels;
}

const std::vector<std::string>& default_experts() {
  static const std::vector<std::string> experts = {"model_1", "model_2", "model_3"};
  return experts;
}

void GameConfig::validate() const {
  check_unique(labels, "labels");
  check_unique(experts, "experts");
  if (experts.size() > Coalition::kMaxExperts) {
    throw Error(ErrorCode::kTooManyExperts, "at most 20 experts are supported");
  }
  if (k_reliability == 0) invalid("k_reliability must be positive");
  if (k_prior == 0) invalid("k_prior must be positive");
  if (!(kernel_exponent > 0.0) || !std::isfinite(kernel_exponent)) {
    invalid("kernel_exponent must be positive");
  }
  if (!(rho_max >= 0.0 && rho_max <= 1.0)) invalid("rho_max must lie in [0, 1]");
  if (!(eta > 0.0) || !std::isfinite(eta)) invalid("eta must be positive");
  if (!(alpha >= 0.0 && alpha <= 1.0)) invalid("alpha must lie in [0, 1]");
  if (!(prize >= 0.0) || !std::isfinite(prize)) invalid("prize must be >= 0");
  if (!(delta > 0.0 && delta <= 1.0)) invalid("delta must lie in (0, 1]");
  if (!(epsilon > 0.0 && epsilon < 0.5)) invalid("epsilon must lie in (0, 0.5)");
  if (decision_threshold && !(*decision_threshold > 0.0 && *decision_threshold < 1.0)) {
    invalid("decision_threshold must lie in (0, 1)");
  }
  if (!(reputation_floor >= 0.0 &&
        reputation_floor * static_cast<double>(experts.size()) < 1.0)) {
    invalid("reputation_floor must be >= 0 and below 1/n_experts");
  }
}

PublicState PublicState::initial(const GameConfig& config) {
  PublicState s;
  s.reputation = ReputationVector::uniform(config.n_experts());
  s.bank = ContextBank(0, config.bank_max);
  s.window = LabelledWindow(config.window);
  s.correlations = CorrelationMatrix(config.n_experts(), config.n_labels());
  s.global = GlobalCounts(config.n_experts(), config.n_labels());
  return s;
}

RoundSignals round_signals(const PublicState& state, const RoundRecord& round,
                           const GameConfig& config, RoundDiagnostics* diagnostics) {
  check_round_shape(state, round, config);
  const std::size_t n = config.n_experts();
  const std::size_t K = config.n_labels();

  std::vector<std::vector<ReliabilityEstimate>> estimates(n, std::vector<ReliabilityEstimate>(K));
  RoundSignals s;
  s.priors.resize(K);
  s.reports = round.reports;
  s.llr.assign(n, std::vector<double>(K, 0.0));

  if (config.context_agnostic) {
    for (std::size_t k = 0; k < K; ++k) s.priors[k] = state.global.base_rate(k, config.epsilon);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < K; ++k) estimates[i][k] = state.global.estimate(i, k);
    }
  } else {
    const auto neighbors = state.bank.query_topk(
        round.context, std::max(config.k_reliability, config.k_prior), config.kernel_exponent);
    const auto for_reliability = neighbors.prefix(config.k_reliability);
    const auto for_prior = neighbors.prefix(config.k_prior);
    for (std::size_t k = 0; k < K; ++k) {
      s.priors[k] = contextual_prior(for_prior, k, config.epsilon);
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < K; ++k) estimates[i][k] = pooled_stats(for_reliability, i, k);
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < K; ++k) {
      s.llr[i][k] = llr(estimates[i][k], round.reports[i][k] != 0, config.epsilon);
    }
  }
  s.rho = config.no_guardrail ? CorrelationMatrix(n, K) : state.correlations;

  if (diagnostics) {
    diagnostics->estimates = std::move(estimates);
    diagnostics->llr = s.llr;
    diagnostics->guarded = guarded_llrs(s, Coalition::full(n));
    diagnostics->priors = s.priors;
  }
  return s;
}

RoundOutcome run_round(PublicState& state, const RoundRecord& round,
                       const GameConfig& config, double threshold, bool learn) {
  RoundOutcome out;
  out.round_id = round.round_id;
  out.labelled = round.labelled();
  out.threshold = threshold;

  const RoundSignals signals = round_signals(state, round, config, &out.diagnostics);
  if (state.dimension == 0) state.dimension = round.context.dimension();

  const std::size_t n = config.n_experts();
  const ReputationVector weights =
      config.freeze_reputation ? ReputationVector::uniform(n) : state.reputation;
  out.reputation_before = weights;

  out.posteriors = full_posterior(signals, weights.values(), config.epsilon);
  out.decisions = decide(out.posteriors, threshold);
  out.payoffs.assign(n, 0.0);
  ++state.round_index;

  if (!round.labelled()) {
    out.reputation_after = state.reputation;
    return out;
  }

  out.credit = round_credit(signals, weights.values(), round.truth, config.epsilon,
                            config.naive_credit);
  double w_sum = 0.0;
  for (double w : weights.values()) w_sum += w;
  for (std::size_t i = 0; i < n; ++i) {
    out.payoffs[i] = stage_payoff(out.credit->phi[i], weights[i], w_sum, config.prize, config.alpha);
  }

  if (learn) {
    if (!config.freeze_reputation) {
      state.reputation =
          update_reputation(state.reputation, out.credit->phi, config.eta, config.reputation_floor);
    }
    auto record = std::make_shared<const RoundRecord>(round);
    state.bank.insert(record);
    state.window.push(record);
    state.global.add(*record);
    state.correlations = update_correlations(state.window, n, config.n_labels(), config.rho_max);
  }
  out.reputation_after = state.reputation;
  return out;
}

Engine::Engine(GameConfig config)
    : config_(std::move(config)),
      threshold_(config_.decision_threshold.value_or(kUntunedThreshold)) {
  config_.validate();
  state_ = PublicState::initial(config_);
}

RoundOutcome Engine::run_round(const RoundRecord& round) {
  return scads::run_round(state_, round, config_, threshold_, learn_);
}

void Engine::set_threshold(double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "threshold must lie in (0, 1)");
  }
  threshold_ = threshold;
}

namespace {

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

Split split_rounds(std::span<const RoundRecord> rounds, const ReplayOptions& options) {
  if (rounds.empty()) throw Error(ErrorCode::kEmptyDataset, "dataset has no rounds");
  for (std::size_t t = 1; t < rounds.size(); ++t) {
    if (rounds[t].round_id <= rounds[t - 1].round_id) {
      throw Error(ErrorCode::kNonMonotoneRounds,
                  "round_id " + std::to_string(rounds[t].round_id) + " follows " +
                      std::to_string(rounds[t - 1].round_id));
    }
  }
  Split split;
  if (options.train_ids) {
    const std::unordered_set<std::int64_t> ids(options.train_ids->begin(),
                                               options.train_ids->end());
    for (std::size_t t = 0; t < rounds.size(); ++t) {
      (ids.count(rounds[t].round_id) ? split.train : split.test).push_back(t);
    }
  } else {
    if (!(options.train_frac >= 0.0 && options.train_frac <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "train fraction must lie in [0, 1]");
    }
    const auto n_train = static_cast<std::size_t>(
        std::floor(options.train_frac * static_cast<double>(rounds.size()) + 1e-9));
    for (std::size_t t = 0; t < rounds.size(); ++t) {
      (t < n_train ? split.train : split.test).push_back(t);
    }
  }
  return split;
}

TrajectoryRow trajectory_row(std::int64_t t, bool train, const RoundOutcome& o) {
  TrajectoryRow row;
  row.t = t;
  row.round_id = o.round_id;
  row.train = train;
  row.labelled = o.labelled;
  row.w.assign(o.reputation_before.values().begin(), o.reputation_before.values().end());
  row.q = o.posteriors;
  row.phi = o.credit ? o.credit->phi : std::vector<double>(o.payoffs.size(), 0.0);
  row.u = o.payoffs;
  return row;
}

// Replays the training split; returns labelled (posterior, truth) pairs.
void replay_train(Engine& engine, std::span<const RoundRecord> rounds, const Split& split,
                  std::vector<PosteriorVector>& posteriors, std::vector<BinaryVector>& truths,
                  std::vector<TrajectoryRow>* trajectory) {
  for (std::size_t idx : split.train) {
    const auto outcome = engine.run_round(rounds[idx]);
    if (outcome.labelled) {
      posteriors.push_back(outcome.posteriors);
      truths.push_back(*rounds[idx].truth);
    }
    if (trajectory) {
      trajectory->push_back(
          trajectory_row(static_cast<std::int64_t>(trajectory->size()) + 1, true, outcome));
    }
  }
}

}  // namespace

ReplayResult replay(std::span<const RoundRecord> rounds, const GameConfig& config,
                    const ReplayOptions& options) {
  const Split split = split_rounds(rounds, options);
  Engine engine(config);
  ReplayResult result;
  result.n_train = split.train.size();
  result.n_test = split.test.size();

  std::vector<PosteriorVector> posteriors;
  std::vector<BinaryVector> truths;
  replay_train(engine, rounds, split, posteriors, truths, &result.trajectory);

  if (config.decision_threshold) {
    result.threshold = *config.decision_threshold;
  } else if (!posteriors.empty()) {
    result.threshold = tune_threshold(posteriors, truths);
    result.threshold_tuned = true;
  }
  engine.set_threshold(result.threshold);
  if (options.no_update_eval) engine.set_learning(false);

  const std::size_t n = config.n_experts();
  std::vector<Prediction> fused;
  std::vector<std::vector<Prediction>> single(n);
  std::vector<Prediction> majority;
  for (std::size_t idx : split.test) {
    const RoundRecord& round = rounds[idx];
    const auto outcome = engine.run_round(round);
    result.trajectory.push_back(trajectory_row(
        static_cast<std::int64_t>(result.trajectory.size()) + 1, false, outcome));
    if (!round.labelled()) continue;
    fused.push_back({*round.truth, outcome.decisions});
    for (std::size_t i = 0; i < n; ++i) single[i].push_back({*round.truth, round.reports[i]});
    majority.push_back({*round.truth, majority_vote(round.reports)});
  }

  result.metrics_available = !fused.empty();
  if (result.metrics_available) {
    result.fused = summarize(fused, config.macro_skip_empty);
    for (std::size_t i = 0; i < n; ++i) {
      result.baselines.emplace_back(config.experts[i],
                                    summarize(single[i], config.macro_skip_empty));
    }
    result.baselines.emplace_back("majority_vote",
                                  summarize(majority, config.macro_skip_empty));
  }

  result.final_reputation = engine.state().reputation;
  result.discounted_utility.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> series;
    series.reserve(result.trajectory.size());
    for (const auto& row : result.trajectory) series.push_back(row.u[i]);
    result.discounted_utility[i] = discounted_utility(series, config.delta);
  }
  return result;
}

double tune_threshold_on(std::span<const RoundRecord> rounds, const GameConfig& config,
                         const ReplayOptions& options) {
  const Split split = split_rounds(rounds, options);
  Engine engine(config);
  std::vector<PosteriorVector> posteriors;
  std::vector<BinaryVector> truths;
  replay_train(engine, rounds, split, posteriors, truths, nullptr);
  return tune_threshold(posteriors, truths);
}

}  // namespace scads
