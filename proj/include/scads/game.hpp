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

// The repeated fusion game.
//
// Each round: retrieve labelled neighbors of the context, estimate
// reliabilities and the prior, turn reports into guardrailed LLRs, fuse them
// under the current reputation and threshold the posterior. If the round is
// labelled, credit experts with Shapley values, update the reputation and
// bank the round. Unlabelled rounds leave the public state untouched.

#ifndef SCADS_GAME_HPP
#define SCADS_GAME_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "scads/context_bank.hpp"
#include "scads/credit.hpp"
#include "scads/fusion.hpp"
#include "scads/metrics.hpp"
#include "scads/reliability.hpp"
#include "scads/signals.hpp"

namespace scads {

// The 14-label driving-manoeuvre ontology.
const std::vector<std::string>& default_labels();
const std::vector<std::string>& default_experts();

struct GameConfig {
  std::vector<std::string> labels = default_labels();
  std::vector<std::string> experts = default_experts();
  std::size_t k_reliability = 50;
  std::size_t k_prior = 50;
  double kernel_exponent = 2.0;
  double rho_max = 0.5;
  std::size_t window = 200;
  double eta = 1e-4;
  double alpha = 0.0;
  double prize = 0.0;
  double delta = 1.0;
  double epsilon = kDefaultEpsilon;
  // nullopt means "tune on the training split".
  std::optional<double> decision_threshold;
  double reputation_floor = 1e-8;  // 0 disables the floor
  std::size_t bank_max = 0;        // 0 = unbounded
  bool macro_skip_empty = false;

  bool freeze_reputation = false;
  bool naive_credit = false;
  bool no_guardrail = false;
  bool context_agnostic = false;

  // Throws InvalidConfig naming the offending field.
  void validate() const;

  std::size_t n_experts() const { return experts.size(); }
  std::size_t n_labels() const { return labels.size(); }
};

inline constexpr double kUntunedThreshold = 0.5;

struct PublicState {
  std::int64_t round_index = 0;
  ReputationVector reputation;
  ContextBank bank;
  LabelledWindow window;
  CorrelationMatrix correlations;
  GlobalCounts global;
  std::size_t dimension = 0;  // 0 until the first round

  static PublicState initial(const GameConfig& config);
};

// Per-(expert, label) intermediates of one round.
struct RoundDiagnostics {
  std::vector<std::vector<ReliabilityEstimate>> estimates;
  std::vector<std::vector<double>> llr;
  std::vector<std::vector<double>> guarded;  // full coalition
  std::vector<double> priors;
};

struct RoundOutcome {
  std::int64_t round_id = 0;
  bool labelled = false;
  PosteriorVector posteriors;
  BinaryVector decisions;
  double threshold = kUntunedThreshold;
  std::optional<CreditReport> credit;
  std::vector<double> payoffs;
  ReputationVector reputation_before;
  ReputationVector reputation_after;
  RoundDiagnostics diagnostics;
};

// Builds the round's fusion inputs from the current state without changing it.
RoundSignals round_signals(const PublicState& state, const RoundRecord& round,
                           const GameConfig& config, RoundDiagnostics* diagnostics = nullptr);

// One protocol round. `learn` = false computes credit but leaves the state
// unchanged (frozen evaluation).
RoundOutcome run_round(PublicState& state, const RoundRecord& round,
                       const GameConfig& config, double threshold, bool learn = true);

class Engine {
 public:
  explicit Engine(GameConfig config);

  RoundOutcome run_round(const RoundRecord& round);

  const GameConfig& config() const { return config_; }
  const PublicState& state() const { return state_; }
  double threshold() const { return threshold_; }
  void set_threshold(double threshold);
  void set_learning(bool learn) { learn_ = learn; }

 private:
  GameConfig config_;
  PublicState state_;
  double threshold_;
  bool learn_ = true;
};

struct ReplayOptions {
  double train_frac = 0.7;
  // When set, exactly these rounds form the training split.
  std::optional<std::vector<std::int64_t>> train_ids;
  bool no_update_eval = false;
};

struct TrajectoryRow {
  std::int64_t t = 0;
  std::int64_t round_id = 0;
  bool train = false;
  bool labelled = false;
  std::vector<double> w;    // reputation at the start of the round
  std::vector<double> q;
  std::vector<double> phi;  // zeros when unlabelled
  std::vector<double> u;
};

struct ReplayResult {
  bool metrics_available = false;
  MetricsSummary fused;
  // Each expert's raw reports and the majority vote, on the same rounds.
  std::vector<std::pair<std::string, MetricsSummary>> baselines;
  double threshold = kUntunedThreshold;
  bool threshold_tuned = false;
  ReputationVector final_reputation;
  std::vector<double> discounted_utility;
  std::vector<TrajectoryRow> trajectory;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
};

// Splits `rounds` (strictly increasing round_id) into train/test, replays the
// training rounds, tunes the threshold if requested, then replays the test
// rounds and evaluates them. Throws EmptyDataset, NonMonotoneRounds.
ReplayResult replay(std::span<const RoundRecord> rounds, const GameConfig& config,
                    const ReplayOptions& options = {});

// Training-split pass only; returns the tuned threshold. Throws EmptySplit if
// the training split holds no labelled round.
double tune_threshold_on(std::span<const RoundRecord> rounds, const GameConfig& config,
                         const ReplayOptions& options = {});

}  // namespace scads

#endif  // SCADS_GAME_HPP
