#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "scads/game.hpp"
#include "scads/simulator.hpp"
#include "test_support.hpp"

namespace scads {
namespace {

std::vector<RoundRecord> simulate(std::size_t n_rounds, std::uint64_t seed,
                                  double labelled_fraction = 1.0) {
  SimConfig sim;
  sim.n_rounds = n_rounds;
  sim.seed = seed;
  sim.labelled_fraction = labelled_fraction;
  return generate_dataset(sim, default_profiles(sim)).rounds;
}

void expect_code(ErrorCode code, auto&& fn) {
  try {
    fn();
    ADD_FAILURE() << "expected " << error_code_name(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

TEST(Config, Validation) {
  GameConfig c;
  EXPECT_NO_THROW(c.validate());
  auto bad = [](auto mutate) {
    GameConfig g;
    mutate(g);
    expect_code(ErrorCode::kInvalidConfig, [&] { g.validate(); });
  };
  bad([](GameConfig& g) { g.k_reliability = 0; });
  bad([](GameConfig& g) { g.k_prior = 0; });
  bad([](GameConfig& g) { g.kernel_exponent = 0; });
  bad([](GameConfig& g) { g.rho_max = -0.1; });
  bad([](GameConfig& g) { g.eta = -1; });
  bad([](GameConfig& g) { g.alpha = 2; });
  bad([](GameConfig& g) { g.prize = -1; });
  bad([](GameConfig& g) { g.delta = 0; });
  bad([](GameConfig& g) { g.epsilon = 0; });
  bad([](GameConfig& g) { g.decision_threshold = 0.0; });
  bad([](GameConfig& g) { g.labels.clear(); });
  bad([](GameConfig& g) { g.experts = {"a", "a"}; });
  bad([](GameConfig& g) { g.reputation_floor = 0.5; });
}

TEST(Engine, FirstRoundUsesPriorsOnly) {
  Engine e(GameConfig{});
  const auto rounds = simulate(1, 1);
  const auto o = e.run_round(rounds[0]);
  for (double q : o.posteriors) EXPECT_EQ(q, 0.5);
  ASSERT_TRUE(o.credit.has_value());
  for (double phi : o.credit->phi) EXPECT_EQ(phi, 0.0);
  EXPECT_EQ(e.state().bank.size(), 1u);
}

TEST(Engine, RoundShapeErrors) {
  Engine e(GameConfig{});
  auto rounds = simulate(3, 2);
  e.run_round(rounds[0]);
  auto missing = rounds[1];
  missing.reports.pop_back();
  expect_code(ErrorCode::kMissingExpertReport, [&] { e.run_round(missing); });
  auto short_report = rounds[1];
  short_report.reports[0].pop_back();
  expect_code(ErrorCode::kDimensionMismatch, [&] { e.run_round(short_report); });
  auto wrong_dim = rounds[1];
  wrong_dim.context = ContextVector::normalize(std::vector<double>{1, 2, 3});
  expect_code(ErrorCode::kDimensionMismatch, [&] { e.run_round(wrong_dim); });
  expect_code(ErrorCode::kDuplicateRoundId, [&] { e.run_round(rounds[0]); });
  expect_code(ErrorCode::kInvalidArgument, [&] { e.set_threshold(1.0); });
}

TEST(Engine, UnlabelledRoundLeavesStateUntouched) {
  Engine e(GameConfig{});
  auto rounds = simulate(40, 3);
  for (int t = 0; t < 30; ++t) e.run_round(rounds[t]);
  const auto before = e.state();
  auto u = rounds[30];
  u.truth.reset();
  const auto o = e.run_round(u);
  EXPECT_FALSE(o.credit.has_value());
  for (double v : o.payoffs) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(e.state().reputation, before.reputation);
  EXPECT_EQ(e.state().bank.size(), before.bank.size());
  EXPECT_EQ(e.state().window.size(), before.window.size());
  EXPECT_EQ(e.state().correlations, before.correlations);
  EXPECT_EQ(o.reputation_after, before.reputation);
}

TEST(Engine, RoundIsNotItsOwnNeighbor) {
  GameConfig c;
  c.labels = {"x"};
  c.experts = {"a", "b"};
  Engine e(c);
  RoundRecord r;
  r.round_id = 1;
  r.context = ContextVector::normalize(std::vector<double>{1, 0});
  r.reports = {{1}, {0}};
  r.truth = BinaryVector{1};
  const auto o = e.run_round(r);
  EXPECT_EQ(o.diagnostics.estimates[0][0].alpha_pos, 1.0);
  EXPECT_EQ(o.diagnostics.priors[0], 0.5);
  r.round_id = 2;
  const auto o2 = e.run_round(r);
  EXPECT_EQ(o2.diagnostics.estimates[0][0].alpha_pos, 2.0);
}

TEST(Engine, CorrelationsMatchBatchRecompute) {
  GameConfig c;
  c.window = 25;
  Engine e(c);
  auto rounds = simulate(120, 4, 0.7);
  std::vector<RecordPtr> labelled;
  for (const auto& r : rounds) {
    e.run_round(r);
    if (r.labelled()) labelled.push_back(std::make_shared<const RoundRecord>(r));
  }
  LabelledWindow w(25);
  for (std::size_t t = labelled.size() - 25; t < labelled.size(); ++t) w.push(labelled[t]);
  EXPECT_EQ(e.state().correlations, update_correlations(w, 3, 14, 0.5));
  EXPECT_EQ(e.state().bank.size(), labelled.size());
}

TEST(Engine, FreezeKeepsUniformWeights) {
  GameConfig c;
  c.freeze_reputation = true;
  Engine e(c);
  for (const auto& r : simulate(200, 5)) {
    const auto o = e.run_round(r);
    for (double w : o.reputation_before.values()) EXPECT_EQ(w, 1.0 / 3.0);
  }
  EXPECT_EQ(e.state().reputation, ReputationVector::uniform(3));
}

TEST(Engine, NoGuardrailEqualsZeroRhoMax) {
  GameConfig a;
  a.no_guardrail = true;
  GameConfig b;
  b.rho_max = 0.0;
  Engine ea(a), eb(b);
  for (const auto& r : simulate(150, 6)) {
    const auto oa = ea.run_round(r);
    const auto ob = eb.run_round(r);
    EXPECT_EQ(oa.posteriors, ob.posteriors);
    EXPECT_EQ(oa.credit->phi, ob.credit->phi);
  }
  EXPECT_EQ(ea.state().reputation, eb.state().reputation);
}

TEST(Engine, ContextAgnosticPoolsAllHistory) {
  GameConfig c;
  c.context_agnostic = true;
  Engine e(c);
  const auto rounds = simulate(60, 7);
  for (int t = 0; t < 59; ++t) e.run_round(rounds[t]);
  const auto o = e.run_round(rounds[59]);
  // unit weights over all 59 earlier rounds
  double ap = 1, bp = 1, pos = 0;
  for (int t = 0; t < 59; ++t) {
    if ((*rounds[t].truth)[0]) {
      ++pos;
      (rounds[t].reports[1][0] ? ap : bp) += 1;
    }
  }
  EXPECT_DOUBLE_EQ(o.diagnostics.estimates[1][0].theta_pos(), ap / (ap + bp));
  EXPECT_DOUBLE_EQ(o.diagnostics.priors[0], (1 + pos) / (2 + 59));
}

TEST(Engine, NaiveCreditIsSoloValue) {
  GameConfig c;
  c.naive_credit = true;
  Engine e(c);
  const auto rounds = simulate(30, 8);
  for (const auto& r : rounds) {
    const auto before = e.state();
    const auto s = round_signals(before, r, c);
    const auto o = e.run_round(r);
    for (std::size_t i = 0; i < 3; ++i) {
      EXPECT_EQ(o.credit->phi[i], team_value(Coalition::single(i), s,
                                             before.reputation.values(), *r.truth, c.epsilon));
    }
  }
}

TEST(Engine, PayoffIncludesPrizeShare) {
  GameConfig c;
  c.alpha = 1.0;
  c.prize = 3.0;
  Engine e(c);
  const auto rounds = simulate(5, 9);
  for (const auto& r : rounds) {
    const auto o = e.run_round(r);
    for (std::size_t i = 0; i < 3; ++i) {
      EXPECT_NEAR(o.payoffs[i], o.credit->phi[i] + 3.0 * o.reputation_before[i], 1e-12);
    }
  }
}

TEST(Engine, FrozenLearningLeavesState) {
  Engine e(GameConfig{});
  const auto rounds = simulate(50, 10);
  for (int t = 0; t < 40; ++t) e.run_round(rounds[t]);
  const auto before = e.state();
  e.set_learning(false);
  for (int t = 40; t < 50; ++t) {
    const auto o = e.run_round(rounds[t]);
    EXPECT_TRUE(o.credit.has_value());
  }
  EXPECT_EQ(e.state().reputation, before.reputation);
  EXPECT_EQ(e.state().bank.size(), before.bank.size());
}

TEST(Replay, SplitAndMetrics) {
  const auto rounds = simulate(300, 11);
  ReplayOptions o;
  o.train_frac = 0.7;
  const auto r = replay(rounds, GameConfig{}, o);
  EXPECT_EQ(r.n_train, 210u);
  EXPECT_EQ(r.n_test, 90u);
  EXPECT_TRUE(r.metrics_available);
  EXPECT_TRUE(r.threshold_tuned);
  EXPECT_EQ(r.trajectory.size(), 300u);
  EXPECT_EQ(r.fused.n_rounds, 90u);
  ASSERT_EQ(r.baselines.size(), 4u);
  EXPECT_EQ(r.baselines[3].first, "majority_vote");
  for (std::size_t t = 0; t < 300; ++t) EXPECT_EQ(r.trajectory[t].train, t < 210);
}

TEST(Replay, TrainIdsSelectTrainingRounds) {
  const auto rounds = simulate(40, 12);
  ReplayOptions o;
  o.train_ids = std::vector<std::int64_t>{};
  for (std::int64_t id = 2; id <= 40; id += 2) o.train_ids->push_back(id);
  const auto r = replay(rounds, GameConfig{}, o);
  EXPECT_EQ(r.n_train, 20u);
  EXPECT_EQ(r.n_test, 20u);
  EXPECT_EQ(r.trajectory.front().round_id, 2);
  EXPECT_EQ(r.trajectory[20].round_id, 1);
}

TEST(Replay, FixedThresholdAndUntunedFallback) {
  const auto rounds = simulate(50, 13);
  GameConfig c;
  c.decision_threshold = 0.37;
  EXPECT_EQ(replay(rounds, c).threshold, 0.37);

  ReplayOptions none;
  none.train_frac = 0.0;
  const auto r = replay(rounds, GameConfig{}, none);
  EXPECT_FALSE(r.threshold_tuned);
  EXPECT_EQ(r.threshold, kUntunedThreshold);
  expect_code(ErrorCode::kEmptySplit, [&] { tune_threshold_on(rounds, GameConfig{}, none); });
}

TEST(Replay, Errors) {
  expect_code(ErrorCode::kEmptyDataset, [] { replay({}, GameConfig{}); });
  auto rounds = simulate(10, 14);
  std::swap(rounds[3], rounds[4]);
  expect_code(ErrorCode::kNonMonotoneRounds, [&] { replay(rounds, GameConfig{}); });
}

TEST(Replay, UnlabelledGapKeepsReputation) {
  auto rounds = simulate(400, 15);
  for (std::size_t t = 150; t < 250; ++t) rounds[t].truth.reset();
  ReplayOptions o;
  o.train_frac = 1.0;
  const auto r = replay(rounds, GameConfig{}, o);
  for (std::size_t t = 150; t <= 250; ++t) {
    EXPECT_EQ(r.trajectory[t].w, r.trajectory[150].w);
  }
  for (std::size_t t = 150; t < 250; ++t) {
    for (double u : r.trajectory[t].u) EXPECT_EQ(u, 0.0);
    for (double phi : r.trajectory[t].phi) EXPECT_EQ(phi, 0.0);
  }
  EXPECT_FALSE(r.metrics_available);
}

TEST(Replay, DiscountedUtility) {
  auto rounds = simulate(30, 16);
  GameConfig c;
  c.delta = 0.9;
  const auto r = replay(rounds, c);
  for (std::size_t i = 0; i < 3; ++i) {
    double total = 0, f = 1;
    for (const auto& row : r.trajectory) {
      total += f * row.u[i];
      f *= 0.9;
    }
    EXPECT_NEAR(r.discounted_utility[i], total, 1e-12);
  }
}

TEST(Replay, NoUpdateEvalFreezesTestSplit) {
  const auto rounds = simulate(100, 17);
  ReplayOptions o;
  o.train_frac = 0.5;
  o.no_update_eval = true;
  const auto r = replay(rounds, GameConfig{}, o);
  for (std::size_t t = 50; t < 100; ++t) EXPECT_EQ(r.trajectory[t].w, r.trajectory[50].w);
  std::vector<double> last(r.final_reputation.values().begin(), r.final_reputation.values().end());
  EXPECT_EQ(last, r.trajectory[50].w);
}

}  // namespace
}  // namespace scads
