#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "scads/simulator.hpp"

namespace scads {
namespace {

SimConfig small(std::size_t rounds, std::uint64_t seed = 7) {
  SimConfig s;
  s.n_rounds = rounds;
  s.seed = seed;
  return s;
}

void expect_code(ErrorCode code, auto&& fn) {
  try {
    fn();
    ADD_FAILURE() << "expected " << error_code_name(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

bool same_round(const RoundRecord& a, const RoundRecord& b) {
  return a.round_id == b.round_id && a.reports == b.reports && a.truth == b.truth &&
         std::vector<double>(a.context.values().begin(), a.context.values().end()) ==
             std::vector<double>(b.context.values().begin(), b.context.values().end());
}

TEST(Simulator, Deterministic) {
  const auto sim = small(300);
  const auto p = default_profiles(sim);
  const auto a = generate_dataset(sim, p), b = generate_dataset(sim, p);
  ASSERT_EQ(a.rounds.size(), 300u);
  for (std::size_t t = 0; t < a.rounds.size(); ++t) EXPECT_TRUE(same_round(a.rounds[t], b.rounds[t]));
  const auto c = generate_dataset(small(300, 8), p);
  int differ = 0;
  for (std::size_t t = 0; t < 300; ++t) differ += !same_round(a.rounds[t], c.rounds[t]);
  EXPECT_GT(differ, 250);
}

TEST(Simulator, RoundsArePrefixStable) {
  const auto p = default_profiles(small(10));
  const auto a = generate_dataset(small(100), p);
  const auto b = generate_dataset(small(250), p);
  for (std::size_t t = 0; t < 100; ++t) EXPECT_TRUE(same_round(a.rounds[t], b.rounds[t])) << t;
}

TEST(Simulator, ShapeAndIds) {
  const auto d = generate_dataset(small(50), default_profiles(small(50)));
  for (std::size_t t = 0; t < 50; ++t) {
    EXPECT_EQ(d.rounds[t].round_id, static_cast<std::int64_t>(t + 1));
    EXPECT_EQ(d.rounds[t].reports.size(), 3u);
    EXPECT_EQ(d.rounds[t].reports[0].size(), 14u);
    EXPECT_TRUE(d.rounds[t].labelled());
    double n2 = 0;
    for (double v : d.rounds[t].context.values()) n2 += v * v;
    EXPECT_NEAR(n2, 1.0, 1e-12);
  }
}

TEST(Simulator, CentroidsSeparated) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto sim = small(1, seed);
    const auto d = generate_dataset(sim, default_profiles(sim));
    ASSERT_EQ(d.centroids.size(), 4u);
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = a + 1; b < 4; ++b) {
        double dot = 0;
        for (std::size_t i = 0; i < 16; ++i) dot += d.centroids[a].values()[i] * d.centroids[b].values()[i];
        EXPECT_LT(dot, 0.3);
      }
  }
}

TEST(Simulator, DefaultProfiles) {
  const auto p = default_profiles(small(1));
  ASSERT_EQ(p.size(), 3u);
  EXPECT_EQ(p[0].id, "model_1");
  EXPECT_DOUBLE_EQ(p[0].tpr[2][5], 0.85);
  EXPECT_DOUBLE_EQ(p[1].tpr[0][0], 0.75);
  EXPECT_DOUBLE_EQ(p[2].tpr[0][0], 0.65);
  EXPECT_DOUBLE_EQ(p[0].fpr[0][0], 0.05);
  EXPECT_DOUBLE_EQ(p[1].fpr[0][0], 0.10);
  EXPECT_DOUBLE_EQ(p[2].fpr[0][0], 0.15);
}

TEST(Simulator, PerfectExpertEchoesTruth) {
  auto sim = small(500);
  auto p = default_profiles(sim);
  for (auto& row : p[1].tpr) std::fill(row.begin(), row.end(), 1.0);
  for (auto& row : p[1].fpr) std::fill(row.begin(), row.end(), 0.0);
  const auto d = generate_dataset(sim, p);
  for (const auto& r : d.rounds) EXPECT_EQ(r.reports[1], *r.truth);
}

TEST(Simulator, UninformativeExpertWithin3Sigma) {
  auto sim = small(10000, 99);
  sim.n_labels = 2;
  auto p = default_profiles(sim);
  const double rate = 0.4;
  for (auto& row : p[2].tpr) std::fill(row.begin(), row.end(), rate);
  for (auto& row : p[2].fpr) std::fill(row.begin(), row.end(), rate);
  const auto d = generate_dataset(sim, p);
  for (std::size_t k = 0; k < 2; ++k) {
    double pos = 0, pos_hit = 0, neg = 0, neg_hit = 0;
    for (const auto& r : d.rounds) {
      if ((*r.truth)[k]) {
        ++pos;
        pos_hit += r.reports[2][k];
      } else {
        ++neg;
        neg_hit += r.reports[2][k];
      }
    }
    const double sd_pos = std::sqrt(rate * (1 - rate) / pos);
    const double sd_neg = std::sqrt(rate * (1 - rate) / neg);
    EXPECT_NEAR(pos_hit / pos, rate, 3 * sd_pos);
    EXPECT_NEAR(neg_hit / neg, rate, 3 * sd_neg);
  }
}

TEST(Simulator, EmpiricalRatesMatchProfiles) {
  auto sim = small(10000, 5);
  const auto p = default_profiles(sim);
  const auto d = generate_dataset(sim, p);
  for (std::size_t i = 0; i < 3; ++i) {
    const std::size_t k = i;  // one label per expert
    double pos = 0, tp = 0, neg = 0, fp = 0;
    for (const auto& r : d.rounds) {
      if ((*r.truth)[k]) {
        ++pos;
        tp += r.reports[i][k];
      } else {
        ++neg;
        fp += r.reports[i][k];
      }
    }
    const double t = p[i].tpr[0][k], f = p[i].fpr[0][k];
    EXPECT_NEAR(tp / pos, t, 3 * std::sqrt(t * (1 - t) / pos));
    EXPECT_NEAR(fp / neg, f, 3 * std::sqrt(f * (1 - f) / neg));
  }
}

TEST(Simulator, FullStrengthPairCopiesErrors) {
  auto sim = small(2000, 3);
  auto p = default_profiles(sim);
  p[2].correlation_partner = 0;
  p[2].correlation_strength = 1.0;
  const auto d = generate_dataset(sim, p);
  for (const auto& r : d.rounds) {
    for (std::size_t k = 0; k < 14; ++k) {
      EXPECT_EQ(r.reports[0][k] != (*r.truth)[k], r.reports[2][k] != (*r.truth)[k]);
    }
  }
}

TEST(Simulator, LabelledFraction) {
  auto sim = small(5000, 4);
  sim.labelled_fraction = 0.25;
  const auto d = generate_dataset(sim, default_profiles(sim));
  double labelled = 0;
  for (const auto& r : d.rounds) labelled += r.labelled();
  EXPECT_NEAR(labelled / 5000, 0.25, 3 * std::sqrt(0.25 * 0.75 / 5000));
}

TEST(Simulator, Errors) {
  auto sim = small(10);
  auto p = default_profiles(sim);
  p.pop_back();
  expect_code(ErrorCode::kProfileCountMismatch, [&] { generate_dataset(sim, p); });
  expect_code(ErrorCode::kInvalidConfig, [&] { generate_dataset(small(0), default_profiles(small(0))); });

  auto bad = default_profiles(sim);
  bad[0].tpr[0][0] = 1.5;
  expect_code(ErrorCode::kInvalidConfig, [&] { generate_dataset(sim, bad); });

  auto late = default_profiles(sim);
  late[0].correlation_partner = 2;
  late[0].correlation_strength = 0.5;
  expect_code(ErrorCode::kInvalidConfig, [&] { generate_dataset(sim, late); });

  auto frac = small(10);
  frac.labelled_fraction = 0.0;
  expect_code(ErrorCode::kInvalidConfig, [&] { frac.validate(); });
}

TEST(MajorityVote, Examples) {
  EXPECT_EQ(majority_vote(std::vector<BinaryVector>{{1}, {1}, {0}}), (BinaryVector{1}));
  EXPECT_EQ(majority_vote(std::vector<BinaryVector>{{1}, {0}, {0}}), (BinaryVector{0}));
  EXPECT_EQ(majority_vote(std::vector<BinaryVector>{{0}, {0}, {0}}), (BinaryVector{0}));
  // even count needs a strict majority
  EXPECT_EQ(majority_vote(std::vector<BinaryVector>{{1}, {1}, {0}, {0}}), (BinaryVector{0}));
}

}  // namespace
}  // namespace scads
