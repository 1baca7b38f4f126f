#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "scads/context_bank.hpp"

namespace scads {
namespace {

ContextVector unit(std::vector<double> v) { return ContextVector::normalize(v); }

RoundRecord labelled(std::int64_t id, std::vector<double> x) {
  RoundRecord r;
  r.round_id = id;
  r.context = unit(std::move(x));
  r.reports = {{1}, {0}};
  r.truth = BinaryVector{1};
  return r;
}

void expect_code(ErrorCode code, auto&& fn) {
  try {
    fn();
    ADD_FAILURE() << "expected " << error_code_name(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

TEST(Normalize, ThreeFour) {
  auto v = unit({3, 4});
  ASSERT_EQ(v.dimension(), 2u);
  EXPECT_DOUBLE_EQ(v.values()[0], 0.6);
  EXPECT_DOUBLE_EQ(v.values()[1], 0.8);
}

TEST(Normalize, AlreadyUnit) {
  auto v = unit({1, 0, 0});
  EXPECT_EQ(v.values()[0], 1.0);
  EXPECT_EQ(v.values()[1], 0.0);
  EXPECT_EQ(v.values()[2], 0.0);
}

TEST(Normalize, ZeroVector) {
  expect_code(ErrorCode::kZeroVector, [] { unit({0, 0}); });
  expect_code(ErrorCode::kZeroVector, [] { unit({1e-13, 0}); });
}

TEST(Normalize, UnitNormOnRandomInputs) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0, 5);
  for (int t = 0; t < 500; ++t) {
    std::vector<double> raw(1 + t % 20);
    for (auto& x : raw) x = g(rng);
    auto v = unit(raw);
    double n2 = 0;
    for (double x : v.values()) n2 += x * x;
    EXPECT_NEAR(std::sqrt(n2), 1.0, 1e-9);
  }
}

TEST(Normalize, BankDimensionMismatch) {
  ContextBank bank;
  bank.insert(labelled(1, {1, 0, 0}));
  std::vector<double> two{1, 2};
  expect_code(ErrorCode::kDimensionMismatch, [&] { bank.normalize(two); });
}

TEST(Kernel, Examples) {
  auto x = unit({0.3, -0.2, 0.9});
  EXPECT_DOUBLE_EQ(kernel(x, x, 2.0), 1.0);
  EXPECT_DOUBLE_EQ(kernel(x, x, 7.5), 1.0);
  EXPECT_EQ(kernel(unit({1, 0}), unit({0, 1}), 2.0), 0.0);
  // cos 60 degrees
  EXPECT_NEAR(kernel(unit({1, 0}), unit({0.5, std::sqrt(3.0) / 2}), 2.0), 0.25, 1e-15);
  EXPECT_EQ(kernel(unit({1, 0}), unit({-1, 0.1}), 2.0), 0.0);
}

TEST(Kernel, DimensionMismatch) {
  expect_code(ErrorCode::kDimensionMismatch, [] { kernel(unit({1, 0}), unit({1, 0, 0}), 2.0); });
}

TEST(Kernel, SymmetricAndBounded) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> e(0.1, 6.0);
  for (int t = 0; t < 2000; ++t) {
    std::vector<double> a(8), b(8);
    for (auto& v : a) v = g(rng);
    for (auto& v : b) v = g(rng);
    const auto x = unit(a), y = unit(b);
    const double ex = e(rng);
    const double k1 = kernel(x, y, ex);
    EXPECT_EQ(k1, kernel(y, x, ex));
    EXPECT_GE(k1, 0.0);
    EXPECT_LE(k1, 1.0);
  }
}

TEST(Bank, InsertAndErrors) {
  ContextBank bank;
  bank.insert(labelled(1, {1, 0}));
  EXPECT_EQ(bank.size(), 1u);

  RoundRecord u = labelled(2, {0, 1});
  u.truth.reset();
  expect_code(ErrorCode::kUnlabelledRecord, [&] { bank.insert(u); });
  expect_code(ErrorCode::kDuplicateRoundId, [&] { bank.insert(labelled(1, {0, 1})); });
  expect_code(ErrorCode::kDimensionMismatch, [&] { bank.insert(labelled(3, {0, 1, 0})); });
  EXPECT_EQ(bank.size(), 1u);
}

TEST(Bank, EvictsOldestWhenCapped) {
  ContextBank bank(0, 2);
  bank.insert(labelled(1, {1, 0}));
  bank.insert(labelled(2, {0, 1}));
  bank.insert(labelled(3, {1, 1}));
  ASSERT_EQ(bank.size(), 2u);
  EXPECT_EQ(bank.records().front()->round_id, 2);
  // id 1 was evicted and can be reused
  bank.insert(labelled(1, {1, 0}));
  EXPECT_EQ(bank.size(), 2u);
}

TEST(Query, EmptyBank) {
  ContextBank bank;
  EXPECT_TRUE(bank.query_topk(unit({1, 0}), 50, 2.0).empty());
}

TEST(Query, SmallerThanK) {
  ContextBank bank;
  bank.insert(labelled(1, {1, 0}));
  bank.insert(labelled(2, {0, 1}));
  bank.insert(labelled(3, {1, 1}));
  auto n = bank.query_topk(unit({1, 0.1}), 50, 2.0);
  EXPECT_EQ(n.size(), 3u);
}

TEST(Query, TiesGoToLowerRoundId) {
  ContextBank bank;
  bank.insert(labelled(7, {0, 1}));
  bank.insert(labelled(3, {0, 1}));
  bank.insert(labelled(5, {0, 1}));
  auto n = bank.query_topk(unit({0, 1}), 2, 2.0);
  ASSERT_EQ(n.size(), 2u);
  EXPECT_EQ(n.entries[0].record->round_id, 3);
  EXPECT_EQ(n.entries[1].record->round_id, 5);
}

// Exhaustive scan + stable sort, compared against query_topk.
TEST(Query, MatchesExhaustiveScan) {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> g;
  std::uniform_int_distribution<int> size(0, 1000);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = trial == 0 ? 200 : size(rng);
    const std::size_t d = 2 + trial % 6;
    ContextBank bank;
    std::vector<std::pair<std::int64_t, std::vector<double>>> raw;
    for (int i = 0; i < n; ++i) {
      std::vector<double> v(d);
      for (auto& x : v) x = g(rng);
      // duplicate some directions to force ties
      if (i > 0 && i % 17 == 0) v = raw[i / 2].second;
      raw.emplace_back(i + 1, v);
      bank.insert(labelled(i + 1, v));
    }
    std::vector<double> qv(d);
    for (auto& x : qv) x = g(rng);
    const auto q = unit(qv);
    const std::size_t k = trial == 0 ? 10 : 1 + trial * 7;

    std::vector<std::pair<double, std::int64_t>> oracle;
    for (const auto& [id, v] : raw) {
      const auto u = unit(v);
      double dot = 0;
      for (std::size_t j = 0; j < d; ++j) dot += u.values()[j] * q.values()[j];
      oracle.emplace_back(std::pow(std::max(0.0, dot), 2.0), id);
    }
    std::sort(oracle.begin(), oracle.end(), [](auto a, auto b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    oracle.resize(std::min(oracle.size(), k));

    const auto got = bank.query_topk(q, k, 2.0);
    ASSERT_EQ(got.size(), oracle.size());
    for (std::size_t i = 0; i < oracle.size(); ++i) {
      EXPECT_EQ(got.entries[i].record->round_id, oracle[i].second);
      EXPECT_NEAR(got.entries[i].weight, oracle[i].first, 1e-12);
      EXPECT_GE(got.entries[i].weight, 0.0);
      EXPECT_LE(got.entries[i].weight, 1.0);
      if (i > 0) EXPECT_LE(got.entries[i].weight, got.entries[i - 1].weight);
    }
  }
}

TEST(Query, PrefixOfLargerQuery) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  ContextBank bank;
  for (int i = 1; i <= 300; ++i) bank.insert(labelled(i, {g(rng), g(rng), g(rng)}));
  const auto q = unit({0.2, 0.5, -0.1});
  const auto big = bank.query_topk(q, 120, 2.0);
  const auto small = bank.query_topk(q, 50, 2.0);
  const auto pre = big.prefix(50);
  ASSERT_EQ(pre.size(), small.size());
  for (std::size_t i = 0; i < pre.size(); ++i) {
    EXPECT_EQ(pre.entries[i].record, small.entries[i].record);
    EXPECT_EQ(pre.entries[i].weight, small.entries[i].weight);
  }
}

}  // namespace
}  // namespace scads
