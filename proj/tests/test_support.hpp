// Shared fixtures and brute-force oracles for the test binaries. The oracles
// are written from the definitions and never call into the library's own
// arithmetic.

#ifndef SCADS_TEST_SUPPORT_HPP
#define SCADS_TEST_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "scads/credit.hpp"
#include "scads/fusion.hpp"
#include "scads/game.hpp"
#include "scads/metrics.hpp"

namespace scads::testing {

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::filesystem::path fresh_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("scads_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// Random fusion inputs: rates in (0.02, 0.98), correlations in [0, rho_max].
inline RoundSignals random_signals(std::mt19937_64& rng, std::size_t n, std::size_t K,
                                   double rho_max = 0.5, double eps = kDefaultEpsilon) {
  std::uniform_real_distribution<double> rate(0.02, 0.98);
  std::uniform_real_distribution<double> corr(0.0, rho_max);
  std::bernoulli_distribution coin(0.5);
  RoundSignals s;
  s.priors.resize(K);
  for (auto& p : s.priors) p = rate(rng);
  s.reports.assign(n, BinaryVector(K));
  s.llr.assign(n, std::vector<double>(K));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < K; ++k) {
      ReliabilityEstimate e;
      e.alpha_pos = 1.0 + 40.0 * rate(rng);
      e.beta_pos = 1.0 + 40.0 * rate(rng);
      e.alpha_neg = 1.0 + 40.0 * rate(rng);
      e.beta_neg = 1.0 + 40.0 * rate(rng);
      s.reports[i][k] = coin(rng);
      s.llr[i][k] = llr(e, s.reports[i][k], eps);
    }
  }
  s.rho = CorrelationMatrix(n, K);
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) s.rho.set(i, j, k, corr(rng));
    }
  }
  return s;
}

inline std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> w(n);
  double sum = 0.0;
  for (auto& v : w) sum += (v = u(rng));
  for (auto& v : w) v /= sum;
  return w;
}

inline BinaryVector random_bits(std::mt19937_64& rng, std::size_t K, double p = 0.5) {
  std::bernoulli_distribution coin(p);
  BinaryVector b(K);
  for (auto& v : b) v = coin(rng);
  return b;
}

// ---- coalition game oracle ------------------------------------------------

inline double oracle_clip(double p, double eps) { return std::min(std::max(p, eps), 1.0 - eps); }

// q^(C)(k) from scratch: guardrail, weighted sum, logistic link.
inline double oracle_q(const std::vector<bool>& in, const RoundSignals& s,
                       const std::vector<double>& w, std::size_t k, double eps) {
  const double pi = s.priors[k];
  double sum = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (!in[i]) continue;
    any = true;
    double d = 1.0;
    for (std::size_t j = 0; j < in.size(); ++j) {
      if (j != i && in[j] && s.reports[j][k] == s.reports[i][k]) d += s.rho.at(i, j, k);
    }
    sum += w[i] * s.llr[i][k] / d;
  }
  if (!any || sum == 0.0) return pi;
  const double p = oracle_clip(pi, eps);
  const double z = std::log(p / (1.0 - p)) + sum;
  return oracle_clip(1.0 / (1.0 + std::exp(-z)), eps);
}

inline double oracle_value(const std::vector<bool>& in, const RoundSignals& s,
                           const std::vector<double>& w, const BinaryVector& y, double eps) {
  if (std::none_of(in.begin(), in.end(), [](bool b) { return b; })) return 0.0;
  double v = 0.0;
  for (std::size_t k = 0; k < s.n_labels(); ++k) {
    const double q = oracle_clip(oracle_q(in, s, w, k, eps), eps);
    const double p = oracle_clip(s.priors[k], eps);
    v += y[k] ? std::log(q) - std::log(p) : std::log(1.0 - q) - std::log(1.0 - p);
  }
  return v;
}

// phi_i = sum over C not containing i of |C|!(n-|C|-1)!/n! [v(C+i) - v(C)].
inline std::vector<double> oracle_shapley(const RoundSignals& s, const std::vector<double>& w,
                                          const BinaryVector& y, double eps) {
  const std::size_t n = s.n_experts();
  std::vector<double> phi(n, 0.0);
  const double n_fact = std::tgamma(static_cast<double>(n) + 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      std::vector<bool> in(n);
      std::size_t size = 0;
      for (std::size_t j = 0; j < n; ++j) {
        in[j] = (mask >> j) & 1u;
        size += in[j];
      }
      if (in[i]) continue;
      const double weight = std::tgamma(static_cast<double>(size) + 1.0) *
                            std::tgamma(static_cast<double>(n - size)) / n_fact;
      auto with = in;
      with[i] = true;
      phi[i] += weight * (oracle_value(with, s, w, y, eps) - oracle_value(in, s, w, y, eps));
    }
  }
  return phi;
}

// ---- metrics oracle -------------------------------------------------------

struct OracleMetrics {
  double hamming = 0.0;
  double micro = 0.0;
  double macro = 0.0;
  double jaccard = 0.0;
  std::vector<LabelCounts> counts;
};

inline OracleMetrics oracle_metrics(const std::vector<Prediction>& rounds) {
  OracleMetrics m;
  const std::size_t K = rounds.front().truth.size();
  m.counts.assign(K, {});
  for (const auto& r : rounds) {
    std::size_t diff = 0, inter = 0, uni = 0;
    for (std::size_t k = 0; k < K; ++k) {
      const bool y = r.truth[k], p = r.predicted[k];
      diff += y != p;
      inter += y && p;
      uni += y || p;
      if (y && p) m.counts[k].tp++;
      if (!y && p) m.counts[k].fp++;
      if (y && !p) m.counts[k].fn++;
      if (!y && !p) m.counts[k].tn++;
    }
    m.hamming += static_cast<double>(diff) / static_cast<double>(K);
    m.jaccard += uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
  }
  m.hamming /= static_cast<double>(rounds.size());
  m.jaccard /= static_cast<double>(rounds.size());

  auto f1 = [](double tp, double fp, double fn) {
    const double p = tp + fp == 0 ? 0.0 : tp / (tp + fp);
    const double r = tp + fn == 0 ? 0.0 : tp / (tp + fn);
    return p + r == 0 ? 0.0 : 2 * p * r / (p + r);
  };
  double tp = 0, fp = 0, fn = 0;
  for (const auto& c : m.counts) {
    tp += static_cast<double>(c.tp);
    fp += static_cast<double>(c.fp);
    fn += static_cast<double>(c.fn);
    m.macro += f1(static_cast<double>(c.tp), static_cast<double>(c.fp), static_cast<double>(c.fn));
  }
  m.macro /= static_cast<double>(K);
  m.micro = f1(tp, fp, fn);
  return m;
}

}  // namespace scads::testing

#endif  // SCADS_TEST_SUPPORT_HPP
