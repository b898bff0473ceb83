// Copyright 2026 The sublink Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sublink/eval.hpp"

namespace sublink {
namespace {

std::vector<double> draws(std::size_t n, std::uint64_t seed, double shift, bool coarse) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(shift, 1.0);
  std::vector<double> out(n);
  // Coarse rounding forces many ties.
  for (double& v : out) v = coarse ? std::round(d(rng) * 2.0) / 2.0 : d(rng);
  return out;
}

TEST(Auc, Examples) {
  EXPECT_EQ(auc(std::vector<double>{0.9, 0.8}, std::vector<double>{0.1, 0.2}), 1.0);
  EXPECT_EQ(auc(std::vector<double>{0.1}, std::vector<double>{0.9}), 0.0);
  EXPECT_EQ(auc(std::vector<double>{0.5, 0.5}, std::vector<double>{0.5}), 0.5);
  EXPECT_EQ(auc(std::vector<double>{0.8, 0.4}, std::vector<double>{0.6, 0.2}), 0.75);
  EXPECT_THROW(auc(std::vector<double>{}, std::vector<double>{1.0}), std::invalid_argument);
  EXPECT_THROW(auc(std::vector<double>{NAN}, std::vector<double>{1.0}), std::invalid_argument);
}

TEST(Auc, MatchesPairwiseOracle) {
  for (std::uint64_t seed = 0; seed < 20; ++seed)
    for (bool coarse : {false, true}) {
      const auto pos = draws(37 + seed, seed, 0.5, coarse);
      const auto neg = draws(53, seed + 100, 0.0, coarse);
      EXPECT_DOUBLE_EQ(auc(pos, neg), oracle::pairwise_auc(pos, neg));
    }
}

TEST(Auc, ComplementAndMonotoneInvariance) {
  const auto pos = draws(40, 1, 0.3, true);
  const auto neg = draws(60, 2, 0.0, true);
  EXPECT_DOUBLE_EQ(auc(pos, neg) + auc(neg, pos), 1.0);
  auto f = [](std::vector<double> v) {
    for (double& x : v) x = std::exp(3.0 * x) + 7.0;
    return v;
  };
  EXPECT_EQ(auc(f(pos), f(neg)), auc(pos, neg));
}

TEST(Hits, Examples) {
  const std::vector<double> neg{0.9, 0.5, 0.3, 0.1};
  EXPECT_EQ(hits_at_k(std::vector<double>{0.95, 0.6, 0.4}, neg, 1), 1.0 / 3.0);
  EXPECT_EQ(hits_at_k(std::vector<double>{0.95, 0.6, 0.4}, neg, 2), 2.0 / 3.0);
  // Ties with the threshold are misses.
  EXPECT_EQ(hits_at_k(std::vector<double>{0.5}, neg, 2), 0.0);
  EXPECT_THROW(hits_at_k(std::vector<double>{1.0}, neg, 5), std::invalid_argument);
  EXPECT_THROW(hits_at_k(std::vector<double>{1.0}, neg, 0), std::invalid_argument);
}

TEST(Hits, MatchesRankOracle) {
  for (std::uint64_t seed = 0; seed < 20; ++seed)
    for (bool coarse : {false, true}) {
      const auto pos = draws(30, seed, 1.0, coarse);
      const auto neg = draws(80, seed + 50, 0.0, coarse);
      for (std::size_t k : {1u, 5u, 20u, 80u}) EXPECT_DOUBLE_EQ(hits_at_k(pos, neg, k), oracle::rank_hits(pos, neg, k));
    }
}

TEST(Stats, MeanAndStddev) {
  const std::vector<double> v{2, 4, 4, 4, 5, 5, 7, 9};
  EXPECT_DOUBLE_EQ(mean(v), 5.0);
  EXPECT_DOUBLE_EQ(stddev(v), std::sqrt(32.0 / 7.0));
  EXPECT_EQ(stddev(std::vector<double>{3.0}), 0.0);
}

TEST(Welch, IdenticalSamplesGivePOne) {
  const std::vector<double> a{1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(welch_t_test(a, a).p_value, 1.0);
  EXPECT_EQ(welch_t_test(std::vector<double>{2, 2}, std::vector<double>{2, 2}).p_value, 1.0);
  EXPECT_EQ(welch_t_test(std::vector<double>{2, 2}, std::vector<double>{3, 3}).p_value, 0.0);
  EXPECT_THROW(welch_t_test(std::vector<double>{1}, a), std::invalid_argument);
}

TEST(Welch, SeparatedSamplesAreSignificant) {
  const auto a = draws(10, 3, 0.0, false);
  auto b = a;
  for (double& x : b) x += 10.0;
  EXPECT_LT(welch_t_test(a, b).p_value, 1e-3);
}

TEST(Welch, StatisticAndDegreesOfFreedom) {
  const std::vector<double> a{19.8, 20.4, 19.6, 17.8, 18.5, 18.9, 18.3, 18.9, 19.5, 22.0};
  const std::vector<double> b{28.2, 26.6, 20.1, 23.3, 25.2, 22.1, 17.7, 27.6, 20.6, 13.7, 23.2, 17.5, 20.6, 18.0,
                              23.9, 21.6, 24.3, 20.4, 23.9, 13.3};
  const double va = stddev(a) * stddev(a) / 10.0, vb = stddev(b) * stddev(b) / 20.0;
  const double t = (mean(a) - mean(b)) / std::sqrt(va + vb);
  const double dof = (va + vb) * (va + vb) / (va * va / 9.0 + vb * vb / 19.0);
  const auto r = welch_t_test(a, b);
  EXPECT_NEAR(r.t, t, 1e-12);
  EXPECT_NEAR(r.dof, dof, 1e-9);
  EXPECT_NEAR(r.p_value, oracle::t_two_sided_p(t, dof), 1e-6);
}

TEST(Welch, MatchesTabulatedCriticalValues) {
  // Student t critical values at the two-sided 5% level.
  EXPECT_NEAR(oracle::t_two_sided_p(2.228, 10), 0.05, 1e-3);
  EXPECT_NEAR(oracle::t_two_sided_p(2.086, 20), 0.05, 1e-3);
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const auto a = draws(5 + seed % 4, seed, 0.0, false);
    const auto b = draws(6 + seed % 3, seed + 7, 0.8, false);
    const auto r = welch_t_test(a, b);
    EXPECT_NEAR(r.p_value, oracle::t_two_sided_p(r.t, r.dof), 1e-6);
  }
}

std::vector<Embedding> cloud(std::size_t n, std::uint64_t seed, double shift) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<Embedding> out(n, Embedding(4));
  for (auto& e : out)
    for (std::size_t c = 0; c < 4; ++c) e[c] = d(rng) + (c == 0 ? shift : 0.0);
  return out;
}

TEST(Probe, IdenticalEmbeddingsGiveChance) {
  const std::vector<Embedding> same(50, Embedding{1.0, 2.0});
  EXPECT_EQ(distribution_gap_probe(same, same, 1), 0.5);
}

TEST(Probe, SameDistributionStaysNearChance) {
  double total = 0.0;
  for (std::uint64_t s = 0; s < 5; ++s) total += distribution_gap_probe(cloud(150, s, 0.0), cloud(150, s + 50, 0.0), s);
  EXPECT_NEAR(total / 5.0, 0.5, 0.1);
}

TEST(Probe, SeparableSetsAreDetected) {
  EXPECT_EQ(distribution_gap_probe(cloud(100, 1, 8.0), cloud(100, 2, -8.0), 3), 1.0);
}

TEST(Probe, Deterministic) {
  const auto a = cloud(80, 4, 0.5), b = cloud(90, 5, 0.0);
  EXPECT_EQ(distribution_gap_probe(a, b, 7), distribution_gap_probe(a, b, 7));
}

}  // namespace
}  // namespace sublink
