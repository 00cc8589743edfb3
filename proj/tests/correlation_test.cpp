#include "thsynergy/correlation.hpp"

#include <gtest/gtest.h>

#include <random>

namespace {

std::vector<double> brute_mid_ranks(const std::vector<double>& v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double below = 0, equal = 0;
    for (double x : v) {
      below += x < v[i];
      equal += x == v[i];
    }
    r[i] = below + (equal + 1) / 2;
  }
  return r;
}

ths::LabeledSeries labeled(const std::vector<double>& v, const std::string& prefix = "r") {
  ths::LabeledSeries s;
  for (std::size_t i = 0; i < v.size(); ++i) s.emplace_back(prefix + std::to_string(i), v[i]);
  return s;
}

TEST(Correlation, IdenticalSeriesAreExactlyOne) {
  const std::vector<double> v{3.5, -1.0, 2.25, 8.0, 0.0, 4.5};
  const auto c = ths::rank_correlations(labeled(v), labeled(v));
  EXPECT_EQ(c.pearson, 1.0);
  EXPECT_EQ(c.spearman, 1.0);
  EXPECT_EQ(c.n, v.size());
}

TEST(Correlation, ReversedRanks) {
  const std::vector<double> a{1, 2, 3, 4, 5};
  const std::vector<double> b{10, 8, 6, 4, 2};
  EXPECT_NEAR(ths::spearman(a, b), -1.0, 1e-12);
  EXPECT_NEAR(ths::pearson(a, b), -1.0, 1e-12);
}

TEST(Correlation, OneSwap) {
  const std::vector<double> a{1, 2, 3, 4};
  const std::vector<double> b{1, 2, 4, 3};
  EXPECT_NEAR(ths::spearman(a, b), 0.8, 1e-12);
}

TEST(Correlation, MidRanksMatchBruteForce) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v(2 + rng() % 30);
    for (auto& x : v) x = static_cast<double>(rng() % 6);  // heavy ties
    EXPECT_EQ(ths::mid_ranks(v), brute_mid_ranks(v));
  }
}

TEST(Correlation, TiedSpearmanIsPearsonOfMidRanks) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> a(5 + rng() % 20), b(a.size());
    for (auto& x : a) x = static_cast<double>(rng() % 4);
    for (auto& x : b) x = static_cast<double>(rng() % 5);
    a[0] = 0;
    a[1] = 3;
    b[0] = 0;
    b[1] = 4;
    EXPECT_NEAR(ths::spearman(a, b), ths::pearson(brute_mid_ranks(a), brute_mid_ranks(b)), 1e-12);
  }
}

TEST(Correlation, AffineAndMonotoneInvariance) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> a(20), b(20);
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = normal(rng);
      b[i] = a[i] + normal(rng);
    }
    std::vector<double> scaled(a.size()), cubed(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      scaled[i] = 3.0 * a[i] + 7.0;
      cubed[i] = a[i] * a[i] * a[i];
    }
    EXPECT_NEAR(ths::pearson(scaled, b), ths::pearson(a, b), 1e-12);
    EXPECT_NEAR(ths::spearman(cubed, b), ths::spearman(a, b), 1e-12);
    EXPECT_NEAR(ths::pearson(a, b), ths::pearson(b, a), 1e-15);
  }
}

TEST(Correlation, LabelsAreJoined) {
  const ths::LabeledSeries a{{"Jiangsu", 1}, {"Zhejiang", 2}, {"Beijing", 3}, {"Hainan", 4}};
  const ths::LabeledSeries b{{"Hainan", 40}, {"Beijing", 30}, {"Zhejiang", 20}, {"Xizang", -5}};
  const auto c = ths::rank_correlations(a, b);
  EXPECT_EQ(c.n, 3u);
  EXPECT_NEAR(c.spearman, 1.0, 1e-12);
}

TEST(Correlation, TooFewCommonLabels) {
  const ths::LabeledSeries a{{"x", 1}, {"y", 2}, {"z", 3}};
  const ths::LabeledSeries b{{"x", 1}, {"y", 2}, {"w", 3}};
  EXPECT_THROW(ths::rank_correlations(a, b), ths::DataError);
  const ths::LabeledSeries dup{{"x", 1}, {"x", 2}, {"z", 3}};
  EXPECT_THROW(ths::rank_correlations(dup, a), ths::ValidationError);
}

}  // namespace
