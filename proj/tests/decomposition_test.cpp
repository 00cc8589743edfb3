#include "thsynergy/decomposition.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "support.hpp"
#include "thsynergy/oracle.hpp"

namespace {

using ths::GroupedTriple;
using ths::InformationValue;

std::vector<GroupedTriple> tag(const std::vector<ths::CategorizedTriple>& v, const std::string& group) {
  std::vector<GroupedTriple> out;
  for (const auto& t : v) out.push_back({group, t});
  return out;
}

std::vector<GroupedTriple> random_grouped(std::mt19937_64& rng) {
  std::vector<GroupedTriple> out;
  const int groups = 1 + static_cast<int>(rng() % 5);
  for (int k = 0; k < groups; ++k) {
    auto part = ths::testing::random_triples(rng, 4, 60);
    for (auto& t : part) t.geography = "G" + std::to_string(k) + "-" + t.geography;
    auto tagged = tag(part, "P" + std::to_string(k));
    out.insert(out.end(), tagged.begin(), tagged.end());
  }
  return out;
}

TEST(Decompose, SingleGroupHasZeroResidual) {
  const auto records = tag(ths::testing::parity_triples(5), "only");
  const auto r = ths::decompose(records);
  ASSERT_EQ(r.groups.size(), 1u);
  EXPECT_EQ(r.groups[0].delta, r.total);
  EXPECT_EQ(r.residual.bits(), 0.0);
  EXPECT_NEAR(r.total.millibits(), -1000.0, 1e-9);
}

TEST(Decompose, IndependentGroupsLeaveEverythingToTheResidual) {
  auto records = tag(ths::testing::uniform_triples(2, "a-"), "A");
  auto b = ths::testing::uniform_triples(1, "b-");
  for (auto& t : b) t.technology = t.technology == "t0" ? "t2" : "t3";
  const auto tb = tag(b, "B");
  records.insert(records.end(), tb.begin(), tb.end());
  const auto r = ths::decompose(records);
  for (const auto& g : r.groups) {
    EXPECT_NEAR(g.within.bits(), 0.0, 1e-12);
  }
  EXPECT_NEAR(r.residual.bits(), r.total.bits(), 1e-12);
  // The pooled set is not independent: the technology code identifies the group.
  std::vector<ths::oracle::RawTriple> raw;
  for (const auto& g : records) raw.push_back({g.triple.geography, g.triple.organization, g.triple.technology});
  EXPECT_NEAR(r.total.bits(), ths::oracle::transmission3_bits(raw), 1e-12);
}

TEST(Decompose, GroupTermsMatchOracleAndResidualIdentityHolds) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const auto records = random_grouped(rng);
    const auto r = ths::decompose(records);
    std::uint64_t n = 0;
    for (const auto& g : r.groups) {
      n += g.n;
      std::vector<ths::oracle::RawTriple> raw;
      for (const auto& x : records)
        if (x.group == g.label) raw.push_back({x.triple.geography, x.triple.organization, x.triple.technology});
      EXPECT_NEAR(g.within.bits(), ths::oracle::transmission3_bits(raw), 1e-12);
      EXPECT_EQ(g.delta, ths::delta_contribution(g.n, r.n_total, g.within));
    }
    EXPECT_EQ(n, r.n_total);
    EXPECT_NEAR((r.residual + r.sum_delta()).bits(), r.total.bits(), 1e-12);
    EXPECT_TRUE(std::is_sorted(r.groups.begin(), r.groups.end(), [](const auto& a, const auto& b) {
      return a.delta.bits() < b.delta.bits() || (a.delta.bits() == b.delta.bits() && a.label < b.label);
    }));
  }
}

TEST(Decompose, DuplicationAndOrderDoNotMatter) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    auto records = random_grouped(rng);
    const auto ref = ths::decompose(records);

    auto doubled = records;
    doubled.insert(doubled.end(), records.begin(), records.end());
    const auto d = ths::decompose(doubled);
    ASSERT_EQ(d.groups.size(), ref.groups.size());
    EXPECT_NEAR(d.total.bits(), ref.total.bits(), 1e-12);
    EXPECT_NEAR(d.residual.bits(), ref.residual.bits(), 1e-12);
    for (std::size_t i = 0; i < ref.groups.size(); ++i) {
      EXPECT_EQ(d.groups[i].label, ref.groups[i].label);
      EXPECT_EQ(d.groups[i].n, 2 * ref.groups[i].n);
      EXPECT_NEAR(d.groups[i].within.bits(), ref.groups[i].within.bits(), 1e-12);
      EXPECT_NEAR(d.groups[i].delta.bits(), ref.groups[i].delta.bits(), 1e-12);
    }

    std::shuffle(records.begin(), records.end(), rng);
    const auto s = ths::decompose(records);
    ASSERT_EQ(s.groups.size(), ref.groups.size());
    for (std::size_t i = 0; i < ref.groups.size(); ++i) {
      EXPECT_EQ(s.groups[i].label, ref.groups[i].label);
      EXPECT_NEAR(s.groups[i].within.bits(), ref.groups[i].within.bits(), 1e-12);
    }
    EXPECT_NEAR(s.total.bits(), ref.total.bits(), 1e-12);
  }
}

TEST(Decompose, ThreadCountDoesNotChangeTheReport) {
  std::mt19937_64 rng(77);
  const auto records = random_grouped(rng);
  ths::DecomposeOptions one;
  const auto ref = ths::decompose(records, one);
  for (unsigned threads : {2u, 3u, 8u}) {
    ths::DecomposeOptions opt;
    opt.threads = threads;
    EXPECT_EQ(ths::decompose(records, opt), ref);
  }
}

TEST(Decompose, RejectsGroupingAtTheGeographyLevel) {
  const auto records = tag(ths::testing::parity_triples(), "x");
  ths::DecomposeOptions opt;
  opt.grouping_level = 3;
  EXPECT_THROW(ths::decompose(records, opt), ths::ConfigError);
  EXPECT_THROW(ths::decompose({}), ths::DataError);
}

TEST(Decompose, MinimumGroupSizeMovesSmallGroupsIntoTheResidual) {
  auto records = tag(ths::testing::parity_triples(10), "big");
  const auto small = tag(ths::testing::parity_triples(1), "small");
  records.insert(records.end(), small.begin(), small.end());
  ths::DecomposeOptions opt;
  opt.min_group_size = 5;
  const auto r = ths::decompose(records, opt);
  ASSERT_EQ(r.groups.size(), 1u);
  EXPECT_EQ(r.groups[0].label, "big");
  EXPECT_EQ(r.n_total, 44u);
  EXPECT_NEAR((r.residual + r.sum_delta()).bits(), r.total.bits(), 1e-15);
}

TEST(DeltaContribution, Examples) {
  const auto tg = InformationValue::from_millibits(-10.0);
  EXPECT_EQ(ths::delta_contribution(100, 100, tg), tg);
  EXPECT_EQ(ths::delta_contribution(0, 100, tg).millibits(), 0.0);
  EXPECT_DOUBLE_EQ(ths::delta_contribution(50, 100, tg).millibits(), -5.0);
  EXPECT_THROW(ths::delta_contribution(0, 0, tg), ths::DataError);
}

TEST(ShareAboveGroup, Examples) {
  using M = InformationValue;
  EXPECT_NEAR(ths::share_above_group(M::from_millibits(-35.46), M::from_millibits(-196.48)), 18.05, 0.005);
  EXPECT_EQ(ths::share_above_group(M{}, M::from_millibits(-196.48)), 0.0);
  EXPECT_NEAR(ths::share_above_group(M::from_millibits(-40.84), M::from_millibits(-183.42)), 22.27, 0.005);
  EXPECT_THROW(ths::share_above_group(M::from_millibits(1.0), M{}), ths::DataError);
}

TEST(AssembleReport, DropsEmptyGroupsAndSortsByDelta) {
  using M = InformationValue;
  std::vector<ths::GroupContribution> groups{
      ths::contribution_from_delta("Hainan", 431, 1000, M::from_millibits(-0.54)),
      ths::contribution_from_delta("Jiangsu", 500, 1000, M::from_millibits(-12.48)),
      ths::contribution_from_delta("Nowhere", 0, 1000, M{})};
  const auto r = ths::assemble_report(M::from_millibits(-20.0), 1000, groups, 1);
  ASSERT_EQ(r.groups.size(), 2u);
  EXPECT_EQ(r.groups[0].label, "Jiangsu");
  EXPECT_EQ(r.groups[1].label, "Hainan");
  EXPECT_NEAR(r.groups[0].within.millibits(), -24.96, 1e-9);
  EXPECT_NEAR(r.residual.millibits(), -20.0 + 12.48 + 0.54, 1e-9);
}

}  // namespace
