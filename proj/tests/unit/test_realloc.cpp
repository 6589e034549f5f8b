#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "oracles.hpp"
#include "peergroup/error.hpp"
#include "peergroup/realloc.hpp"
#include "peergroup/synthetic.hpp"

using namespace peergroup;

namespace {

struct Scenario {
  DissimilarityMatrix d_new;
  Partition previous;
  std::vector<std::size_t> drifted;
};

Scenario drifted(std::uint64_t seed, std::size_t drift = 5) {
  const std::vector<std::size_t> sizes{30, 30, 30};
  const auto years = synthetic::drifted_years(sizes, 2, 8.0, 1.0, drift, seed);
  return {euclidean_dissimilarity(years.second.ids, years.second.values), years.first.truth,
          years.drifted};
}

}  // namespace

TEST(Grid, DefaultHasTwentyPoints) {
  const auto g = reallocation_grid();
  ASSERT_EQ(g.size(), 20u);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_NEAR(g.back(), 0.95, 1e-12);
  EXPECT_THROW(reallocation_grid(0.0), ConfigError);
}

TEST(ReallocConfig, Validation) {
  ReallocConfig c;
  EXPECT_NO_THROW(c.validate());
  c.p_grid = {};
  EXPECT_THROW(c.validate(), ConfigError);
  c.p_grid = {0.2, 0.1};
  EXPECT_THROW(c.validate(), ConfigError);
  c.p_grid = {0.0, 0.99};
  EXPECT_THROW(c.validate(), ConfigError);
  c = ReallocConfig{};
  c.pcr_min = 1.2;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Flag, ZeroFlagsNothingAndMaxFlagsCeiling) {
  const auto s = drifted(1);
  const auto none = flag_for_reallocation(s.d_new, s.previous, 0.0);
  EXPECT_TRUE(none.flagged.empty());
  EXPECT_EQ(none.partial, s.previous);
  const auto most = flag_for_reallocation(s.d_new, s.previous, 0.95);
  EXPECT_EQ(most.flagged.size(), static_cast<std::size_t>(std::ceil(0.95 * 90)));
  std::vector<char> flagged(90, 0);
  for (auto i : most.flagged) flagged[i] = 1;
  std::set<int> retained;
  for (std::size_t i = 0; i < 90; ++i) {
    if (!flagged[i]) retained.insert(s.previous.label(i));
  }
  EXPECT_EQ(most.partial.cluster_count(), most.flagged.size() + retained.size());
}

TEST(Flag, WorstSilhouettesFirstTiesById) {
  const auto s = drifted(2);
  const auto f = flag_for_reallocation(s.d_new, s.previous, 0.3);
  for (std::size_t a = 1; a < f.flagged.size(); ++a) {
    EXPECT_LE(f.silhouette[f.flagged[a - 1]], f.silhouette[f.flagged[a]]);
  }
  std::vector<char> is_flagged(90, 0);
  for (auto i : f.flagged) is_flagged[i] = 1;
  const double worst_kept = [&] {
    double m = 1e300;
    for (std::size_t i = 0; i < 90; ++i) {
      if (!is_flagged[i]) m = std::min(m, f.silhouette[i]);
    }
    return m;
  }();
  EXPECT_LE(f.silhouette[f.flagged.back()], worst_kept);
}

TEST(Flag, PlantedDriftIsFlagged) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto s = drifted(seed);
    const auto f = flag_for_reallocation(s.d_new, s.previous, 5.0 / 90.0);
    auto sorted = f.flagged;
    std::sort(sorted.begin(), sorted.end());
    EXPECT_EQ(sorted, s.drifted) << "seed " << seed;
  }
}

TEST(Flag, SingleClusterPreviousThrows) {
  const auto s = drifted(1);
  EXPECT_THROW(flag_for_reallocation(s.d_new, Partition::single_cluster(s.d_new.ids()), 0.1),
               DomainError);
  EXPECT_THROW(flag_for_reallocation(s.d_new, s.previous, 0.99), ConfigError);
}

TEST(Reallocate, ZeroProportionKeepsEveryConnection) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 6 + rng() % 40;
    const auto d = oracle::random_dissimilarity(n, rng);
    const auto prev = oracle::random_partition(n, 2 + rng() % 3, rng);
    if (prev.cluster_count() < 2 || prev.largest_cluster() < 2) continue;
    const std::size_t cap = prev.largest_cluster() + rng() % 5;
    const auto r = reallocate(d, prev, 0.0, Linkage::average, FitIndex::ch, cap);
    EXPECT_EQ(pcr(prev, r.partition), 1.0);
    EXPECT_LE(r.partition.largest_cluster(), cap);
  }
}

TEST(Reallocate, CapBelowRetainedClusterIsAnError) {
  const auto s = drifted(1);
  try {
    reallocate(s.d_new, s.previous, 0.0, Linkage::ward, FitIndex::ch, 10);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("fresh"), std::string::npos);
  }
}

TEST(Reallocate, RetainedClustersAreNeverSplit) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = drifted(10 + static_cast<std::uint64_t>(trial));
    const double p = 0.05 * static_cast<double>(rng() % 20);
    const auto r = reallocate(s.d_new, s.previous, p, Linkage::ward, FitIndex::ch, 45);
    std::vector<char> flagged(90, 0);
    for (auto i : r.flagged) flagged[i] = 1;
    for (std::size_t i = 0; i < 90; ++i) {
      for (std::size_t j = i + 1; j < 90; ++j) {
        if (flagged[i] || flagged[j] || !s.previous.same_cluster(i, j)) continue;
        EXPECT_TRUE(r.partition.same_cluster(i, j));
      }
    }
    EXPECT_LE(r.partition.largest_cluster(), 45u);
  }
}

TEST(Reallocate, DriftedPointsJoinTheirNewGroup) {
  const auto s = drifted(7);
  const auto r = reallocate(s.d_new, s.previous, 0.1, Linkage::ward, FitIndex::ch, 60);
  const auto fresh = kirigami2(s.d_new, Linkage::ward, FitIndex::ch, 60).partition;
  for (auto i : s.drifted) {
    // Same companions as a fresh clustering of the new year: the members of group 2.
    EXPECT_TRUE(r.partition.same_cluster(i, 45));
    EXPECT_TRUE(fresh.same_cluster(i, 45));
  }
}

TEST(Reallocate, HighProportionOnStationaryDataMatchesFreshClustering) {
  const std::vector<std::size_t> sizes{30, 30, 30};
  const auto years = synthetic::drifted_years(sizes, 2, 8.0, 1.0, 0, 3);
  const auto d = euclidean_dissimilarity(years.second.ids, years.second.values);
  const auto r = reallocate(d, years.first.truth, 0.95, Linkage::ward, FitIndex::ch, 60);
  const auto fresh = kirigami2(d, Linkage::ward, FitIndex::ch, 60).partition;
  EXPECT_GE(pcr(fresh, r.partition), 0.9);
  EXPECT_GE(pcr(r.partition, fresh), 0.9);
}

TEST(ReallocatedCount, MapsByMaximumOverlap) {
  const std::vector<std::string> ids{"a", "b", "c", "d", "e", "f"};
  const std::vector<int> prev{1, 1, 1, 2, 2, 2}, cur{1, 1, 2, 2, 2, 2}, same{3, 3, 3, 1, 1, 1};
  EXPECT_EQ(reallocated_count(Partition(ids, prev), Partition(ids, cur)), 1u);
  EXPECT_EQ(reallocated_count(Partition(ids, prev), Partition(ids, same)), 0u);
}

TEST(Tradeoff, GridZeroOnlyAndPerPointErrors) {
  const auto s = drifted(1);
  ReallocConfig cfg;
  cfg.p_grid = {0.0};
  cfg.cap = 60;
  auto curve = tradeoff_grid(s.d_new, s.previous, cfg);
  ASSERT_EQ(curve.rows.size(), 1u);
  EXPECT_EQ(curve.rows[0].pcr, 1.0);
  EXPECT_TRUE(curve.rows[0].ok());
  cfg.cap = 10;
  curve = tradeoff_grid(s.d_new, s.previous, cfg);
  EXPECT_FALSE(curve.rows[0].ok());
}

TEST(Tradeoff, StationaryCurveStartsAtOne) {
  const std::vector<std::size_t> sizes{30, 30};
  const auto years = synthetic::drifted_years(sizes, 2, 8.0, 1.0, 0, 5);
  const auto d = euclidean_dissimilarity(years.second.ids, years.second.values);
  ReallocConfig cfg;
  cfg.cap = 60;
  const auto curve = tradeoff_grid(d, years.first.truth, cfg);
  ASSERT_EQ(curve.rows.size(), 20u);
  EXPECT_EQ(curve.rows[0].pcr, 1.0);
  for (const auto& row : curve.rows) {
    ASSERT_TRUE(row.ok()) << row.error;
    EXPECT_LE(row.partition->largest_cluster(), 60u);
  }
}

TEST(SelectStable, FloorTiesAndInfeasibility) {
  TradeoffCurve c;
  auto row = [](double p, double pcr, double index) {
    TradeoffRow r;
    r.p = p;
    r.pcr = pcr;
    r.index = index;
    return r;
  };
  c.rows = {row(0.0, 1.0, 10.0), row(0.1, 0.95, 12.0), row(0.2, 0.97, 12.0), row(0.3, 0.5, 50.0)};
  EXPECT_EQ(select_stable(c, 0.9).p, 0.2);
  EXPECT_EQ(select_stable(c, 1.0).p, 0.0);
  EXPECT_EQ(select_stable(c, 0.0).p, 0.3);
  c.rows.push_back(row(0.4, 0.95, 12.0));
  EXPECT_EQ(select_stable(c, 0.9).p, 0.2);
  TradeoffCurve low;
  low.rows = {row(0.0, 0.8, 1.0), row(0.1, 0.85, 2.0)};
  try {
    select_stable(low, 0.9);
    FAIL();
  } catch (const InfeasibleStabilityError& e) {
    EXPECT_DOUBLE_EQ(e.max_achievable_pcr(), 0.85);
    EXPECT_NE(std::string(e.what()).find("0.85"), std::string::npos);
  }
}
