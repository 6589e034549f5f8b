#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "peergroup/error.hpp"
#include "peergroup/preprocess.hpp"

using namespace peergroup;

namespace {

FeatureTable table_of(const Eigen::MatrixXd& values) {
  FeatureTable t;
  for (Eigen::Index i = 0; i < values.rows(); ++i) t.ids.push_back("r" + std::to_string(i));
  for (Eigen::Index j = 0; j < values.cols(); ++j) {
    t.specs.push_back({"v" + std::to_string(j + 1), VariableKind::continuous});
  }
  t.values = values;
  return t;
}

Eigen::MatrixXd gaussian(std::size_t n, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = normal(rng);
  }
  return x;
}

}  // namespace

TEST(Transform, LogitValues) {
  const std::vector<double> v{0.5, 0.8};
  const auto t = transform_variable(v, VariableKind::proportion, 2);
  EXPECT_NEAR(t[0], 0.0, 1e-15);
  EXPECT_NEAR(t[1], std::log(4.0), 1e-12);
}

TEST(Transform, BoundaryShiftUsesSampleSize) {
  const std::vector<double> v{0.0, 1.0};
  const auto t = transform_variable(v, VariableKind::proportion, 50);
  EXPECT_NEAR(t[0], -4.59511985013459, 1e-10);
  EXPECT_NEAR(t[1], 4.59511985013459, 1e-10);
}

TEST(Transform, SkewedPositiveIsNaturalLog) {
  const std::vector<double> v{1.0, std::exp(2.0)};
  const auto t = transform_variable(v, VariableKind::skewed_positive, 2);
  EXPECT_DOUBLE_EQ(t[0], 0.0);
  EXPECT_NEAR(t[1], 2.0, 1e-14);
}

TEST(Transform, OutOfDomainNamesVariableAndRow) {
  const std::vector<double> bad{0.2, 1.5};
  try {
    transform_variable(bad, VariableKind::proportion, 2, "share");
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("share"), std::string::npos);
    EXPECT_NE(msg.find('2'), std::string::npos);
  }
  const std::vector<double> neg{1.0, 0.0};
  EXPECT_THROW(transform_variable(neg, VariableKind::skewed_positive, 2, "size"), DomainError);
}

TEST(Transform, LogitIsStrictlyIncreasing) {
  std::vector<double> v;
  for (int i = 0; i <= 100; ++i) v.push_back(i / 100.0);
  const auto t = transform_variable(v, VariableKind::proportion, v.size());
  for (std::size_t i = 1; i < t.size(); ++i) EXPECT_LT(t[i - 1], t[i]);
}

TEST(Transform, KindTokensRoundTrip) {
  for (auto k : {VariableKind::continuous, VariableKind::proportion, VariableKind::skewed_positive}) {
    EXPECT_EQ(parse_variable_kind(to_string(k)), k);
  }
  try {
    parse_variable_kind("ordinal");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("ordinal"), std::string::npos);
  }
}

TEST(Standardize, SimpleColumn) {
  Eigen::MatrixXd x(3, 1);
  x << 1, 2, 3;
  const auto s = standardize(table_of(x));
  EXPECT_TRUE(s.standardized);
  EXPECT_NEAR(s.values(0, 0), -1.0, 1e-15);
  EXPECT_NEAR(s.values(1, 0), 0.0, 1e-15);
  EXPECT_NEAR(s.values(2, 0), 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(s.center(0), 2.0);
  EXPECT_DOUBLE_EQ(s.scale(0), 1.0);
}

TEST(Standardize, ZeroVarianceNamesColumn) {
  Eigen::MatrixXd x(3, 2);
  x << 1, 5, 2, 5, 3, 5;
  try {
    standardize(table_of(x));
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("v2"), std::string::npos);
  }
}

TEST(Standardize, RejectsFlaggedTableAndIsIdempotentOnUnitData) {
  auto s = standardize(table_of(gaussian(40, 3, 1)));
  EXPECT_THROW(standardize(s), ConfigError);
  FeatureTable copy = s;
  copy.standardized = false;
  const auto again = standardize(copy);
  EXPECT_LT((again.values - s.values).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Standardize, InverseRecoversInput) {
  Eigen::MatrixXd x = gaussian(30, 4, 2) * 7.0;
  x.array() += 3.0;
  const auto t = table_of(x);
  const auto back = unstandardize(standardize(t));
  EXPECT_LT((back.values - x).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_FALSE(back.standardized);
  EXPECT_TRUE(is_standardized(standardize(t), 1e-9));
}

// VIF_j is the j-th diagonal entry of the inverse correlation matrix.
TEST(Vif, MatchesInverseCorrelationDiagonal) {
  Eigen::MatrixXd x = gaussian(60, 4, 3);
  x.col(3) = 0.7 * x.col(0) + 0.5 * x.col(1) + 0.3 * x.col(3);
  const auto s = standardize(table_of(x));
  const Eigen::MatrixXd corr = s.values.transpose() * s.values / 59.0;
  const Eigen::VectorXd oracle = corr.inverse().diagonal();
  const auto vif = variance_inflation_factors(s.values);
  for (int j = 0; j < 4; ++j) EXPECT_NEAR(vif[static_cast<std::size_t>(j)], oracle(j), 1e-8 * oracle(j));
}

TEST(Vif, DuplicatedColumnRemovesLaterCopy) {
  Eigen::MatrixXd x = gaussian(50, 2, 4);
  Eigen::MatrixXd y(50, 3);
  y << x.col(0), x.col(0), x.col(1);
  const auto r = vif_prune(standardize(table_of(y)), 10.0);
  ASSERT_EQ(r.removed.size(), 1u);
  EXPECT_EQ(r.removed[0].variable, "v2");
  EXPECT_TRUE(std::isinf(r.removed[0].vif));
  EXPECT_EQ(r.retained.variable_names(), (std::vector<std::string>{"v1", "v3"}));
}

TEST(Vif, OrthogonalColumnsKeepEverything) {
  Eigen::MatrixXd x(4, 3);
  x << 1, 1, 1, -1, 1, -1, 1, -1, -1, -1, -1, 1;
  const auto r = vif_prune(standardize(table_of(x)), 10.0);
  EXPECT_TRUE(r.removed.empty());
  for (double v : r.final_vif) EXPECT_NEAR(v, 1.0, 1e-12);
}

TEST(Vif, ThreePlantedCombinationsOfFourteen) {
  Eigen::MatrixXd base = gaussian(300, 11, 5);
  Eigen::MatrixXd noise = gaussian(300, 3, 6) * 0.01;
  Eigen::MatrixXd x(300, 14);
  x.leftCols(11) = base;
  x.col(11) = base.col(0) + base.col(1) + noise.col(0);
  x.col(12) = base.col(2) - 2.0 * base.col(3) + noise.col(1);
  x.col(13) = base.col(4) + base.col(5) + base.col(6) + noise.col(2);
  const auto r = vif_prune(standardize(table_of(x)), 10.0);
  EXPECT_EQ(r.removed.size(), 3u);
  EXPECT_EQ(r.retained.cols(), 11u);
}

TEST(Vif, StopsWithWarningBelowThreeVariables) {
  Eigen::MatrixXd x = gaussian(30, 1, 7);
  Eigen::MatrixXd y(30, 2);
  y << x.col(0), x.col(0) * 2.0;
  const auto r = vif_prune(standardize(table_of(y)), 10.0);
  EXPECT_TRUE(r.removed.empty());
  EXPECT_EQ(r.warnings.size(), 1u);
}

TEST(Vif, NeverLeavesPerfectlyCorrelatedPair) {
  for (std::uint64_t seed = 10; seed < 20; ++seed) {
    Eigen::MatrixXd x = gaussian(40, 5, seed);
    Eigen::MatrixXd y(40, 7);
    y << x, x.col(1), x.col(3) * -3.0;
    const auto r = vif_prune(standardize(table_of(y)), 10.0);
    const auto& v = r.retained.values;
    const Eigen::MatrixXd corr = v.transpose() * v / 39.0;
    for (Eigen::Index a = 0; a < corr.rows(); ++a) {
      for (Eigen::Index b = a + 1; b < corr.cols(); ++b) EXPECT_LT(std::abs(corr(a, b)), 1.0 - 1e-9);
    }
  }
}

TEST(Pit, RankFormula) {
  const std::vector<double> v{3, 1, 2};
  const auto u = pit(v);
  EXPECT_NEAR(u[0], 5.0 / 6.0, 1e-15);
  EXPECT_NEAR(u[1], 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(u[2], 0.5, 1e-15);
  EXPECT_EQ(pit(std::vector<double>{7})[0], 0.5);
  const auto tied = pit(std::vector<double>{4, 4});
  EXPECT_EQ(tied[0], 0.5);
  EXPECT_EQ(tied[1], 0.5);
}

TEST(Pit, KolmogorovSmirnovUniformity) {
  for (std::size_t n : {10u, 57u, 400u}) {
    const auto x = gaussian(n, 1, n);
    const auto u = pit(std::vector<double>(x.data(), x.data() + x.size()));
    std::vector<double> sorted = u;
    std::sort(sorted.begin(), sorted.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double lo = static_cast<double>(i) / static_cast<double>(n);
      const double hi = static_cast<double>(i + 1) / static_cast<double>(n);
      ks = std::max({ks, std::abs(sorted[i] - lo), std::abs(hi - sorted[i])});
    }
    EXPECT_LT(ks, 1.36 / std::sqrt(static_cast<double>(n)));
    for (double v : u) {
      EXPECT_GT(v, 0.0);
      EXPECT_LT(v, 1.0);
    }
  }
}

TEST(Quintile, TenDistinctValues) {
  std::vector<double> v{9, 0, 8, 1, 7, 2, 6, 3, 5, 4};
  const auto b = quintile_bin(pit(v));
  for (std::size_t i = 0; i < v.size(); ++i) {
    EXPECT_EQ(b.bins[i], static_cast<int>(v[i]) / 2 + 1);
  }
}

TEST(Quintile, SevenValuesRoundingRule) {
  std::vector<double> v{0, 1, 2, 3, 4, 5, 6};
  const auto b = quintile_bin(pit(v));
  EXPECT_EQ(b.bins, (std::vector<int>{1, 1, 2, 3, 3, 4, 5}));
}

TEST(Quintile, AllTiedIsDegenerate) {
  const auto b = quintile_bin(pit(std::vector<double>(6, 2.5)));
  EXPECT_TRUE(b.degenerate);
  for (int bin : b.bins) EXPECT_EQ(bin, 3);
}

TEST(Quintile, CountsDifferByAtMostOne) {
  std::mt19937_64 rng(11);
  for (std::size_t n = 1; n <= 60; ++n) {
    const auto x = gaussian(n, 1, rng());
    const auto b = quintile_bin(pit(std::vector<double>(x.data(), x.data() + x.size())));
    std::array<std::size_t, 5> counts{};
    for (int bin : b.bins) ++counts[static_cast<std::size_t>(bin - 1)];
    EXPECT_LE(*std::max_element(counts.begin(), counts.end()) -
                  *std::min_element(counts.begin(), counts.end()),
              1u)
        << "n = " << n;
  }
}

TEST(PercentileTable, BuildsBinsAndFlagsTies) {
  Eigen::MatrixXd x(5, 2);
  x << 1, 4, 2, 4, 3, 4, 4, 4, 5, 4;
  const auto p = percentile_table(table_of(x));
  EXPECT_EQ(p.bins(0, 0), 1);
  EXPECT_EQ(p.bins(4, 0), 5);
  EXPECT_EQ(p.bins(2, 1), 3);
  EXPECT_EQ(p.warnings.size(), 1u);
  EXPECT_EQ(p.column("v2"), 1u);
  EXPECT_THROW(p.column("nope"), Error);
}

TEST(FeatureTable, ValidateRejectsDuplicatesAndNonFinite) {
  Eigen::MatrixXd x(2, 1);
  x << 1, 2;
  auto t = table_of(x);
  t.ids[1] = t.ids[0];
  EXPECT_THROW(t.validate(), Error);
  t = table_of(x);
  t.values(0, 0) = std::nan("");
  EXPECT_THROW(t.validate(), Error);
}
