#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "peergroup/dpmm.hpp"
#include "peergroup/error.hpp"
#include "peergroup/synthetic.hpp"

using namespace peergroup;

namespace {

DpmmConfig quick(std::size_t iterations = 600, std::size_t burn_in = 100) {
  DpmmConfig c;
  c.iterations = iterations;
  c.burn_in = burn_in;
  c.thin = 2;
  c.chains = 2;
  return c;
}

FeatureTable two_blobs(std::uint64_t seed) {
  const std::vector<std::size_t> sizes{30, 30};
  return standardize(synthetic::separated_blobs(sizes, 2, 10.0, 1.0, seed).table);
}

double block_mean(const DissimilarityMatrix& d, bool within) {
  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < 60; ++i) {
    for (std::size_t j = i + 1; j < 60; ++j) {
      if ((i < 30) == (j < 30) && within) {
        total += d(i, j);
        ++count;
      } else if ((i < 30) != (j < 30) && !within) {
        total += d(i, j);
        ++count;
      }
    }
  }
  return total / static_cast<double>(count);
}

ChainResult fake_chain(std::vector<std::string> ids, std::int64_t together, std::size_t samples) {
  ChainResult c;
  c.ids = std::move(ids);
  c.samples_used = samples;
  c.coassignment = CountMatrix::Constant(2, 2, together);
  c.coassignment.diagonal().setConstant(static_cast<std::int64_t>(samples));
  return c;
}

}  // namespace

TEST(DpmmConfig, ValidatesDomains) {
  DpmmConfig c;
  EXPECT_NO_THROW(c.validate(3));
  c.burn_in = c.iterations;
  EXPECT_THROW(c.validate(), ConfigError);
  c = DpmmConfig{};
  c.thin = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = DpmmConfig{};
  c.chains = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = DpmmConfig{};
  c.base_measure = {NormalInverseGamma{0.0, 0.0, 2.0, 1.0}};
  EXPECT_THROW(c.validate(), ConfigError);
  c = DpmmConfig{};
  c.alpha_prior.rate = -1.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = DpmmConfig{};
  c.base_measure = {NormalInverseGamma{}, NormalInverseGamma{}};
  EXPECT_THROW(c.validate(3), ConfigError);
  EXPECT_EQ(DpmmConfig{}.retained_samples(), 800u);
}

TEST(RunChain, RejectsUnstandardizedData) {
  const std::vector<std::size_t> sizes{5, 5};
  auto raw = synthetic::separated_blobs(sizes, 2, 10.0, 1.0, 1).table;
  EXPECT_THROW(run_chain(raw, quick(), 1), ConfigError);
}

TEST(RunChain, CountInvariantsAndDeterminism) {
  const auto t = two_blobs(1);
  const auto cfg = quick(300, 50);
  const auto a = run_chain(t, cfg, 42);
  const auto b = run_chain(t, cfg, 42);
  EXPECT_EQ(a.coassignment, b.coassignment);
  EXPECT_EQ(a.alpha_trace, b.alpha_trace);
  EXPECT_EQ(a.samples_used, cfg.retained_samples());
  EXPECT_EQ(a.alpha_trace.size(), a.samples_used);
  EXPECT_EQ(a.log_posterior_trace.size(), a.samples_used);
  EXPECT_EQ(a.coassignment, a.coassignment.transpose());
  const auto s = static_cast<std::int64_t>(a.samples_used);
  for (Eigen::Index i = 0; i < a.coassignment.rows(); ++i) {
    EXPECT_EQ(a.coassignment(i, i), s);
    for (Eigen::Index j = 0; j < a.coassignment.cols(); ++j) {
      EXPECT_GE(a.coassignment(i, j), 0);
      EXPECT_LE(a.coassignment(i, j), s);
    }
  }
  for (double alpha : a.alpha_trace) EXPECT_GT(alpha, 0.0);
  EXPECT_NE(run_chain(t, cfg, 43).alpha_trace, a.alpha_trace);
}

TEST(RunChain, SeparatedBlocks) {
  const auto t = two_blobs(2);
  const auto d = posterior_dissimilarity(run_chain(t, quick(), 5));
  EXPECT_LE(block_mean(d, true), 0.1);
  EXPECT_GE(block_mean(d, false), 0.9);
}

TEST(RunChain, DuplicatePointsAlmostAlwaysTogether) {
  const std::vector<std::size_t> sizes{40};
  auto blobs = synthetic::separated_blobs(sizes, 3, 0.0, 1.0, 3).table;
  blobs.values.row(1) = blobs.values.row(0);
  const auto d = posterior_dissimilarity(run_chain(standardize(blobs), quick(), 9));
  EXPECT_LE(d(0, 1), 0.05);
}

TEST(RunChain, SingleBlobPrefersOneDominantCluster) {
  const std::vector<std::size_t> sizes{50};
  const auto t = standardize(synthetic::separated_blobs(sizes, 2, 0.0, 1.0, 4).table);
  const auto d = posterior_dissimilarity(run_chain(t, quick(), 11));
  std::vector<double> together;
  for (std::size_t i = 0; i < 50; ++i) {
    for (std::size_t j = i + 1; j < 50; ++j) together.push_back(1.0 - d(i, j));
  }
  std::nth_element(together.begin(), together.begin() + together.size() / 2, together.end());
  EXPECT_GT(together[together.size() / 2], 0.5);
}

TEST(RunChain, PermutingRowsPermutesDissimilarityStatistically) {
  const auto t = two_blobs(6);
  std::vector<std::size_t> order(60);
  std::iota(order.rbegin(), order.rend(), std::size_t{0});
  const auto shuffled = select_rows(t, order);
  const auto d = posterior_dissimilarity(run_chain(t, quick(), 1));
  const auto e = posterior_dissimilarity(run_chain(shuffled, quick(), 1));
  const auto back = e.permuted(order);
  EXPECT_EQ(back.ids(), d.ids());
  EXPECT_LT((back.values() - d.values()).cwiseAbs().maxCoeff(), 0.1);
}

TEST(PosteriorDissimilarity, PooledFractions) {
  const std::vector<std::string> ids{"a", "b"};
  const auto d = posterior_dissimilarity(std::vector<ChainResult>{fake_chain(ids, 80, 100),
                                                                  fake_chain(ids, 60, 100)});
  EXPECT_NEAR(d(0, 1), 0.3, 1e-15);
  EXPECT_EQ(d(0, 0), 0.0);
  EXPECT_EQ(d.kind(), DissimilarityKind::posterior);
  EXPECT_EQ(posterior_dissimilarity(fake_chain(ids, 100, 100))(0, 1), 0.0);
  EXPECT_EQ(posterior_dissimilarity(fake_chain(ids, 0, 100))(0, 1), 1.0);
  EXPECT_THROW(posterior_dissimilarity(std::vector<ChainResult>{fake_chain(ids, 1, 2),
                                                                fake_chain({"a", "c"}, 1, 2)}),
               Error);
  EXPECT_THROW(posterior_dissimilarity(std::vector<ChainResult>{}), ConfigError);
}

TEST(LogPosterior, LabelSwitchingInvariantAndMatchesHandFormula) {
  Eigen::MatrixXd x(3, 1);
  x << -1.0, 0.5, 2.0;
  DpmmConfig cfg;
  const std::vector<int> a{0, 0, 1}, b{1, 1, 0};
  EXPECT_DOUBLE_EQ(dpmm_log_posterior(x, a, 0.7, cfg), dpmm_log_posterior(x, b, 0.7, cfg));

  // One cluster, one dimension, written out term by term.
  const std::vector<int> one{0, 0, 0};
  const double n = 3, alpha = 1.3, k0 = 0.01, a0 = 2, b0 = 1, m0 = 0;
  const double sum = 1.5, sumsq = 1 + 0.25 + 4, mean = sum / n;
  const double kn = k0 + n, an = a0 + n / 2;
  const double bn = b0 + 0.5 * (sumsq - n * mean * mean) + k0 * n * (mean - m0) * (mean - m0) / (2 * kn);
  const double marginal = std::lgamma(an) - std::lgamma(a0) + a0 * std::log(b0) - an * std::log(bn) +
                          0.5 * std::log(k0 / kn) - n / 2 * std::log(2 * M_PI);
  const double prior = 2 * std::log(1.0) - std::lgamma(2.0) + std::log(alpha) - alpha;
  const double crp = std::log(alpha) + std::lgamma(alpha) - std::lgamma(alpha + n) + std::lgamma(n);
  EXPECT_NEAR(dpmm_log_posterior(x, one, alpha, cfg), marginal + prior + crp, 1e-12);
}

TEST(ChainAgreement, IdenticalChainsAgreePerfectly) {
  const auto t = two_blobs(3);
  const auto c = run_chain(t, quick(200, 50), 7);
  const auto r = chain_agreement({c, c});
  ASSERT_EQ(r.pairs.size(), 1u);
  EXPECT_EQ(r.pairs[0].max_abs_difference, 0.0);
  EXPECT_EQ(r.pairs[0].correlation, 1.0);
  EXPECT_FALSE(r.flagged);
  EXPECT_EQ(r.densities.size(), 2u);
  EXPECT_EQ(r.density_bin_centers.size(), 20u);
}

TEST(ChainAgreement, IndependentSeedsAgreeOnSeparatedData) {
  const auto t = two_blobs(4);
  const auto chains = run_chains(t, quick());
  const auto r = chain_agreement(chains);
  EXPECT_LT(r.pairs[0].max_abs_difference, 0.05);
  EXPECT_FALSE(r.flagged);
  EXPECT_EQ(r.alpha.chain_means.size(), 2u);
  EXPECT_FALSE(format_agreement_report(r).empty());
}

TEST(ChainAgreement, TruncatedChainIsFlagged) {
  const std::vector<std::size_t> sizes{40};
  const auto t = standardize(synthetic::separated_blobs(sizes, 2, 0.0, 1.0, 8).table);
  auto full_cfg = quick(2100, 100);
  auto short_cfg = quick(120, 100);
  const auto full = run_chain(t, full_cfg, 1);
  const auto truncated = run_chain(t, short_cfg, 2);
  ASSERT_EQ(truncated.samples_used, 10u);
  const auto r = chain_agreement({full, truncated});
  EXPECT_TRUE(r.flagged);
  EXPECT_GT(r.pairs[0].max_abs_difference, 0.1);
}

TEST(ChainAgreement, NeedsTwoChains) {
  const std::vector<std::string> ids{"a", "b"};
  EXPECT_THROW(chain_agreement({fake_chain(ids, 1, 2)}), ConfigError);
}

TEST(ChainSeed, DistinctPerChain) {
  EXPECT_NE(chain_seed(1, 0), chain_seed(1, 1));
  EXPECT_NE(chain_seed(1, 0), chain_seed(2, 0));
  EXPECT_EQ(chain_seed(5, 3), chain_seed(5, 3));
}
