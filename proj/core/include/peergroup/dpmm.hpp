#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "peergroup/dissimilarity.hpp"
#include "peergroup/preprocess.hpp"

namespace peergroup {

// Normal-Inverse-Gamma prior for one dimension:
//   sigma^2 ~ InvGamma(a0, b0),  mu | sigma^2 ~ N(m0, sigma^2 / k0).
struct NormalInverseGamma {
  double m0 = 0.0;
  double k0 = 0.01;
  double a0 = 2.0;
  double b0 = 1.0;
};

// Gamma(shape, rate) prior on the DP concentration alpha.
struct GammaPrior {
  double shape = 2.0;
  double rate = 1.0;
};

struct DpmmConfig {
  std::size_t iterations = 5000;  // total sweeps, burn-in included
  std::size_t burn_in = 1000;
  std::size_t thin = 5;
  std::size_t chains = 4;
  std::uint64_t seed = 1;
  GammaPrior alpha_prior;
  // Empty: defaults for every dimension. Size 1: broadcast. Otherwise one
  // entry per dimension.
  std::vector<NormalInverseGamma> base_measure;

  // Throws ConfigError for an invalid configuration. `dimensions` = 0 skips
  // the base-measure length check.
  void validate(std::size_t dimensions = 0) const;
  NormalInverseGamma base_for(std::size_t dimension) const;
  std::size_t retained_samples() const;
};

using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

struct ChainResult {
  std::vector<std::string> ids;
  std::uint64_t seed = 0;
  CountMatrix coassignment;      // symmetric, diagonal == samples_used
  std::size_t samples_used = 0;
  // One entry per retained sample.
  std::vector<double> alpha_trace;
  std::vector<double> log_posterior_trace;
  std::vector<std::size_t> cluster_count_trace;
};

// Seed of chain `index` derived from the configured base seed.
std::uint64_t chain_seed(std::uint64_t base_seed, std::size_t index);

// Collapsed Gibbs sampler for a DP mixture of diagonal Gaussians with a
// conjugate Normal-Inverse-Gamma base measure; alpha is resampled every
// sweep with the Escobar-West auxiliary variable scheme. After burn-in every
// thin-th sweep adds the current co-clustering to the counts. Deterministic in
// (data, config, seed).
ChainResult run_chain(const FeatureTable& data, const DpmmConfig& config, std::uint64_t seed);

// Runs config.chains chains, in parallel, with seeds chain_seed(config.seed, c).
std::vector<ChainResult> run_chains(const FeatureTable& data, const DpmmConfig& config);

// d_ij = 1 - (pooled co-assignment count) / (pooled samples).
DissimilarityMatrix posterior_dissimilarity(const std::vector<ChainResult>& chains);
DissimilarityMatrix posterior_dissimilarity(const ChainResult& chain);

// Unnormalised log posterior of a partition (labels 0..k-1) and alpha.
double dpmm_log_posterior(const Eigen::MatrixXd& x, std::span<const int> labels, double alpha,
                          const DpmmConfig& config);

struct ChainPairAgreement {
  std::size_t chain_a = 0;
  std::size_t chain_b = 0;
  double max_abs_difference = 0.0;
  double correlation = 0.0;  // Pearson over off-diagonal PDM entries
  bool flagged = false;
};

struct TraceDiagnostics {
  std::vector<double> chain_means;
  std::vector<double> lag1_autocorrelation;
  // Between-chain variance of the chain means (scaled by trace length)
  // divided by the mean within-chain variance.
  double between_within_ratio = 0.0;
};

struct AgreementOptions {
  double max_difference = 0.1;
  double min_correlation = 0.95;
  std::size_t density_bins = 20;
};

struct AgreementReport {
  std::vector<ChainPairAgreement> pairs;
  TraceDiagnostics alpha;
  TraceDiagnostics log_posterior;
  bool flagged = false;
  // Plot series: off-diagonal PDM entries per chain (upper triangle, row
  // major) and a histogram density of those entries per chain.
  std::vector<std::vector<double>> pdm_entries;
  std::vector<double> density_bin_centers;
  std::vector<std::vector<double>> densities;
};

// Multi-chain convergence diagnostics. Throws ConfigError for fewer than two chains.
AgreementReport chain_agreement(const std::vector<ChainResult>& chains,
                                const AgreementOptions& options = {});

std::string format_agreement_report(const AgreementReport& report);

}  // namespace peergroup
