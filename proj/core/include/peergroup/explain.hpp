#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "peergroup/partition.hpp"
#include "peergroup/preprocess.hpp"

namespace peergroup {

struct PcaResult {
  Eigen::VectorXd center;
  Eigen::MatrixXd loadings;  // d x d, orthonormal columns
  Eigen::MatrixXd scores;    // n x d
  Eigen::VectorXd variance;  // per component, nonincreasing
  std::size_t rank = 0;      // components with non-negligible variance
  std::vector<std::string> warnings;
};

// Eigendecomposition of the sample covariance. Each component is signed so
// its largest-magnitude loading is positive.
PcaResult pca(const FeatureTable& table);

struct ForestConfig {
  std::size_t initial_trees = 100;
  std::size_t max_trees = 6400;
  double stability_threshold = 0.9;
  std::uint64_t seed = 1;
  std::optional<std::size_t> mtry;  // default floor(sqrt(d))
};

struct ImportanceReport {
  std::vector<std::string> variables;  // table order
  std::vector<double> importance;      // table order, mean decrease in Gini
  std::vector<std::size_t> ranking;    // column indices, most important first
  std::size_t trees = 0;
  double stability = 0.0;              // Spearman between half-forest importances
  bool ceiling_reached = false;        // stopped at max_trees without stability
  std::string measure = "mean_decrease_gini";
};

// Random forest of Gini classification trees on the cluster labels. The
// forest doubles from initial_trees until the two half-forests rank the
// variables with Spearman >= stability_threshold or max_trees is reached.
ImportanceReport rf_importance(const FeatureTable& table, const Partition& labels,
                               const ForestConfig& config = {});

struct PairImportance {
  int cluster_a = 0;
  int cluster_b = 0;
  ImportanceReport report;
};

// rf_importance on the subset of each unordered pair of clusters.
std::vector<PairImportance> pairwise_importance(const FeatureTable& table,
                                                const Partition& partition,
                                                const ForestConfig& config = {});

// Spearman rank correlation with average ranks for ties; NaN when either
// side is constant.
double spearman(std::span<const double> a, std::span<const double> b);

// counts[truth][predicted], index 0 = first cluster, 1 = second.
using Confusion = std::array<std::array<std::size_t, 2>, 2>;

struct DiscriminationReport {
  int cluster_a = 1;
  int cluster_b = 2;
  std::size_t n = 0;
  double lda_accuracy = 0.0;
  double qda_accuracy = 0.0;
  double md_accuracy = 0.0;
  Confusion lda{};
  Confusion qda{};
  Confusion md{};
  bool shrinkage_applied = false;
  std::vector<std::string> notes;
};

struct DiscriminationOptions {
  double ridge = 1e-4;
};

// Resubstitution accuracies with equal priors of
//   LDA: class means, pooled covariance;
//   MD:  common (pooled) mean, per-class covariance; Mahalanobis distances are
//        compared on the Gaussian likelihood scale (plus log-determinant);
//   QDA: class means and covariances with log-determinant terms.
// Requires exactly two clusters in `labels`.
DiscriminationReport discriminate(const FeatureTable& table, const Partition& labels,
                                  const DiscriminationOptions& options = {});

}  // namespace peergroup
