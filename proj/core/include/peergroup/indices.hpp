#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "peergroup/dissimilarity.hpp"
#include "peergroup/partition.hpp"

namespace peergroup {

enum class FitIndex { asw, ch, pearson_gamma };

FitIndex parse_fit_index(std::string_view token);
std::string_view to_string(FitIndex index);

struct SilhouetteResult {
  std::vector<double> a;  // mean dissimilarity to own-cluster co-members
  std::vector<double> b;  // smallest mean dissimilarity to another cluster
  std::vector<double> s;  // (b - a) / max(a, b); 0 for singletons
  double asw = 0.0;
};

// Partition ids must equal the matrix ids (same order). Requires k >= 2.
SilhouetteResult silhouette(const DissimilarityMatrix& d, const Partition& p);

// Calinski-Harabasz from pairwise squared dissimilarities:
//   W = sum_C (1/|C|) sum_{i<j in C} d_ij^2,  T = (1/n) sum_{i<j} d_ij^2,
//   B = T - W,  CH = (B/(k-1)) / (W/(n-k)).
// Requires 2 <= k <= n-1. W = 0 with B > 0 yields +infinity.
double ch_index(const DissimilarityMatrix& d, const Partition& p);

// Pearson correlation between d_ij and the indicator (0 same cluster,
// 1 different) over all pairs i < j.
double pearson_gamma(const DissimilarityMatrix& d, const Partition& p);

// Proportion of connections retained: pairs together in both partitions over
// pairs together in `previous`. Id sets must match; order may differ.
double pcr(const Partition& previous, const Partition& current);

struct IndexReport {
  double asw = 0.0;
  double ch = 0.0;
  double pearson_gamma = 0.0;
  std::size_t k = 0;
  std::size_t n = 0;
  bool ch_infinite = false;
};

IndexReport index_report(const DissimilarityMatrix& d, const Partition& p);
double fit_index(const DissimilarityMatrix& d, const Partition& p, FitIndex index);

// Tracks one fit index while clusters are merged, starting from singletons.
// Cluster handles are observation indices; a merged cluster keeps the handle
// passed as `into`. value() is nullopt where the index is undefined.
class IncrementalFit {
 public:
  IncrementalFit(const DissimilarityMatrix& d, FitIndex index);

  void merge(std::size_t into, std::size_t from);
  std::size_t cluster_count() const { return active_.size(); }
  std::optional<double> value() const;

 private:
  std::optional<double> ch() const;
  std::optional<double> pearson_gamma() const;
  std::optional<double> asw() const;

  const DissimilarityMatrix& d_;
  FitIndex index_;
  std::size_t n_ = 0;
  std::vector<std::size_t> active_;                 // live handles, ascending
  std::vector<std::vector<std::size_t>> members_;   // by handle
  std::vector<double> within_sq_;                   // sum_{i<j in C} d^2, by handle
  double within_ratio_ = 0.0;                       // sum_C within_sq / |C|
  double total_sq_ = 0.0;                           // sum_{i<j} d^2
  double same_pairs_ = 0.0;
  double same_sum_ = 0.0;                           // sum of d over same-cluster pairs
  double all_sum_ = 0.0;
  double all_sq_ = 0.0;
  Eigen::MatrixXd point_sums_;                      // (i, handle) -> sum_{j in C} d_ij
  std::vector<std::size_t> cluster_of_;
};

}  // namespace peergroup
