#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "peergroup/dissimilarity.hpp"
#include "peergroup/indices.hpp"
#include "peergroup/partition.hpp"

namespace peergroup {

enum class Linkage { average, ward, complete, single };

Linkage parse_linkage(std::string_view token);
std::string_view to_string(Linkage linkage);

struct LanceWilliamsCoefficients {
  double alpha_i = 0.0;
  double alpha_j = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

// Coefficients for merging clusters i and j, seen from a third cluster k.
LanceWilliamsCoefficients lance_williams_coefficients(Linkage linkage, std::size_t n_i,
                                                      std::size_t n_j, std::size_t n_k);

// d(k, i+j) = a_i d_ki + a_j d_kj + b d_ij + g |d_ki - d_kj|. Single and
// complete linkage evaluate the closed forms min/max, which the formula
// reduces to, so their updates are exact.
double lance_williams_update(Linkage linkage, double d_ki, double d_kj, double d_ij,
                             std::size_t n_i, std::size_t n_j, std::size_t n_k);

// Working inter-cluster dissimilarities during agglomeration. Clusters live in
// slots; a merged cluster keeps the smaller slot, which is always the index of
// its smallest member. Ward works on squared dissimilarities.
class LanceWilliamsState {
 public:
  LanceWilliamsState(const DissimilarityMatrix& d, Linkage linkage);

  Linkage linkage() const { return linkage_; }
  std::size_t slots() const { return size_.size(); }
  std::size_t active_count() const { return active_count_; }
  bool active(std::size_t slot) const { return size_[slot] > 0; }
  std::size_t cluster_size(std::size_t slot) const { return size_[slot]; }
  // Internal scale (squared for Ward).
  double dissimilarity(std::size_t a, std::size_t b) const;
  // Merge height reported to users: sqrt of the internal value for Ward.
  double height(std::size_t a, std::size_t b) const;

  // Merges slot b into slot a (either order accepted); returns the kept slot.
  std::size_t merge(std::size_t a, std::size_t b);

 private:
  Linkage linkage_;
  // Average linkage keeps between-cluster sums, so the value read back is
  // sum / (|A| |B|) whenever the sums are exact.
  Eigen::MatrixXd d_;
  std::vector<std::size_t> size_;
  std::size_t active_count_ = 0;
};

// One agglomeration step. Nodes use the hclust encoding: leaf i (0-based) is
// -(i+1); the cluster formed by merge m (0-based) is m+1.
struct Merge {
  int left = 0;
  int right = 0;
  double height = 0.0;
  std::size_t size = 0;

  friend bool operator==(const Merge&, const Merge&) = default;
};

struct MergeTree {
  std::vector<std::string> leaves;
  std::vector<Merge> merges;
  // Leading merges that only rebuild clusters supplied up front; cuts never
  // undo them.
  std::size_t forced_merges = 0;

  std::size_t leaf_count() const { return leaves.size(); }
  std::size_t root_count() const { return leaves.size() - merges.size(); }
  std::vector<int> roots() const;
  std::size_t node_size(int node) const;
  // Leaf indices under `node`, ascending.
  std::vector<std::size_t> node_leaves(int node) const;

  friend bool operator==(const MergeTree&, const MergeTree&) = default;
};

struct AgglomerationOptions {
  std::optional<std::size_t> size_cap;
  // Clusters to rebuild before free agglomeration starts (reallocation).
  const Partition* initial = nullptr;
};

// Repeatedly merges the closest feasible pair of clusters (feasible: merged
// size within the cap), breaking ties by the smallest (i, j) slot pair.
// Uncapped runs end at one root; capped runs end when no feasible merge is
// left, which may leave a forest.
MergeTree agglomerate(const DissimilarityMatrix& d, Linkage linkage,
                      const AgglomerationOptions& options = {});

// Undoes the last merges until k clusters remain. Requires roots <= k <= n.
Partition cut_tree(const MergeTree& tree, std::size_t k);

// Largest cluster count scored by default: floor(sqrt(n)) clamped to
// [2, 15]. CH grows without bound as k approaches n, so cuts are only
// compared up to this many clusters (or the root count of a forest, when
// that is larger).
std::size_t default_max_clusters(std::size_t n);

// Index value at every admissible cut of `tree`, from the state after the
// forced merges down to the final forest, restricted to
// k <= max(max_k, roots), max_k defaulting to default_max_clusters(n). Undefined values (k = 1 etc.) are left out.
struct IndexCurve {
  FitIndex index = FitIndex::ch;
  std::vector<std::size_t> k;
  std::vector<double> value;

  // Position of the maximum; ties go to the smaller k. nullopt when empty.
  std::optional<std::size_t> best() const;
};

IndexCurve index_curve(const MergeTree& tree, const DissimilarityMatrix& d, FitIndex index,
                       std::optional<std::size_t> max_k = std::nullopt);

struct Kirigami1Result {
  Partition partition;
  MergeTree tree;          // unconstrained
  std::size_t optimal_k = 0;
  IndexCurve curve;
  std::size_t bisections = 0;
};

// Top-down: index-optimal cut of the unconstrained tree, then every cluster
// larger than `cap` is replaced by the two children of its subtree root until
// all clusters fit.
Kirigami1Result kirigami1(const DissimilarityMatrix& d, Linkage linkage, FitIndex index,
                          std::size_t cap, std::optional<std::size_t> max_k = std::nullopt);

struct Kirigami2Result {
  Partition partition;
  MergeTree tree;          // capped, possibly a forest
  IndexCurve curve;
};

// Bottom-up: capped agglomeration, then the index-maximising cut of the
// capped tree.
Kirigami2Result kirigami2(const DissimilarityMatrix& d, Linkage linkage, FitIndex index,
                          std::size_t cap, std::optional<std::size_t> max_k = std::nullopt);

// Index-optimal cut of the unconstrained tree.
Kirigami1Result unconstrained_optimum(const DissimilarityMatrix& d, Linkage linkage,
                                      FitIndex index, std::optional<std::size_t> max_k = std::nullopt);

struct PamResult {
  Partition partition;
  std::vector<std::size_t> medoids;  // observation indices, ascending
  double cost = 0.0;                 // sum of dissimilarities to assigned medoid
};

// Build + swap partitioning around medoids. `seed` only fixes the order in
// which equal-cost candidates are considered.
PamResult pam(const DissimilarityMatrix& d, std::size_t k, std::uint64_t seed = 1);

}  // namespace peergroup
