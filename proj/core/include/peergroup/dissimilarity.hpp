#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace peergroup {

enum class DissimilarityKind { posterior, metric };

// Symmetric n x n matrix with zero diagonal. Posterior matrices hold
// probabilities of two observations being in different latent groups and are
// bounded to [0,1]; metric matrices hold arbitrary nonnegative distances.
class DissimilarityMatrix {
 public:
  DissimilarityMatrix() = default;
  // Validates symmetry (1e-9), zero diagonal (1e-9) and range; the stored
  // matrix is exactly symmetric with an exact zero diagonal.
  DissimilarityMatrix(std::vector<std::string> ids, Eigen::MatrixXd values,
                      DissimilarityKind kind);

  std::size_t size() const { return ids_.size(); }
  const std::vector<std::string>& ids() const { return ids_; }
  const Eigen::MatrixXd& values() const { return d_; }
  DissimilarityKind kind() const { return kind_; }
  double operator()(std::size_t i, std::size_t j) const { return d_(i, j); }

  // Observation `order[r]` of this matrix becomes observation r of the result.
  DissimilarityMatrix permuted(std::span<const std::size_t> order) const;
  DissimilarityMatrix subset(std::span<const std::size_t> rows) const;

 private:
  std::vector<std::string> ids_;
  Eigen::MatrixXd d_;
  DissimilarityKind kind_ = DissimilarityKind::metric;
};

// Euclidean distances between the rows of `x`.
DissimilarityMatrix euclidean_dissimilarity(std::vector<std::string> ids,
                                            const Eigen::MatrixXd& x);

}  // namespace peergroup
