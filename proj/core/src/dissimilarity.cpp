#include "peergroup/dissimilarity.hpp"

#include <algorithm>
#include <cmath>

#include "peergroup/error.hpp"
#include "peergroup/partition.hpp"

namespace peergroup {

namespace {
constexpr double kSymmetryTolerance = 1e-9;
}

DissimilarityMatrix::DissimilarityMatrix(std::vector<std::string> ids, Eigen::MatrixXd values,
                                         DissimilarityKind kind)
    : ids_(std::move(ids)), d_(std::move(values)), kind_(kind) {
  const auto n = static_cast<Eigen::Index>(ids_.size());
  if (d_.rows() != n || d_.cols() != n) {
    throw Error("dissimilarity matrix is " + std::to_string(d_.rows()) + "x" +
                std::to_string(d_.cols()) + " for " + std::to_string(n) + " ids");
  }
  require_unique_ids(ids_);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::isfinite(d_(i, i)) || std::abs(d_(i, i)) > kSymmetryTolerance) {
      throw Error("dissimilarity diagonal entry for '" + ids_[i] + "' is not zero");
    }
    d_(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double a = d_(i, j);
      const double b = d_(j, i);
      if (!std::isfinite(a) || !std::isfinite(b)) {
        throw Error("dissimilarity between '" + ids_[i] + "' and '" + ids_[j] + "' is not finite");
      }
      if (std::abs(a - b) > kSymmetryTolerance) {
        throw Error("dissimilarity matrix is not symmetric at ('" + ids_[i] + "', '" + ids_[j] +
                    "')");
      }
      double v = 0.5 * (a + b);
      if (v < -kSymmetryTolerance) {
        throw Error("negative dissimilarity between '" + ids_[i] + "' and '" + ids_[j] + "'");
      }
      if (v < 0.0) v = 0.0;
      if (kind_ == DissimilarityKind::posterior) {
        if (v > 1.0 + kSymmetryTolerance) {
          throw Error("posterior dissimilarity above 1 between '" + ids_[i] + "' and '" +
                      ids_[j] + "'");
        }
        v = std::min(v, 1.0);
      }
      d_(i, j) = v;
      d_(j, i) = v;
    }
  }
}

DissimilarityMatrix DissimilarityMatrix::permuted(std::span<const std::size_t> order) const {
  if (order.size() != size()) throw Error("permutation length does not match matrix size");
  return subset(order);
}

DissimilarityMatrix DissimilarityMatrix::subset(std::span<const std::size_t> rows) const {
  const auto m = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd out(m, m);
  std::vector<std::string> ids;
  ids.reserve(rows.size());
  for (Eigen::Index a = 0; a < m; ++a) {
    if (rows[a] >= size()) throw Error("row index out of range");
    ids.push_back(ids_[rows[a]]);
    for (Eigen::Index b = 0; b < m; ++b) {
      out(a, b) = d_(static_cast<Eigen::Index>(rows[a]), static_cast<Eigen::Index>(rows[b]));
    }
  }
  return DissimilarityMatrix(std::move(ids), std::move(out), kind_);
}

DissimilarityMatrix euclidean_dissimilarity(std::vector<std::string> ids,
                                            const Eigen::MatrixXd& x) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = (x.row(i) - x.row(j)).norm();
      d(i, j) = v;
      d(j, i) = v;
    }
  }
  return DissimilarityMatrix(std::move(ids), std::move(d), DissimilarityKind::metric);
}

}  // namespace peergroup
