#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "peergroup/partition.hpp"
#include "peergroup/preprocess.hpp"

namespace peergroup::synthetic {

// Gaussian clusters with isotropic spread. Rows are grouped by cluster; ids
// are "org001", "org002", ...
struct Blobs {
  FeatureTable table;
  Partition truth;
};

struct BlobSpec {
  Eigen::VectorXd mean;
  double sd = 1.0;
  std::size_t size = 0;
};

Blobs gaussian_blobs(const std::vector<BlobSpec>& clusters, std::uint64_t seed);

// Clusters whose centres sit `separation` apart along the diagonal
// directions of a d-dimensional space.
Blobs separated_blobs(std::span<const std::size_t> sizes, std::size_t dimensions,
                      double separation, double sd, std::uint64_t seed);

// Two clusters with a common centre and covariances I and spread_ratio * I.
Blobs shell(std::size_t per_cluster, std::size_t dimensions, double spread_ratio,
            std::uint64_t seed);

// Second-year data: every observation is redrawn around its cluster centre
// with fresh noise, except the first `drift_count` members of cluster 1,
// which are redrawn around the centre of cluster 2.
struct DriftedYears {
  Blobs first;
  FeatureTable second;
  std::vector<std::size_t> drifted;
};

DriftedYears drifted_years(std::span<const std::size_t> sizes, std::size_t dimensions,
                           double separation, double sd, std::size_t drift_count,
                           std::uint64_t seed);

std::vector<std::string> make_ids(std::size_t n, const std::string& prefix = "org");

}  // namespace peergroup::synthetic
