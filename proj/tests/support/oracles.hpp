#pragma once

// Brute-force reference implementations used as test oracles. They share no
// code with the library beyond its value types.

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "peergroup/dissimilarity.hpp"
#include "peergroup/hier.hpp"
#include "peergroup/partition.hpp"

namespace oracle {

using Members = std::vector<std::size_t>;

std::vector<std::string> ids(std::size_t n);

Eigen::MatrixXd random_points(std::size_t n, std::size_t d, std::mt19937_64& rng);
peergroup::DissimilarityMatrix euclidean(const Eigen::MatrixXd& points);
// Symmetric, zero diagonal, off-diagonal uniform on (0.01, 1).
peergroup::DissimilarityMatrix random_dissimilarity(std::size_t n, std::mt19937_64& rng);
// Off-diagonal integers in [1, 1e6]; every linkage sum is exact in double.
peergroup::DissimilarityMatrix random_integer_dissimilarity(std::size_t n, std::mt19937_64& rng);
peergroup::Partition random_partition(std::size_t n, std::size_t k, std::mt19937_64& rng);

// Single/complete/average linkage between member sets, from the original matrix.
double linkage_distance(const peergroup::DissimilarityMatrix& d, const Members& a,
                        const Members& b, peergroup::Linkage linkage);
// Ward distance on the squared scale: 2 na nb / (na + nb) * |ca - cb|^2.
double ward_distance(const Eigen::MatrixXd& points, const Members& a, const Members& b);

struct NaiveMerge {
  Members left;
  Members right;
  double value = 0.0;  // linkage value on the library's internal scale
};

// Recomputes every inter-cluster distance from scratch at every step.
// Ward requires `points`.
std::vector<NaiveMerge> naive_agglomerate(const peergroup::DissimilarityMatrix& d,
                                          peergroup::Linkage linkage, std::size_t cap,
                                          const Eigen::MatrixXd* points = nullptr);

double pair_count_pcr(const peergroup::Partition& previous, const peergroup::Partition& current);
double direct_silhouette(const peergroup::DissimilarityMatrix& d, const peergroup::Partition& p,
                         std::vector<double>* widths = nullptr);
// Trace form with centroids, for Euclidean inputs.
double centroid_ch(const Eigen::MatrixXd& points, const peergroup::Partition& p);
double correlation(const std::vector<double>& a, const std::vector<double>& b);

// True when the two partitions group observations identically.
bool same_grouping(const peergroup::Partition& a, const peergroup::Partition& b);

}  // namespace oracle
