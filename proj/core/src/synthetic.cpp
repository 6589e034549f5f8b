#include "peergroup/synthetic.hpp"

#include <cmath>
#include <random>

#include <fmt/format.h>

#include "peergroup/error.hpp"

namespace peergroup::synthetic {

namespace {

std::vector<VariableSpec> specs(std::size_t d) {
  std::vector<VariableSpec> out;
  for (std::size_t j = 0; j < d; ++j) out.push_back({fmt::format("x{}", j + 1), VariableKind::continuous});
  return out;
}

Eigen::VectorXd diagonal_centre(std::size_t c, std::size_t d, double separation) {
  return Eigen::VectorXd::Constant(static_cast<Eigen::Index>(d),
                                   static_cast<double>(c) * separation / std::sqrt(static_cast<double>(d)));
}

std::vector<BlobSpec> diagonal_specs(std::span<const std::size_t> sizes, std::size_t d,
                                     double separation, double sd) {
  std::vector<BlobSpec> out;
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    out.push_back({diagonal_centre(c, d, separation), sd, sizes[c]});
  }
  return out;
}

}  // namespace

std::vector<std::string> make_ids(std::size_t n, const std::string& prefix) {
  const std::size_t width = std::max<std::size_t>(3, fmt::format("{}", n).size());
  std::vector<std::string> ids;
  ids.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) ids.push_back(fmt::format("{}{:0{}}", prefix, i, width));
  return ids;
}

Blobs gaussian_blobs(const std::vector<BlobSpec>& clusters, std::uint64_t seed) {
  if (clusters.empty()) throw ConfigError("no clusters requested");
  const auto d = clusters.front().mean.size();
  std::size_t n = 0;
  for (const auto& c : clusters) {
    if (c.mean.size() != d) throw ConfigError("cluster means differ in dimension");
    if (!(c.sd >= 0.0)) throw ConfigError("cluster sd must be nonnegative");
    n += c.size;
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Blobs b;
  b.table.ids = make_ids(n);
  b.table.specs = specs(static_cast<std::size_t>(d));
  b.table.values.resize(static_cast<Eigen::Index>(n), d);
  std::vector<int> labels;
  Eigen::Index row = 0;
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    for (std::size_t i = 0; i < clusters[c].size; ++i, ++row) {
      for (Eigen::Index j = 0; j < d; ++j) {
        b.table.values(row, j) = clusters[c].mean(j) + clusters[c].sd * normal(rng);
      }
      labels.push_back(static_cast<int>(c) + 1);
    }
  }
  b.truth = Partition(b.table.ids, labels);
  return b;
}

Blobs separated_blobs(std::span<const std::size_t> sizes, std::size_t dimensions,
                      double separation, double sd, std::uint64_t seed) {
  if (dimensions < 1) throw ConfigError("need at least one dimension");
  return gaussian_blobs(diagonal_specs(sizes, dimensions, separation, sd), seed);
}

Blobs shell(std::size_t per_cluster, std::size_t dimensions, double spread_ratio,
            std::uint64_t seed) {
  if (!(spread_ratio > 0.0)) throw ConfigError("spread ratio must be positive");
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dimensions));
  return gaussian_blobs({{zero, 1.0, per_cluster}, {zero, std::sqrt(spread_ratio), per_cluster}},
                        seed);
}

DriftedYears drifted_years(std::span<const std::size_t> sizes, std::size_t dimensions,
                           double separation, double sd, std::size_t drift_count,
                           std::uint64_t seed) {
  if (sizes.size() < 2) throw ConfigError("drift needs at least two clusters");
  if (drift_count > sizes[0]) throw ConfigError("cannot drift more members than cluster 1 holds");
  DriftedYears y;
  y.first = separated_blobs(sizes, dimensions, separation, sd, seed);
  auto second_specs = diagonal_specs(sizes, dimensions, separation, sd);
  Blobs fresh = gaussian_blobs(second_specs, seed ^ 0x5eed5eed5eed5eedULL);
  y.second = fresh.table;
  std::mt19937_64 rng(seed + 1);
  std::normal_distribution<double> normal(0.0, 1.0);
  const Eigen::VectorXd target = diagonal_centre(1, dimensions, separation);
  for (std::size_t i = 0; i < drift_count; ++i) {
    for (Eigen::Index j = 0; j < target.size(); ++j) {
      y.second.values(static_cast<Eigen::Index>(i), j) = target(j) + sd * normal(rng);
    }
    y.drifted.push_back(i);
  }
  return y;
}

}  // namespace peergroup::synthetic
