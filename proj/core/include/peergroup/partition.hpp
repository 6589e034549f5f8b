#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace peergroup {

// Assignment of every observation to a cluster. Labels are contiguous from 1
// and numbered in order of each cluster's smallest member index, so two
// partitions describing the same grouping compare equal regardless of the
// labels they were built from.
class Partition {
 public:
  Partition() = default;
  Partition(std::vector<std::string> ids, std::span<const int> raw_labels);

  static Partition singletons(std::vector<std::string> ids);
  static Partition single_cluster(std::vector<std::string> ids);

  const std::vector<std::string>& ids() const { return ids_; }
  std::span<const int> labels() const { return labels_; }
  int label(std::size_t i) const { return labels_[i]; }
  std::size_t size() const { return ids_.size(); }
  std::size_t cluster_count() const { return sizes_.size(); }

  // sizes()[c] is the size of cluster c + 1.
  const std::vector<std::size_t>& sizes() const { return sizes_; }
  std::size_t largest_cluster() const;
  std::vector<std::vector<std::size_t>> members() const;

  bool same_cluster(std::size_t i, std::size_t j) const { return labels_[i] == labels_[j]; }

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<std::string> ids_;
  std::vector<int> labels_;
  std::vector<std::size_t> sizes_;
};

// Reorders `p` so that its ids follow `ids`. Throws Error when the id sets
// differ.
Partition align_to(const Partition& p, const std::vector<std::string>& ids);

// Throws Error unless `ids` has no duplicates.
void require_unique_ids(const std::vector<std::string>& ids);

}  // namespace peergroup
