#include "peergroup/partition.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "peergroup/error.hpp"

namespace peergroup {

Partition::Partition(std::vector<std::string> ids, std::span<const int> raw_labels)
    : ids_(std::move(ids)) {
  if (ids_.size() != raw_labels.size()) {
    throw Error("partition: " + std::to_string(ids_.size()) + " ids but " +
                std::to_string(raw_labels.size()) + " labels");
  }
  require_unique_ids(ids_);
  std::unordered_map<int, int> relabel;
  labels_.reserve(raw_labels.size());
  for (int raw : raw_labels) {
    auto [it, inserted] = relabel.try_emplace(raw, static_cast<int>(relabel.size()) + 1);
    if (inserted) sizes_.push_back(0);
    labels_.push_back(it->second);
    ++sizes_[static_cast<std::size_t>(it->second - 1)];
  }
}

Partition Partition::singletons(std::vector<std::string> ids) {
  std::vector<int> labels(ids.size());
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = static_cast<int>(i);
  return Partition(std::move(ids), labels);
}

Partition Partition::single_cluster(std::vector<std::string> ids) {
  std::vector<int> labels(ids.size(), 0);
  return Partition(std::move(ids), labels);
}

std::size_t Partition::largest_cluster() const {
  return sizes_.empty() ? 0 : *std::max_element(sizes_.begin(), sizes_.end());
}

std::vector<std::vector<std::size_t>> Partition::members() const {
  std::vector<std::vector<std::size_t>> out(sizes_.size());
  for (std::size_t c = 0; c < sizes_.size(); ++c) out[c].reserve(sizes_[c]);
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    out[static_cast<std::size_t>(labels_[i] - 1)].push_back(i);
  }
  return out;
}

Partition align_to(const Partition& p, const std::vector<std::string>& ids) {
  if (p.ids() == ids) return p;
  if (p.size() != ids.size()) {
    throw Error("partition covers " + std::to_string(p.size()) + " ids, expected " +
                std::to_string(ids.size()));
  }
  std::unordered_map<std::string, std::size_t> position;
  position.reserve(ids.size());
  for (std::size_t i = 0; i < p.size(); ++i) position.emplace(p.ids()[i], i);
  std::vector<int> labels(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    auto it = position.find(ids[i]);
    if (it == position.end()) throw Error("id '" + ids[i] + "' missing from partition");
    labels[i] = p.label(it->second);
  }
  return Partition(ids, labels);
}

void require_unique_ids(const std::vector<std::string>& ids) {
  std::unordered_set<std::string> seen;
  seen.reserve(ids.size());
  for (const auto& id : ids) {
    if (!seen.insert(id).second) throw Error("duplicate id '" + id + "'");
  }
}

}  // namespace peergroup
