#include "peergroup/indices.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include <fmt/format.h>

#include "peergroup/error.hpp"

namespace peergroup {

namespace {

void require_matching_ids(const DissimilarityMatrix& d, const Partition& p) {
  if (d.ids() != p.ids()) {
    throw Error("partition ids do not match the dissimilarity matrix ids");
  }
}

double pairs(double m) { return 0.5 * m * (m - 1.0); }

}  // namespace

FitIndex parse_fit_index(std::string_view token) {
  if (token == "asw" || token == "silhouette") return FitIndex::asw;
  if (token == "ch") return FitIndex::ch;
  if (token == "pg" || token == "pearson_gamma") return FitIndex::pearson_gamma;
  throw ConfigError(fmt::format("unknown fit index '{}' (expected asw, ch or pg)", token));
}

std::string_view to_string(FitIndex index) {
  switch (index) {
    case FitIndex::asw: return "asw";
    case FitIndex::ch: return "ch";
    case FitIndex::pearson_gamma: return "pg";
  }
  return "ch";
}

SilhouetteResult silhouette(const DissimilarityMatrix& d, const Partition& p) {
  require_matching_ids(d, p);
  const std::size_t k = p.cluster_count();
  if (k < 2) throw DomainError("silhouette undefined for one cluster");
  const std::size_t n = p.size();
  const auto& sizes = p.sizes();
  SilhouetteResult r;
  r.a.resize(n);
  r.b.resize(n);
  r.s.resize(n);
  std::vector<double> sums(k);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      sums[static_cast<std::size_t>(p.label(j) - 1)] += d(i, j);
    }
    const auto own = static_cast<std::size_t>(p.label(i) - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      if (c != own) b = std::min(b, sums[c] / static_cast<double>(sizes[c]));
    }
    r.b[i] = b;
    if (sizes[own] == 1) {
      r.a[i] = 0.0;
      r.s[i] = 0.0;
      continue;
    }
    const double a = sums[own] / static_cast<double>(sizes[own] - 1);
    r.a[i] = a;
    const double denom = std::max(a, b);
    r.s[i] = denom > 0.0 ? (b - a) / denom : 0.0;
  }
  double total = 0.0;
  for (double s : r.s) total += s;
  r.asw = total / static_cast<double>(n);
  return r;
}

double ch_index(const DissimilarityMatrix& d, const Partition& p) {
  require_matching_ids(d, p);
  const std::size_t n = p.size();
  const std::size_t k = p.cluster_count();
  if (k < 2 || k + 1 > n) {
    throw DomainError(fmt::format("CH index needs 2 <= k <= n-1 (k = {}, n = {})", k, n));
  }
  std::vector<double> within(k, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double sq = d(i, j) * d(i, j);
      total += sq;
      if (p.same_cluster(i, j)) within[static_cast<std::size_t>(p.label(i) - 1)] += sq;
    }
  }
  double w = 0.0;
  for (std::size_t c = 0; c < k; ++c) w += within[c] / static_cast<double>(p.sizes()[c]);
  const double t = total / static_cast<double>(n);
  const double b = t - w;
  if (w == 0.0) {
    if (b > 0.0) return std::numeric_limits<double>::infinity();
    throw DomainError("CH index undefined: no within- or between-cluster dispersion");
  }
  return (b / static_cast<double>(k - 1)) / (w / static_cast<double>(n - k));
}

double pearson_gamma(const DissimilarityMatrix& d, const Partition& p) {
  require_matching_ids(d, p);
  if (p.cluster_count() < 2) throw DomainError("Pearson-Gamma undefined for one cluster");
  const std::size_t n = p.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0, m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double x = d(i, j);
      const double y = p.same_cluster(i, j) ? 0.0 : 1.0;
      sx += x;
      sy += y;
      sxx += x * x;
      syy += y * y;
      sxy += x * y;
      m += 1.0;
    }
  }
  const double vx = sxx - sx * sx / m;
  const double vy = syy - sy * sy / m;
  if (!(vx > 0.0)) throw DomainError("Pearson-Gamma undefined: dissimilarity vector has zero variance");
  if (!(vy > 0.0)) {
    throw DomainError("Pearson-Gamma undefined: cluster indicator vector has zero variance");
  }
  const double r = (sxy - sx * sy / m) / std::sqrt(vx * vy);
  return std::clamp(r, -1.0, 1.0);
}

double pcr(const Partition& previous, const Partition& current) {
  const Partition aligned = align_to(current, previous.ids());
  double connected_before = 0.0;
  for (std::size_t size : previous.sizes()) connected_before += pairs(static_cast<double>(size));
  if (connected_before == 0.0) {
    throw DomainError("PCR undefined: previous partition has no connected pairs (all singletons)");
  }
  std::unordered_map<long long, std::size_t> joint;
  const auto width = static_cast<long long>(aligned.cluster_count()) + 1;
  for (std::size_t i = 0; i < previous.size(); ++i) {
    ++joint[static_cast<long long>(previous.label(i)) * width + aligned.label(i)];
  }
  double kept = 0.0;
  for (const auto& [key, count] : joint) kept += pairs(static_cast<double>(count));
  return kept / connected_before;
}

IndexReport index_report(const DissimilarityMatrix& d, const Partition& p) {
  IndexReport r;
  r.k = p.cluster_count();
  r.n = p.size();
  r.asw = silhouette(d, p).asw;
  r.ch = ch_index(d, p);
  r.ch_infinite = std::isinf(r.ch);
  r.pearson_gamma = pearson_gamma(d, p);
  return r;
}

double fit_index(const DissimilarityMatrix& d, const Partition& p, FitIndex index) {
  switch (index) {
    case FitIndex::asw: return silhouette(d, p).asw;
    case FitIndex::ch: return ch_index(d, p);
    case FitIndex::pearson_gamma: return pearson_gamma(d, p);
  }
  return 0.0;
}

IncrementalFit::IncrementalFit(const DissimilarityMatrix& d, FitIndex index)
    : d_(d), index_(index), n_(d.size()) {
  active_.resize(n_);
  members_.resize(n_);
  cluster_of_.resize(n_);
  within_sq_.assign(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    active_[i] = i;
    members_[i] = {i};
    cluster_of_[i] = i;
    for (std::size_t j = i + 1; j < n_; ++j) {
      const double v = d(i, j);
      all_sum_ += v;
      all_sq_ += v * v;
    }
  }
  total_sq_ = all_sq_;
  if (index_ == FitIndex::asw) point_sums_ = d.values();
}

void IncrementalFit::merge(std::size_t into, std::size_t from) {
  if (into == from || members_[into].empty() || members_[from].empty()) {
    throw InvariantError("IncrementalFit::merge on inactive or identical clusters");
  }
  double cross = 0.0, cross_sq = 0.0;
  for (std::size_t i : members_[into]) {
    for (std::size_t j : members_[from]) {
      const double v = d_(i, j);
      cross += v;
      cross_sq += v * v;
    }
  }
  same_pairs_ += static_cast<double>(members_[into].size() * members_[from].size());
  same_sum_ += cross;
  within_sq_[into] += within_sq_[from] + cross_sq;
  within_sq_[from] = 0.0;
  for (std::size_t j : members_[from]) cluster_of_[j] = into;
  members_[into].insert(members_[into].end(), members_[from].begin(), members_[from].end());
  members_[from].clear();
  active_.erase(std::lower_bound(active_.begin(), active_.end(), from));
  if (index_ == FitIndex::asw) {
    point_sums_.col(static_cast<Eigen::Index>(into)) +=
        point_sums_.col(static_cast<Eigen::Index>(from));
  }
  within_ratio_ = 0.0;
  for (std::size_t c : active_) {
    within_ratio_ += within_sq_[c] / static_cast<double>(members_[c].size());
  }
}

std::optional<double> IncrementalFit::value() const {
  switch (index_) {
    case FitIndex::asw: return asw();
    case FitIndex::ch: return ch();
    case FitIndex::pearson_gamma: return pearson_gamma();
  }
  return std::nullopt;
}

std::optional<double> IncrementalFit::ch() const {
  const std::size_t k = active_.size();
  if (k < 2 || k + 1 > n_) return std::nullopt;
  const double w = within_ratio_;
  const double b = total_sq_ / static_cast<double>(n_) - w;
  if (w == 0.0) {
    if (b > 0.0) return std::numeric_limits<double>::infinity();
    return std::nullopt;
  }
  return (b / static_cast<double>(k - 1)) / (w / static_cast<double>(n_ - k));
}

std::optional<double> IncrementalFit::pearson_gamma() const {
  const double m = pairs(static_cast<double>(n_));
  const double s = same_pairs_;
  if (active_.size() < 2 || s == 0.0 || s == m) return std::nullopt;
  const double sy = m - s;  // indicator is 1 for different clusters
  const double vy = sy - sy * sy / m;
  const double vx = all_sq_ - all_sum_ * all_sum_ / m;
  if (!(vx > 0.0) || !(vy > 0.0)) return std::nullopt;
  const double sxy = all_sum_ - same_sum_;
  const double r = (sxy - all_sum_ * sy / m) / std::sqrt(vx * vy);
  return std::clamp(r, -1.0, 1.0);
}

std::optional<double> IncrementalFit::asw() const {
  if (active_.size() < 2) return std::nullopt;
  double total = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t own = cluster_of_[i];
    const std::size_t own_size = members_[own].size();
    if (own_size == 1) continue;
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c : active_) {
      if (c == own) continue;
      b = std::min(b, point_sums_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) /
                          static_cast<double>(members_[c].size()));
    }
    const double a = point_sums_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(own)) /
                     static_cast<double>(own_size - 1);
    const double denom = std::max(a, b);
    if (denom > 0.0) total += (b - a) / denom;
  }
  return total / static_cast<double>(n_);
}

}  // namespace peergroup
