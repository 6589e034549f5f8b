#include "peergroup/hier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "peergroup/error.hpp"

namespace peergroup {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int leaf_node(std::size_t i) { return -static_cast<int>(i) - 1; }
std::size_t leaf_index(int node) { return static_cast<std::size_t>(-node - 1); }

// Smallest leaf index below every node, used to name clusters by handle.
std::vector<std::size_t> merge_handles(const MergeTree& tree) {
  std::vector<std::size_t> handle(tree.merges.size());
  auto of = [&](int node) { return node < 0 ? leaf_index(node) : handle[node - 1]; };
  for (std::size_t m = 0; m < tree.merges.size(); ++m) {
    handle[m] = std::min(of(tree.merges[m].left), of(tree.merges[m].right));
  }
  return handle;
}

// Nodes that are roots after the first `applied` merges, ordered by smallest
// leaf.
std::vector<int> frontier(const MergeTree& tree, std::size_t applied) {
  const std::size_t n = tree.leaf_count();
  std::vector<char> used_leaf(n, 0);
  std::vector<char> used_merge(applied, 0);
  for (std::size_t m = 0; m < applied; ++m) {
    for (int child : {tree.merges[m].left, tree.merges[m].right}) {
      if (child < 0) {
        used_leaf[leaf_index(child)] = 1;
      } else {
        used_merge[static_cast<std::size_t>(child - 1)] = 1;
      }
    }
  }
  const auto handle = merge_handles(tree);
  std::vector<std::pair<std::size_t, int>> nodes;
  for (std::size_t i = 0; i < n; ++i) {
    if (!used_leaf[i]) nodes.emplace_back(i, leaf_node(i));
  }
  for (std::size_t m = 0; m < applied; ++m) {
    if (!used_merge[m]) nodes.emplace_back(handle[m], static_cast<int>(m) + 1);
  }
  std::sort(nodes.begin(), nodes.end());
  std::vector<int> out;
  out.reserve(nodes.size());
  for (const auto& [h, node] : nodes) out.push_back(node);
  return out;
}

Partition partition_from_nodes(const MergeTree& tree, const std::vector<int>& nodes) {
  std::vector<int> labels(tree.leaf_count(), 0);
  int next = 1;
  for (int node : nodes) {
    for (std::size_t leaf : tree.node_leaves(node)) labels[leaf] = next;
    ++next;
  }
  return Partition(tree.leaves, labels);
}

void require_cap(std::size_t cap) {
  if (cap < 1) throw ConfigError("size cap must be at least 1");
}

}  // namespace

Linkage parse_linkage(std::string_view token) {
  if (token == "average") return Linkage::average;
  if (token == "ward") return Linkage::ward;
  if (token == "complete") return Linkage::complete;
  if (token == "single") return Linkage::single;
  throw ConfigError(
      fmt::format("unknown linkage '{}' (expected average, ward, complete or single)", token));
}

std::string_view to_string(Linkage linkage) {
  switch (linkage) {
    case Linkage::average: return "average";
    case Linkage::ward: return "ward";
    case Linkage::complete: return "complete";
    case Linkage::single: return "single";
  }
  return "average";
}

LanceWilliamsCoefficients lance_williams_coefficients(Linkage linkage, std::size_t n_i,
                                                      std::size_t n_j, std::size_t n_k) {
  const double ni = static_cast<double>(n_i);
  const double nj = static_cast<double>(n_j);
  const double nk = static_cast<double>(n_k);
  switch (linkage) {
    case Linkage::average: return {ni / (ni + nj), nj / (ni + nj), 0.0, 0.0};
    case Linkage::complete: return {0.5, 0.5, 0.0, 0.5};
    case Linkage::single: return {0.5, 0.5, 0.0, -0.5};
    case Linkage::ward: {
      const double t = ni + nj + nk;
      return {(ni + nk) / t, (nj + nk) / t, -nk / t, 0.0};
    }
  }
  return {};
}

double lance_williams_update(Linkage linkage, double d_ki, double d_kj, double d_ij,
                             std::size_t n_i, std::size_t n_j, std::size_t n_k) {
  switch (linkage) {
    case Linkage::single: return std::min(d_ki, d_kj);
    case Linkage::complete: return std::max(d_ki, d_kj);
    case Linkage::average: {
      const double ni = static_cast<double>(n_i);
      const double nj = static_cast<double>(n_j);
      return (ni * d_ki + nj * d_kj) / (ni + nj);
    }
    case Linkage::ward: {
      const double ni = static_cast<double>(n_i);
      const double nj = static_cast<double>(n_j);
      const double nk = static_cast<double>(n_k);
      return ((ni + nk) * d_ki + (nj + nk) * d_kj - nk * d_ij) / (ni + nj + nk);
    }
  }
  return 0.0;
}

LanceWilliamsState::LanceWilliamsState(const DissimilarityMatrix& d, Linkage linkage)
    : linkage_(linkage), d_(d.values()), size_(d.size(), 1), active_count_(d.size()) {
  if (linkage_ == Linkage::ward) d_ = d_.cwiseProduct(d_);
}

double LanceWilliamsState::dissimilarity(std::size_t a, std::size_t b) const {
  const double v = d_(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
  if (linkage_ != Linkage::average) return v;
  return v / (static_cast<double>(size_[a]) * static_cast<double>(size_[b]));
}

double LanceWilliamsState::height(std::size_t a, std::size_t b) const {
  const double v = dissimilarity(a, b);
  return linkage_ == Linkage::ward ? std::sqrt(std::max(0.0, v)) : v;
}

std::size_t LanceWilliamsState::merge(std::size_t a, std::size_t b) {
  if (a > b) std::swap(a, b);
  if (a == b || !active(a) || !active(b)) {
    throw InvariantError("LanceWilliamsState::merge on inactive or identical slots");
  }
  const auto ia = static_cast<Eigen::Index>(a);
  const auto ib = static_cast<Eigen::Index>(b);
  const double d_ab = d_(ia, ib);
  for (std::size_t k = 0; k < size_.size(); ++k) {
    if (k == a || k == b || !active(k)) continue;
    const auto ik = static_cast<Eigen::Index>(k);
    const double v =
        linkage_ == Linkage::average
            ? d_(ik, ia) + d_(ik, ib)
            : lance_williams_update(linkage_, d_(ik, ia), d_(ik, ib), d_ab, size_[a], size_[b],
                                    size_[k]);
    d_(ik, ia) = v;
    d_(ia, ik) = v;
  }
  size_[a] += size_[b];
  size_[b] = 0;
  --active_count_;
  return a;
}

std::vector<int> MergeTree::roots() const { return frontier(*this, merges.size()); }

std::size_t MergeTree::node_size(int node) const {
  if (node < 0) return 1;
  return merges.at(static_cast<std::size_t>(node - 1)).size;
}

std::vector<std::size_t> MergeTree::node_leaves(int node) const {
  std::vector<std::size_t> out;
  std::vector<int> stack{node};
  while (!stack.empty()) {
    const int top = stack.back();
    stack.pop_back();
    if (top < 0) {
      out.push_back(leaf_index(top));
    } else {
      const Merge& m = merges.at(static_cast<std::size_t>(top - 1));
      stack.push_back(m.left);
      stack.push_back(m.right);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

MergeTree agglomerate(const DissimilarityMatrix& d, Linkage linkage,
                      const AgglomerationOptions& options) {
  const std::size_t n = d.size();
  if (n < 1) throw ConfigError("cannot cluster an empty dissimilarity matrix");
  const std::size_t cap = options.size_cap.value_or(n);
  require_cap(cap);

  LanceWilliamsState state(d, linkage);
  MergeTree tree;
  tree.leaves = d.ids();
  std::vector<int> node(n);
  for (std::size_t i = 0; i < n; ++i) node[i] = leaf_node(i);

  auto record = [&](std::size_t a, std::size_t b) {
    if (a > b) std::swap(a, b);
    tree.merges.push_back(
        {node[a], node[b], state.height(a, b), state.cluster_size(a) + state.cluster_size(b)});
    state.merge(a, b);
    node[a] = static_cast<int>(tree.merges.size());
  };

  if (options.initial != nullptr) {
    const Partition initial = align_to(*options.initial, d.ids());
    if (initial.largest_cluster() > cap) {
      throw ConfigError(fmt::format("initial cluster of size {} exceeds the size cap {}",
                                    initial.largest_cluster(), cap));
    }
    for (const auto& members : initial.members()) {
      for (std::size_t m = 1; m < members.size(); ++m) record(members[0], members[m]);
    }
    tree.forced_merges = tree.merges.size();
  }

  // Row i caches its nearest feasible partner j > i.
  std::vector<double> best_d(n, kInf);
  std::vector<std::size_t> best_j(n, n);
  auto feasible = [&](std::size_t a, std::size_t b) {
    return state.cluster_size(a) + state.cluster_size(b) <= cap;
  };
  auto recompute = [&](std::size_t i) {
    best_d[i] = kInf;
    best_j[i] = n;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!state.active(j) || !feasible(i, j)) continue;
      const double v = state.dissimilarity(i, j);
      if (v < best_d[i] || best_j[i] == n) {
        best_d[i] = v;
        best_j[i] = j;
      }
    }
  };
  for (std::size_t i = 0; i < n; ++i) {
    if (state.active(i)) recompute(i);
  }

  while (state.active_count() > 1) {
    std::size_t i = n;
    for (std::size_t r = 0; r < n; ++r) {
      if (!state.active(r) || best_j[r] == n) continue;
      if (i == n || best_d[r] < best_d[i]) i = r;
    }
    if (i == n) break;
    const std::size_t j = best_j[i];
    record(i, j);
    best_j[j] = n;
    best_d[j] = kInf;
    for (std::size_t r = 0; r < j; ++r) {
      if (r == i || !state.active(r)) continue;
      if (r < i) {
        if (best_j[r] == i || best_j[r] == j) {
          recompute(r);
        } else if (feasible(r, i)) {
          const double v = state.dissimilarity(r, i);
          if (best_j[r] == n || v < best_d[r] || (v == best_d[r] && i < best_j[r])) {
            best_d[r] = v;
            best_j[r] = i;
          }
        }
      } else if (best_j[r] == j) {
        recompute(r);
      }
    }
    recompute(i);
  }
  return tree;
}

Partition cut_tree(const MergeTree& tree, std::size_t k) {
  const std::size_t n = tree.leaf_count();
  if (k < tree.root_count() || k > n) {
    throw ConfigError(fmt::format("cannot cut a tree with {} roots and {} leaves into {} clusters",
                                  tree.root_count(), n, k));
  }
  if (n - k < tree.forced_merges) {
    throw ConfigError(fmt::format("a cut into {} clusters would split the seeded clusters", k));
  }
  return partition_from_nodes(tree, frontier(tree, n - k));
}

std::optional<std::size_t> IndexCurve::best() const {
  if (value.empty()) return std::nullopt;
  std::size_t pos = 0;
  for (std::size_t i = 1; i < value.size(); ++i) {
    if (value[i] > value[pos] || (value[i] == value[pos] && k[i] < k[pos])) pos = i;
  }
  return pos;
}

std::size_t default_max_clusters(std::size_t n) {
  const auto root = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
  return std::clamp<std::size_t>(root, 2, 15);
}

IndexCurve index_curve(const MergeTree& tree, const DissimilarityMatrix& d, FitIndex index,
                       std::optional<std::size_t> max_k) {
  if (tree.leaves != d.ids()) throw Error("merge tree leaves do not match the dissimilarity ids");
  if (max_k && *max_k < 2) throw ConfigError(fmt::format("max_k must be at least 2, got {}", *max_k));
  IncrementalFit fit(d, index);
  const auto handle = merge_handles(tree);
  auto of = [&](int node) { return node < 0 ? leaf_index(node) : handle[node - 1]; };
  IndexCurve curve;
  curve.index = index;
  const std::size_t n = tree.leaf_count();
  const std::size_t limit = std::max(max_k.value_or(default_max_clusters(n)), tree.root_count());
  for (std::size_t m = 0; m <= tree.merges.size(); ++m) {
    if (m > 0) {
      const Merge& step = tree.merges[m - 1];
      const std::size_t a = of(step.left);
      const std::size_t b = of(step.right);
      fit.merge(std::min(a, b), std::max(a, b));
    }
    if (m < tree.forced_merges || n - m > limit) continue;
    if (auto v = fit.value()) {
      curve.k.push_back(n - m);
      curve.value.push_back(*v);
    }
  }
  return curve;
}

namespace {

std::size_t chosen_k(const IndexCurve& curve, const MergeTree& tree) {
  if (auto pos = curve.best()) return curve.k[*pos];
  return tree.leaf_count() - tree.forced_merges;
}

}  // namespace

Kirigami1Result kirigami1(const DissimilarityMatrix& d, Linkage linkage, FitIndex index,
                          std::size_t cap, std::optional<std::size_t> max_k) {
  require_cap(cap);
  Kirigami1Result r;
  r.tree = agglomerate(d, linkage);
  r.curve = index_curve(r.tree, d, index, max_k);
  r.optimal_k = chosen_k(r.curve, r.tree);
  std::vector<int> nodes = frontier(r.tree, r.tree.leaf_count() - r.optimal_k);
  std::vector<int> done;
  while (!nodes.empty()) {
    const int node = nodes.front();
    nodes.erase(nodes.begin());
    if (r.tree.node_size(node) <= cap) {
      done.push_back(node);
      continue;
    }
    const Merge& m = r.tree.merges[static_cast<std::size_t>(node - 1)];
    nodes.push_back(m.left);
    nodes.push_back(m.right);
    ++r.bisections;
  }
  const auto handle = merge_handles(r.tree);
  std::sort(done.begin(), done.end(), [&](int a, int b) {
    auto of = [&](int x) { return x < 0 ? leaf_index(x) : handle[x - 1]; };
    return of(a) < of(b);
  });
  r.partition = partition_from_nodes(r.tree, done);
  return r;
}

Kirigami2Result kirigami2(const DissimilarityMatrix& d, Linkage linkage, FitIndex index,
                          std::size_t cap, std::optional<std::size_t> max_k) {
  require_cap(cap);
  Kirigami2Result r;
  r.tree = agglomerate(d, linkage, {cap, nullptr});
  r.curve = index_curve(r.tree, d, index, max_k);
  r.partition = cut_tree(r.tree, chosen_k(r.curve, r.tree));
  return r;
}

Kirigami1Result unconstrained_optimum(const DissimilarityMatrix& d, Linkage linkage,
                                      FitIndex index, std::optional<std::size_t> max_k) {
  return kirigami1(d, linkage, index, std::max<std::size_t>(d.size(), 1), max_k);
}

PamResult pam(const DissimilarityMatrix& d, std::size_t k, std::uint64_t seed) {
  const std::size_t n = d.size();
  if (k < 1 || k > n) {
    throw ConfigError(fmt::format("PAM needs 1 <= k <= n (k = {}, n = {})", k, n));
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<std::size_t> medoids;
  std::vector<char> is_medoid(n, 0);
  std::vector<double> nearest(n, kInf);

  // Build.
  while (medoids.size() < k) {
    std::size_t pick = n;
    double best = -kInf;
    for (std::size_t c : order) {
      if (is_medoid[c]) continue;
      double gain = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        gain += medoids.empty() ? -d(c, j) : std::max(0.0, nearest[j] - d(c, j));
      }
      if (pick == n || gain > best) {
        best = gain;
        pick = c;
      }
    }
    medoids.push_back(pick);
    is_medoid[pick] = 1;
    for (std::size_t j = 0; j < n; ++j) nearest[j] = std::min(nearest[j], d(pick, j));
  }

  std::vector<std::size_t> owner(n);
  std::vector<double> first(n), second(n);
  auto assign = [&]() {
    std::vector<std::size_t> sorted = medoids;
    std::sort(sorted.begin(), sorted.end());
    double cost = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      first[j] = kInf;
      second[j] = kInf;
      for (std::size_t m : sorted) {
        const double v = d(m, j);
        if (v < first[j]) {
          second[j] = first[j];
          first[j] = v;
          owner[j] = m;
        } else if (v < second[j]) {
          second[j] = v;
        }
      }
      cost += first[j];
    }
    return cost;
  };

  // Swap.
  double cost = assign();
  for (;;) {
    double best_delta = 0.0;
    std::size_t best_m = n, best_o = n;
    for (std::size_t slot = 0; slot < medoids.size(); ++slot) {
      const std::size_t m = medoids[slot];
      for (std::size_t o : order) {
        if (is_medoid[o]) continue;
        double delta = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          const double dj = d(o, j);
          if (owner[j] == m) {
            delta += std::min(dj, second[j]) - first[j];
          } else {
            delta += std::min(dj - first[j], 0.0);
          }
        }
        if (delta < best_delta) {
          best_delta = delta;
          best_m = slot;
          best_o = o;
        }
      }
    }
    if (best_m == n || best_delta > -1e-10 * (1.0 + std::abs(cost))) break;
    is_medoid[medoids[best_m]] = 0;
    medoids[best_m] = best_o;
    is_medoid[best_o] = 1;
    cost = assign();
  }

  PamResult r;
  r.medoids = medoids;
  std::sort(r.medoids.begin(), r.medoids.end());
  std::vector<int> labels(n);
  for (std::size_t j = 0; j < n; ++j) {
    labels[j] = static_cast<int>(std::lower_bound(r.medoids.begin(), r.medoids.end(), owner[j]) -
                                 r.medoids.begin());
  }
  r.partition = Partition(d.ids(), labels);
  r.cost = cost;
  return r;
}

}  // namespace peergroup
