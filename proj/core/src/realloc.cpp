#include "peergroup/realloc.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <fmt/format.h>

namespace peergroup {

namespace {

// Grid arithmetic overshoots 0.95 by an ulp (0.05 * 19).
double checked_proportion(double p) {
  if (!(p >= 0.0 && p <= 0.95 + 1e-9)) {
    throw ConfigError(fmt::format("reallocation proportion {} outside [0, 0.95]", p));
  }
  return std::min(p, 0.95);
}

}  // namespace

std::vector<double> reallocation_grid(double step) {
  if (!(step > 0.0) || step > 0.95) {
    throw ConfigError(fmt::format("grid step must lie in (0, 0.95], got {}", step));
  }
  std::vector<double> grid;
  for (std::size_t i = 0;; ++i) {
    const double p = static_cast<double>(i) * step;
    if (p > 0.95 + 1e-9) break;
    grid.push_back(std::min(p, 0.95));
  }
  return grid;
}

void ReallocConfig::validate() const {
  if (p_grid.empty()) throw ConfigError("reallocation grid is empty");
  for (std::size_t i = 0; i < p_grid.size(); ++i) {
    const double p = checked_proportion(p_grid[i]);
    if (i > 0 && !(p > p_grid[i - 1])) {
      throw ConfigError("reallocation grid must be strictly increasing");
    }
  }
  if (!(pcr_min >= 0.0 && pcr_min <= 1.0)) {
    throw ConfigError(fmt::format("PCR floor {} outside [0, 1]", pcr_min));
  }
  if (cap < 1) throw ConfigError("size cap must be at least 1");
  if (max_k && *max_k < 2) throw ConfigError("max_k must be at least 2");
}

FlaggedPartition flag_for_reallocation(const DissimilarityMatrix& d_new, const Partition& previous,
                                       double p) {
  p = checked_proportion(p);
  const Partition prev = align_to(previous, d_new.ids());
  const std::size_t n = prev.size();
  FlaggedPartition out;
  out.silhouette = silhouette(d_new, prev).s;

  const auto m = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n) - 1e-9));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto& ids = d_new.ids();
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (out.silhouette[a] != out.silhouette[b]) return out.silhouette[a] < out.silhouette[b];
    return ids[a] < ids[b];
  });
  out.flagged.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m));

  std::vector<int> labels(prev.labels().begin(), prev.labels().end());
  int fresh = -1;
  for (std::size_t i : out.flagged) labels[i] = fresh--;
  out.partial = Partition(d_new.ids(), labels);
  return out;
}

Reallocation reallocate(const DissimilarityMatrix& d_new, const Partition& previous, double p,
                        Linkage linkage, FitIndex index, std::size_t cap,
                        std::optional<std::size_t> max_k) {
  if (cap < 1) throw ConfigError("size cap must be at least 1");
  FlaggedPartition flagged = flag_for_reallocation(d_new, previous, p);
  const std::size_t largest = flagged.partial.largest_cluster();
  if (largest > cap) {
    throw ConfigError(fmt::format(
        "size cap {} is smaller than a retained cluster of {} observations; "
        "run a fresh clustering instead",
        cap, largest));
  }
  Reallocation r;
  r.flagged = std::move(flagged.flagged);
  r.tree = agglomerate(d_new, linkage, {cap, &flagged.partial});
  r.curve = index_curve(r.tree, d_new, index, max_k);
  const std::size_t k = r.curve.best() ? r.curve.k[*r.curve.best()]
                                       : r.tree.leaf_count() - r.tree.forced_merges;
  r.partition = cut_tree(r.tree, k);
  return r;
}

std::size_t reallocated_count(const Partition& previous, const Partition& current) {
  const Partition cur = align_to(current, previous.ids());
  std::map<std::pair<int, int>, std::size_t> overlap;
  for (std::size_t i = 0; i < cur.size(); ++i) ++overlap[{cur.label(i), previous.label(i)}];
  std::vector<int> mapped(cur.cluster_count() + 1, 0);
  std::vector<std::size_t> best(cur.cluster_count() + 1, 0);
  // Map keys ascend by previous label within a current label, so strict >
  // keeps the smaller label on ties.
  for (const auto& [key, count] : overlap) {
    const auto c = static_cast<std::size_t>(key.first);
    if (count > best[c]) {
      best[c] = count;
      mapped[c] = key.second;
    }
  }
  std::size_t moved = 0;
  for (std::size_t i = 0; i < cur.size(); ++i) {
    if (mapped[static_cast<std::size_t>(cur.label(i))] != previous.label(i)) ++moved;
  }
  return moved;
}

TradeoffCurve tradeoff_grid(const DissimilarityMatrix& d_new, const Partition& previous,
                            const ReallocConfig& config) {
  config.validate();
  TradeoffCurve curve;
  curve.index = config.index;
  for (double p : config.p_grid) {
    TradeoffRow row;
    row.p = p;
    try {
      Reallocation r = reallocate(d_new, previous, p, config.linkage, config.index, config.cap,
                                  config.max_k);
      row.pcr = pcr(previous, r.partition);
      row.index = fit_index(d_new, r.partition, config.index);
      row.k = r.partition.cluster_count();
      row.reallocated = reallocated_count(previous, r.partition);
      row.partition = std::move(r.partition);
    } catch (const Error& e) {
      row.error = e.what();
    }
    curve.rows.push_back(std::move(row));
  }
  return curve;
}

InfeasibleStabilityError::InfeasibleStabilityError(double floor, double max_pcr)
    : Error(fmt::format("no reallocation reaches PCR >= {:.2f}; maximum achievable PCR is {:.4f}",
                        floor, max_pcr)),
      max_pcr_(max_pcr) {}

const TradeoffRow& select_stable(const TradeoffCurve& curve, double pcr_min) {
  const TradeoffRow* best = nullptr;
  double max_pcr = 0.0;
  for (const TradeoffRow& row : curve.rows) {
    if (!row.ok()) continue;
    max_pcr = std::max(max_pcr, row.pcr);
    if (row.pcr < pcr_min) continue;
    if (best == nullptr || row.index > best->index ||
        (row.index == best->index &&
         (row.pcr > best->pcr || (row.pcr == best->pcr && row.p < best->p)))) {
      best = &row;
    }
  }
  if (best == nullptr) throw InfeasibleStabilityError(pcr_min, max_pcr);
  return *best;
}

}  // namespace peergroup
