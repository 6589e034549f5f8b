#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "peergroup/dissimilarity.hpp"
#include "peergroup/error.hpp"
#include "peergroup/hier.hpp"
#include "peergroup/indices.hpp"
#include "peergroup/partition.hpp"

namespace peergroup {

// Evenly spaced grid 0, step, 2*step, ... up to and including 0.95.
std::vector<double> reallocation_grid(double step = 0.05);

struct ReallocConfig {
  std::vector<double> p_grid = reallocation_grid();
  double pcr_min = 0.90;
  std::size_t cap = 100;
  Linkage linkage = Linkage::ward;
  FitIndex index = FitIndex::ch;
  std::optional<std::size_t> max_k;  // default_max_clusters(n) when empty

  void validate() const;
};

struct FlaggedPartition {
  Partition partial;                 // retained clusters plus flagged singletons
  std::vector<std::size_t> flagged;  // observation indices, worst fit first
  std::vector<double> silhouette;    // per observation, under `previous` on the new data
};

// Silhouettes of `previous` on the new dissimilarities; the ceil(p n)
// observations with the lowest widths (ties by id) become singletons.
FlaggedPartition flag_for_reallocation(const DissimilarityMatrix& d_new, const Partition& previous,
                                       double p);

struct Reallocation {
  Partition partition;
  MergeTree tree;
  IndexCurve curve;
  std::vector<std::size_t> flagged;
};

// Capped agglomeration seeded with the retained clusters, cut where the index
// is best without going below the retained granularity.
Reallocation reallocate(const DissimilarityMatrix& d_new, const Partition& previous, double p,
                        Linkage linkage, FitIndex index, std::size_t cap,
                        std::optional<std::size_t> max_k = std::nullopt);

// Observations whose final cluster, mapped to the previous cluster it overlaps
// most (ties to the smaller label), differs from their previous cluster.
std::size_t reallocated_count(const Partition& previous, const Partition& current);

struct TradeoffRow {
  double p = 0.0;
  double pcr = 0.0;
  double index = 0.0;
  std::size_t k = 0;
  std::size_t reallocated = 0;
  std::optional<Partition> partition;
  std::string error;  // non-empty when this grid point failed

  bool ok() const { return error.empty(); }
};

struct TradeoffCurve {
  FitIndex index = FitIndex::ch;
  std::vector<TradeoffRow> rows;
};

TradeoffCurve tradeoff_grid(const DissimilarityMatrix& d_new, const Partition& previous,
                            const ReallocConfig& config);

// Thrown by select_stable when no row meets the PCR floor.
class InfeasibleStabilityError : public Error {
 public:
  InfeasibleStabilityError(double floor, double max_pcr);
  double max_achievable_pcr() const { return max_pcr_; }

 private:
  double max_pcr_;
};

// Best index among rows with PCR >= pcr_min; ties by larger PCR, then smaller p.
const TradeoffRow& select_stable(const TradeoffCurve& curve, double pcr_min);

}  // namespace peergroup
