#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "manifest.hpp"

namespace peergroup::cli {

struct PreprocessOptions {
  std::string input;
  std::string kinds;
  double vif_threshold = 10.0;
};

struct DissimOptions {
  std::string input;
  bool euclidean = false;
  bool diagnostics = false;
  std::size_t iterations = 5000;
  std::size_t burn_in = 1000;
  std::size_t thin = 5;
  std::size_t chains = 4;
  std::uint64_t seed = 1;
};

struct ClusterOptions {
  std::string dissim;
  std::string method = "kirigami2";
  std::size_t cap = 100;
  std::string linkage = "ward";
  std::string index = "ch";
  std::optional<std::size_t> max_k;
  std::size_t k = 2;  // pam only
  std::uint64_t seed = 1;
  std::vector<std::size_t> sweep_caps;
};

struct ReallocateOptions {
  std::string dissim;
  std::string previous;
  double pcr_min = 0.90;
  double grid_step = 0.05;
  std::size_t cap = 100;
  std::string linkage = "ward";
  std::string index = "ch";
  std::optional<std::size_t> max_k;
};

struct ExplainOptions {
  std::string input;
  std::string partition;
  bool pairs = false;
  std::uint64_t seed = 1;
  std::size_t trees = 100;
  std::size_t max_trees = 6400;
};

struct FingerprintOptions {
  std::string percentiles;
  std::string partition;
  std::string input;  // feature table for --top-k
  std::vector<std::string> variables;
  std::optional<std::size_t> top_k;
  std::optional<std::string> highlight;
  std::uint64_t seed = 1;
};

struct SynthOptions {
  std::string kind = "blobs";
  std::vector<std::size_t> sizes{30, 30, 30};
  std::size_t dimensions = 3;
  double separation = 6.0;
  double sd = 1.0;
  double spread_ratio = 9.0;
  std::size_t drift_count = 5;
  std::uint64_t seed = 1;
};

void cmd_preprocess(const PreprocessOptions& o, RunRecord& run, std::ostream& out);
void cmd_dissim(const DissimOptions& o, RunRecord& run, std::ostream& out);
void cmd_cluster(const ClusterOptions& o, RunRecord& run, std::ostream& out);
void cmd_reallocate(const ReallocateOptions& o, RunRecord& run, std::ostream& out);
void cmd_explain(const ExplainOptions& o, RunRecord& run, std::ostream& out);
void cmd_fingerprint(const FingerprintOptions& o, RunRecord& run, std::ostream& out);
void cmd_synth(const SynthOptions& o, RunRecord& run, std::ostream& out);

}  // namespace peergroup::cli
