#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace peergroup {

enum class VariableKind { continuous, proportion, skewed_positive };

// Parses "continuous", "proportion" or "skewed_positive"; throws ConfigError
// naming the token otherwise.
VariableKind parse_variable_kind(std::string_view token);
std::string_view to_string(VariableKind kind);

struct VariableSpec {
  std::string name;
  VariableKind kind = VariableKind::continuous;

  friend bool operator==(const VariableSpec&, const VariableSpec&) = default;
};

// Per-organisation variables. Rows are observations, columns follow `specs`.
struct FeatureTable {
  std::vector<std::string> ids;
  std::vector<VariableSpec> specs;
  Eigen::MatrixXd values;
  bool standardized = false;
  // Populated by standardize(); x_original = x_standard * scale + center.
  Eigen::VectorXd center;
  Eigen::VectorXd scale;

  std::size_t rows() const { return ids.size(); }
  std::size_t cols() const { return specs.size(); }
  std::vector<std::string> variable_names() const;
  // Column index of `name`; throws Error when absent.
  std::size_t column(std::string_view name) const;

  // Checks shape, uniqueness of ids and names, finiteness; throws on failure.
  void validate() const;
};

// Subset of rows, in the order given.
FeatureTable select_rows(const FeatureTable& table, std::span<const std::size_t> rows);
FeatureTable select_columns(const FeatureTable& table, std::span<const std::size_t> cols);

// Maps one raw column onto the clustering scale:
//   proportion       logit, with exact 0 and 1 moved to 1/(2n) and 1-1/(2n)
//   skewed_positive  natural log
//   continuous       identity
// `n` is the sample size used by the boundary shift. Out-of-domain values
// raise DomainError naming `variable` and the offending row.
std::vector<double> transform_variable(std::span<const double> values, VariableKind kind,
                                       std::size_t n, std::string_view variable = "");

// Applies transform_variable to every column.
FeatureTable transform_table(const FeatureTable& raw);

// Centres each column by its mean and divides by its sample standard
// deviation (n-1 denominator). Throws DomainError on a zero-variance column and
// ConfigError when the table is already flagged standardized.
FeatureTable standardize(const FeatureTable& table);
FeatureTable unstandardize(const FeatureTable& table);

// True when every column has mean 0 and sample sd 1 within `tolerance`.
bool is_standardized(const FeatureTable& table, double tolerance = 1e-6);

struct VifRemoval {
  std::string variable;
  double vif = 0.0;  // +inf for an exact linear combination
};

struct VifResult {
  FeatureTable retained;
  std::vector<VifRemoval> removed;
  // VIF of every retained variable at termination, in retained column order.
  std::vector<double> final_vif;
  std::vector<std::string> warnings;
};

// Variance inflation factor 1/(1-R^2) of every column regressed (with
// intercept) on the others. R^2 within 1e-12 of one gives +inf.
std::vector<double> variance_inflation_factors(const Eigen::MatrixXd& x);

// Repeatedly removes the column with the largest VIF while it exceeds
// `threshold`, recomputing after each removal. Among tied maxima the later
// column is removed. Removal stops, with a warning, once fewer than three
// variables would remain.
VifResult vif_prune(const FeatureTable& table, double threshold = 10.0);

// Probability integral transform by rank: (r - 0.5)/n with average ranks for ties.
std::vector<double> pit(std::span<const double> values);

struct QuintileBins {
  std::vector<int> bins;  // 1..5
  bool degenerate = false;  // every value tied; all assigned to bin 3
};

// Bins PIT values by rank position p (0-based, average position for ties):
// bin = floor(5p/n) + 1. Each bin holds floor(n/5) or ceil(n/5) observations
// when there are no ties; tied values always share a bin.
QuintileBins quintile_bin(std::span<const double> u);

struct PercentileTable {
  std::vector<std::string> ids;
  std::vector<std::string> variables;
  Eigen::MatrixXd u;                                          // n x d, in (0,1)
  Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic> bins;    // n x d, 1..5
  std::vector<std::string> warnings;

  std::size_t column(std::string_view name) const;
};

PercentileTable percentile_table(const FeatureTable& table);
// Rebuilds bins from stored PIT values.
PercentileTable percentile_table(std::vector<std::string> ids, std::vector<std::string> variables,
                                 Eigen::MatrixXd u);

}  // namespace peergroup
