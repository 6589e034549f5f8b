#include "peergroup/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_set>

#include <fmt/format.h>

#include "peergroup/error.hpp"
#include "peergroup/partition.hpp"

namespace peergroup {

VariableKind parse_variable_kind(std::string_view token) {
  if (token == "continuous") return VariableKind::continuous;
  if (token == "proportion") return VariableKind::proportion;
  if (token == "skewed_positive") return VariableKind::skewed_positive;
  throw ConfigError(fmt::format("unknown variable kind '{}' (expected continuous, proportion "
                                "or skewed_positive)",
                                token));
}

std::string_view to_string(VariableKind kind) {
  switch (kind) {
    case VariableKind::continuous: return "continuous";
    case VariableKind::proportion: return "proportion";
    case VariableKind::skewed_positive: return "skewed_positive";
  }
  return "continuous";
}

std::vector<std::string> FeatureTable::variable_names() const {
  std::vector<std::string> names;
  names.reserve(specs.size());
  for (const auto& s : specs) names.push_back(s.name);
  return names;
}

std::size_t FeatureTable::column(std::string_view name) const {
  for (std::size_t j = 0; j < specs.size(); ++j) {
    if (specs[j].name == name) return j;
  }
  throw Error(fmt::format("unknown variable '{}'", name));
}

void FeatureTable::validate() const {
  if (static_cast<std::size_t>(values.rows()) != ids.size() ||
      static_cast<std::size_t>(values.cols()) != specs.size()) {
    throw Error(fmt::format("feature table shape {}x{} does not match {} ids and {} variables",
                            values.rows(), values.cols(), ids.size(), specs.size()));
  }
  if (ids.size() < 2) throw Error("feature table needs at least 2 observations");
  if (specs.empty()) throw Error("feature table needs at least 1 variable");
  require_unique_ids(ids);
  std::unordered_set<std::string> names;
  for (const auto& s : specs) {
    if (!names.insert(s.name).second) throw Error(fmt::format("duplicate variable '{}'", s.name));
  }
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      if (!std::isfinite(values(i, j))) {
        throw Error(fmt::format("missing or non-finite value for '{}', variable '{}'", ids[i],
                                specs[j].name));
      }
    }
  }
}

FeatureTable select_rows(const FeatureTable& table, std::span<const std::size_t> rows) {
  FeatureTable out;
  out.specs = table.specs;
  out.standardized = table.standardized;
  out.center = table.center;
  out.scale = table.scale;
  out.values.resize(static_cast<Eigen::Index>(rows.size()), table.values.cols());
  out.ids.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.ids.push_back(table.ids.at(rows[r]));
    out.values.row(static_cast<Eigen::Index>(r)) =
        table.values.row(static_cast<Eigen::Index>(rows[r]));
  }
  return out;
}

FeatureTable select_columns(const FeatureTable& table, std::span<const std::size_t> cols) {
  FeatureTable out;
  out.ids = table.ids;
  out.standardized = table.standardized;
  out.values.resize(table.values.rows(), static_cast<Eigen::Index>(cols.size()));
  if (table.standardized) {
    out.center.resize(static_cast<Eigen::Index>(cols.size()));
    out.scale.resize(static_cast<Eigen::Index>(cols.size()));
  }
  for (std::size_t c = 0; c < cols.size(); ++c) {
    const auto src = static_cast<Eigen::Index>(cols[c]);
    const auto dst = static_cast<Eigen::Index>(c);
    out.specs.push_back(table.specs.at(cols[c]));
    out.values.col(dst) = table.values.col(src);
    if (table.standardized) {
      out.center(dst) = table.center(src);
      out.scale(dst) = table.scale(src);
    }
  }
  return out;
}

std::vector<double> transform_variable(std::span<const double> values, VariableKind kind,
                                       std::size_t n, std::string_view variable) {
  std::vector<double> out(values.size());
  const double shift = n > 0 ? 1.0 / (2.0 * static_cast<double>(n)) : 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    switch (kind) {
      case VariableKind::continuous:
        out[i] = v;
        break;
      case VariableKind::proportion: {
        if (!(v >= 0.0 && v <= 1.0)) {
          throw DomainError(fmt::format("variable '{}' row {}: value {} is outside [0,1] for a "
                                        "proportion",
                                        variable, i + 1, v));
        }
        double q = v;
        if (q == 0.0) q = shift;
        if (q == 1.0) q = 1.0 - shift;
        if (q <= 0.0 || q >= 1.0) {
          throw DomainError(fmt::format("variable '{}' row {}: boundary proportion needs n > 1",
                                        variable, i + 1));
        }
        out[i] = std::log(q / (1.0 - q));
        break;
      }
      case VariableKind::skewed_positive:
        if (!(v > 0.0) || !std::isfinite(v)) {
          throw DomainError(fmt::format("variable '{}' row {}: value {} is not positive, cannot "
                                        "log-transform",
                                        variable, i + 1, v));
        }
        out[i] = std::log(v);
        break;
    }
  }
  return out;
}

FeatureTable transform_table(const FeatureTable& raw) {
  raw.validate();
  FeatureTable out = raw;
  const std::size_t n = raw.rows();
  for (std::size_t j = 0; j < raw.cols(); ++j) {
    const Eigen::VectorXd column = raw.values.col(static_cast<Eigen::Index>(j));
    auto t = transform_variable(std::span<const double>(column.data(), n), raw.specs[j].kind, n,
                                raw.specs[j].name);
    out.values.col(static_cast<Eigen::Index>(j)) = Eigen::Map<const Eigen::VectorXd>(t.data(), n);
  }
  return out;
}

FeatureTable standardize(const FeatureTable& table) {
  if (table.standardized) throw ConfigError("table is already standardized");
  table.validate();
  FeatureTable out = table;
  const auto n = table.values.rows();
  const auto d = table.values.cols();
  out.center.resize(d);
  out.scale.resize(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const double mean = table.values.col(j).mean();
    const double ss = (table.values.col(j).array() - mean).square().sum();
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (!(sd > 1e-12 * std::max(1.0, std::abs(mean)))) {
      throw DomainError(fmt::format("variable '{}' has zero variance; drop it before "
                                    "standardizing",
                                    table.specs[j].name));
    }
    out.center(j) = mean;
    out.scale(j) = sd;
    out.values.col(j) = (table.values.col(j).array() - mean) / sd;
  }
  out.standardized = true;
  return out;
}

FeatureTable unstandardize(const FeatureTable& table) {
  if (!table.standardized) throw ConfigError("table is not standardized");
  FeatureTable out = table;
  for (Eigen::Index j = 0; j < table.values.cols(); ++j) {
    out.values.col(j) = table.values.col(j).array() * table.scale(j) + table.center(j);
  }
  out.standardized = false;
  out.center.resize(0);
  out.scale.resize(0);
  return out;
}

bool is_standardized(const FeatureTable& table, double tolerance) {
  const auto n = table.values.rows();
  if (n < 2) return false;
  for (Eigen::Index j = 0; j < table.values.cols(); ++j) {
    const double mean = table.values.col(j).mean();
    const double sd =
        std::sqrt((table.values.col(j).array() - mean).square().sum() / static_cast<double>(n - 1));
    if (std::abs(mean) > tolerance || std::abs(sd - 1.0) > tolerance) return false;
  }
  return true;
}

std::vector<double> variance_inflation_factors(const Eigen::MatrixXd& x) {
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  std::vector<double> vif(static_cast<std::size_t>(d), 1.0);
  if (d < 2) return vif;
  for (Eigen::Index j = 0; j < d; ++j) {
    Eigen::MatrixXd design(n, d);
    design.col(0).setOnes();
    for (Eigen::Index c = 0, k = 1; c < d; ++c) {
      if (c != j) design.col(k++) = x.col(c);
    }
    const Eigen::VectorXd y = x.col(j);
    const Eigen::VectorXd beta = design.colPivHouseholderQr().solve(y);
    const double rss = (y - design * beta).squaredNorm();
    const double tss = (y.array() - y.mean()).square().sum();
    const double unexplained = tss > 0.0 ? rss / tss : 0.0;
    vif[static_cast<std::size_t>(j)] =
        unexplained <= 1e-12 ? std::numeric_limits<double>::infinity() : 1.0 / unexplained;
  }
  return vif;
}

VifResult vif_prune(const FeatureTable& table, double threshold) {
  if (!(threshold > 1.0)) throw ConfigError("VIF threshold must exceed 1");
  if (!table.standardized && !is_standardized(table)) {
    throw ConfigError("vif_prune expects a standardized table");
  }
  VifResult result;
  result.retained = table;
  while (result.retained.cols() >= 2) {
    const auto vif = variance_inflation_factors(result.retained.values);
    std::size_t worst = 0;
    for (std::size_t j = 1; j < vif.size(); ++j) {
      if (vif[j] >= vif[worst]) worst = j;
    }
    result.final_vif = vif;
    if (!(vif[worst] > threshold)) break;
    if (result.retained.cols() < 3) {
      result.warnings.push_back(fmt::format(
          "stopped with {} variables: '{}' still has VIF {} above {}", result.retained.cols(),
          result.retained.specs[worst].name, vif[worst], threshold));
      break;
    }
    result.removed.push_back({result.retained.specs[worst].name, vif[worst]});
    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < result.retained.cols(); ++j) {
      if (j != worst) keep.push_back(j);
    }
    result.retained = select_columns(result.retained, keep);
  }
  if (result.retained.cols() < 2) result.final_vif.assign(result.retained.cols(), 1.0);
  return result;
}

std::vector<double> pit(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> u(n);
  for (std::size_t start = 0; start < n;) {
    std::size_t end = start;
    while (end + 1 < n && values[order[end + 1]] == values[order[start]]) ++end;
    const double rank = 0.5 * static_cast<double>(start + end) + 1.0;
    for (std::size_t k = start; k <= end; ++k) {
      u[order[k]] = (rank - 0.5) / static_cast<double>(n);
    }
    start = end + 1;
  }
  return u;
}

QuintileBins quintile_bin(std::span<const double> u) {
  QuintileBins out;
  const std::size_t n = u.size();
  out.bins.resize(n, 3);
  if (n == 0) return out;
  const bool all_tied = std::all_of(u.begin(), u.end(), [&](double v) { return v == u[0]; });
  if (all_tied) {
    out.degenerate = n > 1;
    return out;
  }
  const auto nn = static_cast<long long>(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Twice the 0-based average rank position; ranks are multiples of 0.5.
    const long long twice_pos = std::llround(2.0 * (u[i] * static_cast<double>(n) - 0.5));
    const long long bin = (5 * twice_pos) / (2 * nn) + 1;
    out.bins[i] = static_cast<int>(std::clamp(bin, 1LL, 5LL));
  }
  return out;
}

std::size_t PercentileTable::column(std::string_view name) const {
  for (std::size_t j = 0; j < variables.size(); ++j) {
    if (variables[j] == name) return j;
  }
  throw Error(fmt::format("unknown variable '{}' in percentile table", name));
}

PercentileTable percentile_table(std::vector<std::string> ids, std::vector<std::string> variables,
                                 Eigen::MatrixXd u) {
  PercentileTable out;
  out.ids = std::move(ids);
  out.variables = std::move(variables);
  out.u = std::move(u);
  const auto n = out.u.rows();
  out.bins.resize(n, out.u.cols());
  for (Eigen::Index j = 0; j < out.u.cols(); ++j) {
    const Eigen::VectorXd column = out.u.col(j);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!(column(i) > 0.0 && column(i) < 1.0)) {
        throw DomainError(fmt::format("percentile for '{}', variable '{}' is outside (0,1)",
                                      out.ids[i], out.variables[j]));
      }
    }
    const auto q = quintile_bin(std::span<const double>(column.data(), column.size()));
    if (q.degenerate) {
      out.warnings.push_back(fmt::format(
          "variable '{}': all values tied, every observation placed in the middle quintile",
          out.variables[j]));
    }
    for (Eigen::Index i = 0; i < n; ++i) out.bins(i, j) = q.bins[static_cast<std::size_t>(i)];
  }
  return out;
}

PercentileTable percentile_table(const FeatureTable& table) {
  table.validate();
  const auto n = table.values.rows();
  Eigen::MatrixXd u(n, table.values.cols());
  for (Eigen::Index j = 0; j < table.values.cols(); ++j) {
    const Eigen::VectorXd column = table.values.col(j);
    const auto p = pit(std::span<const double>(column.data(), column.size()));
    u.col(j) = Eigen::Map<const Eigen::VectorXd>(p.data(), n);
  }
  return percentile_table(table.ids, table.variable_names(), std::move(u));
}

}  // namespace peergroup
