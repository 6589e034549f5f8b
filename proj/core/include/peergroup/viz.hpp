#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "peergroup/partition.hpp"
#include "peergroup/preprocess.hpp"

namespace peergroup {

inline constexpr std::array<std::string_view, 5> kQuintileLabels = {
    "lowest 0-20%", "lowest 20-40%", "middle 40-60%", "highest 60-80%", "highest 80-100%"};

// chi-square(2) 0.95 quantile, -2 ln(0.05).
inline constexpr double kChiSquare2Quantile95 = 5.991464547107979;

struct FingerprintHighlight {
  std::string id;
  int cluster = 0;
  std::vector<int> bins;  // per selected variable, 1..5
};

struct FingerprintTable {
  std::vector<int> clusters;            // labels, ascending
  std::vector<std::string> variables;
  std::vector<std::size_t> cluster_sizes;
  // cells[c * variables.size() + v][q]: share of cluster c in quintile q.
  std::vector<std::array<double, 5>> cells;
  std::optional<FingerprintHighlight> highlight;

  const std::array<double, 5>& cell(std::size_t c, std::size_t v) const {
    return cells[c * variables.size() + v];
  }
};

// Matches partition ids to percentile ids. Every partition id must be in the
// percentile table.
FingerprintTable fingerprint_table(const PercentileTable& percentiles, const Partition& partition,
                                   std::span<const std::string> variables,
                                   std::optional<std::string> highlight = std::nullopt);

std::string fingerprint_csv(const FingerprintTable& table);

struct EllipseSpec {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double semi_major = 0.0;
  double semi_minor = 0.0;
  double rotation = 0.0;  // radians, major axis from the x axis, in (-pi/2, pi/2]
};

// 95% region of a bivariate Gaussian fitted by sample mean and covariance.
EllipseSpec ellipse_95(const Eigen::MatrixXd& points);

// Opacity of every cell is its share over the largest share in its row.
std::string render_fingerprint(const FingerprintTable& table);

struct ScatterOptions {
  std::string title;
  std::string x_label = "x";
  std::string y_label = "y";
  bool ellipses = true;
};

// Points are n x 2, row-aligned with the partition.
std::string render_scatter(const Eigen::MatrixXd& points, const Partition& partition,
                           const ScatterOptions& options = {});

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct Guideline {
  enum class Axis { horizontal, vertical };
  enum class Style { dashed, dotted };
  Axis axis = Axis::horizontal;
  double value = 0.0;
  Style style = Style::dashed;
  std::string label;
};

struct CurveOptions {
  std::string title;
  std::string x_label = "x";
  std::string y_label = "y";
  std::vector<Guideline> guidelines;
};

std::string render_curves(std::span<const Series> series, const CurveOptions& options = {});

// Palette colour for a cluster label (1-based), cycling through ten colours.
std::string_view cluster_colour(int label);

}  // namespace peergroup
