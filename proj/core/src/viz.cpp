#include "peergroup/viz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <unordered_map>

#include <fmt/format.h>

#include "peergroup/error.hpp"

namespace peergroup {

namespace {

constexpr std::array<std::string_view, 10> kPalette = {
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
    "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"};

std::string escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string header(double width, double height) {
  return fmt::format(
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{:.2f}\" "
      "height=\"{:.2f}\" viewBox=\"0 0 {:.2f} {:.2f}\" font-family=\"sans-serif\">\n"
      "<rect x=\"0\" y=\"0\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"#ffffff\"/>\n",
      width, height, width, height, width, height);
}

std::string text(double x, double y, std::string_view body, std::string_view anchor = "start",
                 int size = 12, std::string_view extra = "") {
  return fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"{}\" text-anchor=\"{}\"{}>{}</text>\n",
                     x, y, size, anchor, extra, escape(body));
}

// Maps data coordinates onto a plot rectangle.
struct Frame {
  double left, top, width, height;
  double x_min, x_max, y_min, y_max;

  double px(double x) const { return left + (x - x_min) / (x_max - x_min) * width; }
  double py(double y) const { return top + height - (y - y_min) / (y_max - y_min) * height; }
};

void widen(double& lo, double& hi) {
  if (!(hi > lo)) {
    const double pad = std::max(1.0, std::abs(lo)) * 0.5;
    lo -= pad;
    hi += pad;
  } else {
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
}

std::string axes(const Frame& f, std::string_view x_label, std::string_view y_label) {
  std::string out = fmt::format(
      "<rect class=\"frame\" x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" "
      "fill=\"none\" stroke=\"#333333\"/>\n",
      f.left, f.top, f.width, f.height);
  for (int t = 0; t <= 4; ++t) {
    const double fx = f.x_min + (f.x_max - f.x_min) * t / 4.0;
    const double fy = f.y_min + (f.y_max - f.y_min) * t / 4.0;
    out += fmt::format("<line class=\"tick\" x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"#333333\"/>\n",
                       f.px(fx), f.top + f.height, f.px(fx), f.top + f.height + 4);
    out += text(f.px(fx), f.top + f.height + 18, fmt::format("{:.3g}", fx), "middle", 10);
    out += fmt::format("<line class=\"tick\" x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"#333333\"/>\n",
                       f.left - 4, f.py(fy), f.left, f.py(fy));
    out += text(f.left - 8, f.py(fy) + 3, fmt::format("{:.3g}", fy), "end", 10);
  }
  out += text(f.left + f.width / 2, f.top + f.height + 38, x_label, "middle");
  const double ly = f.top + f.height / 2;
  out += text(18, ly, y_label, "middle", 12,
              fmt::format(" transform=\"rotate(-90 {:.2f} {:.2f})\"", 18.0, ly));
  return out;
}

}  // namespace

std::string_view cluster_colour(int label) {
  const int i = ((label - 1) % 10 + 10) % 10;
  return kPalette[static_cast<std::size_t>(i)];
}

FingerprintTable fingerprint_table(const PercentileTable& percentiles, const Partition& partition,
                                   std::span<const std::string> variables,
                                   std::optional<std::string> highlight) {
  if (variables.empty()) throw ConfigError("fingerprint needs at least one variable");
  std::vector<std::size_t> cols;
  for (const auto& v : variables) cols.push_back(percentiles.column(v));
  std::unordered_map<std::string, std::size_t> row_of;
  for (std::size_t r = 0; r < percentiles.ids.size(); ++r) row_of[percentiles.ids[r]] = r;

  FingerprintTable t;
  t.variables.assign(variables.begin(), variables.end());
  const std::size_t k = partition.cluster_count();
  if (k == 0) throw ConfigError("fingerprint needs a nonempty partition");
  for (std::size_t c = 0; c < k; ++c) t.clusters.push_back(static_cast<int>(c) + 1);
  t.cluster_sizes = partition.sizes();
  t.cells.assign(k * cols.size(), std::array<double, 5>{});
  std::vector<std::size_t> rows(partition.size());
  for (std::size_t i = 0; i < partition.size(); ++i) {
    auto it = row_of.find(partition.ids()[i]);
    if (it == row_of.end()) {
      throw Error(fmt::format("observation '{}' has no percentile row", partition.ids()[i]));
    }
    rows[i] = it->second;
    const auto c = static_cast<std::size_t>(partition.label(i) - 1);
    for (std::size_t v = 0; v < cols.size(); ++v) {
      const int bin = percentiles.bins(static_cast<Eigen::Index>(rows[i]), static_cast<Eigen::Index>(cols[v]));
      t.cells[c * cols.size() + v][static_cast<std::size_t>(bin - 1)] += 1.0;
    }
  }
  for (std::size_t c = 0; c < k; ++c) {
    const double size = static_cast<double>(t.cluster_sizes[c]);
    if (size == 0.0) throw Error(fmt::format("cluster {} is empty", c + 1));
    for (std::size_t v = 0; v < cols.size(); ++v) {
      for (double& cell : t.cells[c * cols.size() + v]) cell /= size;
    }
  }
  if (highlight) {
    const auto& ids = partition.ids();
    const auto pos = std::find(ids.begin(), ids.end(), *highlight);
    if (pos == ids.end()) {
      throw ConfigError(fmt::format("highlight id '{}' is not in the partition", *highlight));
    }
    const auto i = static_cast<std::size_t>(pos - ids.begin());
    FingerprintHighlight h;
    h.id = *highlight;
    h.cluster = partition.label(i);
    for (std::size_t col : cols) h.bins.push_back(percentiles.bins(static_cast<Eigen::Index>(rows[i]), static_cast<Eigen::Index>(col)));
    t.highlight = std::move(h);
  }
  return t;
}

std::string fingerprint_csv(const FingerprintTable& table) {
  std::string out = "cluster,size,variable";
  for (auto label : kQuintileLabels) out += fmt::format(",{}", label);
  out += ",highlight_bin\n";
  for (std::size_t c = 0; c < table.clusters.size(); ++c) {
    for (std::size_t v = 0; v < table.variables.size(); ++v) {
      out += fmt::format("{},{},{}", table.clusters[c], table.cluster_sizes[c], table.variables[v]);
      for (double cell : table.cell(c, v)) out += fmt::format(",{:.6f}", cell);
      out += ",";
      if (table.highlight && table.highlight->cluster == table.clusters[c]) {
        out += fmt::format("{}", table.highlight->bins[v]);
      }
      out += "\n";
    }
  }
  return out;
}

EllipseSpec ellipse_95(const Eigen::MatrixXd& points) {
  if (points.cols() != 2) throw Error("ellipse needs two-column points");
  if (points.rows() < 3) throw DomainError("ellipse needs at least three points");
  EllipseSpec e;
  e.center = points.colwise().mean().transpose();
  const Eigen::MatrixXd c = points.rowwise() - e.center.transpose();
  const Eigen::Matrix2d cov = (c.transpose() * c) / static_cast<double>(points.rows() - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(cov);
  const double lo = eig.eigenvalues()(0);
  const double hi = eig.eigenvalues()(1);
  if (!(lo > 1e-12 * std::max(1.0, hi))) throw DomainError("points are collinear; no ellipse");
  e.semi_major = std::sqrt(hi * kChiSquare2Quantile95);
  e.semi_minor = std::sqrt(lo * kChiSquare2Quantile95);
  if (hi - lo <= 1e-12 * hi) {
    e.rotation = 0.0;
  } else {
    const Eigen::Vector2d v = eig.eigenvectors().col(1);
    double angle = std::atan2(v(1), v(0));
    if (angle <= -std::numbers::pi / 2) angle += std::numbers::pi;
    if (angle > std::numbers::pi / 2) angle -= std::numbers::pi;
    e.rotation = angle;
  }
  return e;
}

std::string render_fingerprint(const FingerprintTable& table) {
  const double label_w = 200, cell_w = 110, cell_h = 26, top = 60, block_gap = 34;
  const std::size_t vars = table.variables.size();
  const std::size_t k = table.clusters.size();
  const double width = label_w + 5 * cell_w + 20;
  const double height = top + static_cast<double>(k) * (block_gap + static_cast<double>(vars) * cell_h) + 20;
  std::string out = header(width, height);
  out += text(width / 2, 22, "Peer group fingerprint", "middle", 16);
  for (std::size_t q = 0; q < 5; ++q) {
    out += text(label_w + (static_cast<double>(q) + 0.5) * cell_w, top - 10, kQuintileLabels[q],
                "middle", 11);
  }
  double y = top;
  for (std::size_t c = 0; c < k; ++c) {
    const int cluster = table.clusters[c];
    out += text(8, y + 20, fmt::format("Cluster {} (n = {})", cluster, table.cluster_sizes[c]),
                "start", 13, " font-weight=\"bold\"");
    y += block_gap;
    for (std::size_t v = 0; v < vars; ++v) {
      const auto& row = table.cell(c, v);
      const double top_share = *std::max_element(row.begin(), row.end());
      out += text(label_w - 8, y + cell_h / 2 + 4, table.variables[v], "end", 11);
      for (std::size_t q = 0; q < 5; ++q) {
        const double opacity = top_share > 0.0 ? row[q] / top_share : 0.0;
        out += fmt::format(
            "<rect class=\"cell\" data-cluster=\"{}\" data-variable=\"{}\" data-bin=\"{}\" "
            "x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"{}\" "
            "fill-opacity=\"{:.4f}\" stroke=\"#999999\" stroke-width=\"0.5\"/>\n",
            cluster, escape(table.variables[v]), q + 1, label_w + static_cast<double>(q) * cell_w, y,
            cell_w, cell_h, cluster_colour(cluster), opacity);
      }
      if (table.highlight && table.highlight->cluster == cluster) {
        const int bin = table.highlight->bins[v];
        out += fmt::format(
            "<circle class=\"highlight\" data-id=\"{}\" data-variable=\"{}\" cx=\"{:.2f}\" "
            "cy=\"{:.2f}\" r=\"{:.2f}\" fill=\"#000000\" stroke=\"#ffffff\" stroke-width=\"1.5\"/>\n",
            escape(table.highlight->id), escape(table.variables[v]),
            label_w + (static_cast<double>(bin) - 0.5) * cell_w, y + cell_h / 2, cell_h / 4);
      }
      y += cell_h;
    }
  }
  out += "</svg>\n";
  return out;
}

std::string render_scatter(const Eigen::MatrixXd& points, const Partition& partition,
                           const ScatterOptions& options) {
  if (points.cols() != 2) throw Error("scatter needs two-column points");
  if (points.rows() == 0) throw Error("scatter needs at least one point");
  if (static_cast<std::size_t>(points.rows()) != partition.size()) {
    throw Error("scatter points and partition differ in length");
  }
  const auto members = partition.members();
  std::vector<std::optional<EllipseSpec>> ellipses(members.size());
  double x_min = points.col(0).minCoeff(), x_max = points.col(0).maxCoeff();
  double y_min = points.col(1).minCoeff(), y_max = points.col(1).maxCoeff();
  if (options.ellipses) {
    for (std::size_t c = 0; c < members.size(); ++c) {
      if (members[c].size() < 3) continue;
      Eigen::MatrixXd sub(static_cast<Eigen::Index>(members[c].size()), 2);
      for (std::size_t r = 0; r < members[c].size(); ++r) {
        sub.row(static_cast<Eigen::Index>(r)) = points.row(static_cast<Eigen::Index>(members[c][r]));
      }
      try {
        ellipses[c] = ellipse_95(sub);
      } catch (const DomainError&) {
        continue;
      }
      const auto& e = *ellipses[c];
      x_min = std::min(x_min, e.center(0) - e.semi_major);
      x_max = std::max(x_max, e.center(0) + e.semi_major);
      y_min = std::min(y_min, e.center(1) - e.semi_major);
      y_max = std::max(y_max, e.center(1) + e.semi_major);
    }
  }
  widen(x_min, x_max);
  widen(y_min, y_max);
  const double plot = 420;
  // Equal scale on both axes keeps ellipses undistorted.
  const double span = std::max(x_max - x_min, y_max - y_min);
  const double cx = 0.5 * (x_min + x_max), cy = 0.5 * (y_min + y_max);
  const Frame f{70, 40, plot, plot, cx - span / 2, cx + span / 2, cy - span / 2, cy + span / 2};
  const double scale = plot / span;

  std::string out = header(f.left + plot + 130, f.top + plot + 60);
  if (!options.title.empty()) out += text(f.left + plot / 2, 24, options.title, "middle", 15);
  out += axes(f, options.x_label, options.y_label);
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const int label = partition.label(static_cast<std::size_t>(i));
    out += fmt::format(
        "<circle class=\"marker\" data-cluster=\"{}\" cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3.00\" "
        "fill=\"{}\" fill-opacity=\"0.8\"/>\n",
        label, f.px(points(i, 0)), f.py(points(i, 1)), cluster_colour(label));
  }
  for (std::size_t c = 0; c < ellipses.size(); ++c) {
    if (!ellipses[c]) continue;
    const auto& e = *ellipses[c];
    const int label = static_cast<int>(c) + 1;
    const double ex = f.px(e.center(0)), ey = f.py(e.center(1));
    out += fmt::format(
        "<ellipse class=\"ellipse\" data-cluster=\"{}\" data-center-x=\"{:.6f}\" "
        "data-center-y=\"{:.6f}\" cx=\"{:.2f}\" cy=\"{:.2f}\" rx=\"{:.2f}\" ry=\"{:.2f}\" "
        "transform=\"rotate({:.4f} {:.2f} {:.2f})\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>\n",
        label, e.center(0), e.center(1), ex, ey, e.semi_major * scale, e.semi_minor * scale,
        -e.rotation * 180.0 / std::numbers::pi, ex, ey, cluster_colour(label));
  }
  double ly = f.top + 10;
  for (std::size_t c = 0; c < members.size(); ++c) {
    const int label = static_cast<int>(c) + 1;
    out += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"10.00\" height=\"10.00\" fill=\"{}\"/>\n",
                       f.left + plot + 16, ly - 9, cluster_colour(label));
    out += text(f.left + plot + 32, ly, fmt::format("Cluster {}", label), "start", 11);
    ly += 18;
  }
  out += "</svg>\n";
  return out;
}

std::string render_curves(std::span<const Series> series, const CurveOptions& options) {
  if (series.empty()) throw Error("no series to plot");
  double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
  double y_min = x_min, y_max = -x_min;
  for (const auto& s : series) {
    if (s.x.empty() || s.x.size() != s.y.size()) {
      throw Error(fmt::format("series '{}' is empty or has mismatched lengths", s.name));
    }
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x_min = std::min(x_min, s.x[i]);
      x_max = std::max(x_max, s.x[i]);
      y_min = std::min(y_min, s.y[i]);
      y_max = std::max(y_max, s.y[i]);
    }
  }
  for (const auto& g : options.guidelines) {
    if (!std::isfinite(g.value)) continue;
    if (g.axis == Guideline::Axis::vertical) {
      x_min = std::min(x_min, g.value);
      x_max = std::max(x_max, g.value);
    } else {
      y_min = std::min(y_min, g.value);
      y_max = std::max(y_max, g.value);
    }
  }
  if (!std::isfinite(x_min)) x_min = x_max = 0.0;
  if (!std::isfinite(y_min)) y_min = y_max = 0.0;
  widen(x_min, x_max);
  widen(y_min, y_max);
  const Frame f{80, 40, 480, 320, x_min, x_max, y_min, y_max};
  std::string out = header(f.left + f.width + 170, f.top + f.height + 60);
  if (!options.title.empty()) out += text(f.left + f.width / 2, 24, options.title, "middle", 15);
  out += axes(f, options.x_label, options.y_label);
  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto colour = cluster_colour(static_cast<int>(s) + 1);
    std::string pts;
    std::string markers;
    for (std::size_t i = 0; i < series[s].x.size(); ++i) {
      const double x = series[s].x[i], y = series[s].y[i];
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      if (!pts.empty()) pts += ' ';
      pts += fmt::format("{:.2f},{:.2f}", f.px(x), f.py(y));
      markers += fmt::format(
          "<circle class=\"point\" data-series=\"{}\" cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"2.50\" "
          "fill=\"{}\"/>\n",
          s + 1, f.px(x), f.py(y), colour);
    }
    out += fmt::format(
        "<polyline class=\"series\" data-name=\"{}\" points=\"{}\" fill=\"none\" stroke=\"{}\" "
        "stroke-width=\"1.5\"/>\n",
        escape(series[s].name), pts, colour);
    out += markers;
    const double ly = f.top + 10 + 18 * static_cast<double>(s);
    out += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"{}\" stroke-width=\"2\"/>\n",
                       f.left + f.width + 14, ly - 4, f.left + f.width + 30, ly - 4, colour);
    out += text(f.left + f.width + 36, ly, series[s].name, "start", 11);
  }
  for (const auto& g : options.guidelines) {
    if (!std::isfinite(g.value)) continue;
    const bool dashed = g.style == Guideline::Style::dashed;
    const auto cls = dashed ? "guide-dashed" : "guide-dotted";
    const auto dash = dashed ? "6,4" : "2,3";
    double x1, y1, x2, y2;
    if (g.axis == Guideline::Axis::vertical) {
      x1 = x2 = f.px(g.value);
      y1 = f.top;
      y2 = f.top + f.height;
    } else {
      y1 = y2 = f.py(g.value);
      x1 = f.left;
      x2 = f.left + f.width;
    }
    out += fmt::format(
        "<line class=\"{}\" data-value=\"{:.6f}\" x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" "
        "y2=\"{:.2f}\" stroke=\"#555555\" stroke-dasharray=\"{}\"/>\n",
        cls, g.value, x1, y1, x2, y2, dash);
    if (!g.label.empty()) {
      out += text(x2 - 4, y1 + (g.axis == Guideline::Axis::vertical ? 12 : -4), g.label, "end", 10);
    }
  }
  out += "</svg>\n";
  return out;
}

}  // namespace peergroup
