#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

namespace oracle {

using peergroup::DissimilarityKind;
using peergroup::DissimilarityMatrix;
using peergroup::Linkage;
using peergroup::Partition;

std::vector<std::string> ids(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(fmt::format("o{:04}", i));
  return out;
}

Eigen::MatrixXd random_points(std::size_t n, std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = normal(rng);
  }
  return x;
}

DissimilarityMatrix euclidean(const Eigen::MatrixXd& points) {
  const auto n = points.rows();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      double s = 0.0;
      for (Eigen::Index c = 0; c < points.cols(); ++c) {
        const double diff = points(i, c) - points(j, c);
        s += diff * diff;
      }
      d(i, j) = std::sqrt(s);
    }
  }
  return DissimilarityMatrix(ids(static_cast<std::size_t>(n)), d, DissimilarityKind::metric);
}

DissimilarityMatrix random_dissimilarity(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.01, 1.0);
  const auto m = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) d(i, j) = d(j, i) = u(rng);
  }
  return DissimilarityMatrix(ids(n), d, DissimilarityKind::metric);
}

DissimilarityMatrix random_integer_dissimilarity(std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> u(1, 1000000);
  const auto m = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) d(i, j) = d(j, i) = u(rng);
  }
  return DissimilarityMatrix(ids(n), d, DissimilarityKind::metric);
}

Partition random_partition(std::size_t n, std::size_t k, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(1, static_cast<int>(k));
  std::vector<int> labels(n);
  for (auto& l : labels) l = pick(rng);
  return Partition(ids(n), labels);
}

double linkage_distance(const DissimilarityMatrix& d, const Members& a, const Members& b,
                        Linkage linkage) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double sum = 0.0;
  for (std::size_t i : a) {
    for (std::size_t j : b) {
      lo = std::min(lo, d(i, j));
      hi = std::max(hi, d(i, j));
      sum += d(i, j);
    }
  }
  switch (linkage) {
    case Linkage::single: return lo;
    case Linkage::complete: return hi;
    case Linkage::average: return sum / static_cast<double>(a.size() * b.size());
    case Linkage::ward: break;
  }
  throw std::logic_error("ward needs points");
}

double ward_distance(const Eigen::MatrixXd& points, const Members& a, const Members& b) {
  Eigen::VectorXd ca = Eigen::VectorXd::Zero(points.cols());
  Eigen::VectorXd cb = Eigen::VectorXd::Zero(points.cols());
  for (std::size_t i : a) ca += points.row(static_cast<Eigen::Index>(i)).transpose();
  for (std::size_t j : b) cb += points.row(static_cast<Eigen::Index>(j)).transpose();
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  ca /= na;
  cb /= nb;
  return 2.0 * na * nb / (na + nb) * (ca - cb).squaredNorm();
}

std::vector<NaiveMerge> naive_agglomerate(const DissimilarityMatrix& d, Linkage linkage,
                                          std::size_t cap, const Eigen::MatrixXd* points) {
  std::vector<Members> clusters;
  for (std::size_t i = 0; i < d.size(); ++i) clusters.push_back({i});
  std::vector<NaiveMerge> out;
  for (;;) {
    // Clusters stay ordered by smallest member, matching slot order.
    std::size_t bi = 0, bj = 0;
    double best = std::numeric_limits<double>::infinity();
    bool found = false;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
      for (std::size_t j = i + 1; j < clusters.size(); ++j) {
        if (clusters[i].size() + clusters[j].size() > cap) continue;
        const double v = linkage == Linkage::ward
                             ? ward_distance(*points, clusters[i], clusters[j])
                             : linkage_distance(d, clusters[i], clusters[j], linkage);
        if (!found || v < best) {
          found = true;
          best = v;
          bi = i;
          bj = j;
        }
      }
    }
    if (!found) break;
    out.push_back({clusters[bi], clusters[bj], best});
    clusters[bi].insert(clusters[bi].end(), clusters[bj].begin(), clusters[bj].end());
    std::sort(clusters[bi].begin(), clusters[bi].end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bj));
  }
  return out;
}

double pair_count_pcr(const Partition& previous, const Partition& current) {
  std::size_t before = 0, both = 0;
  for (std::size_t i = 0; i < previous.size(); ++i) {
    const auto ci = static_cast<std::size_t>(
        std::find(current.ids().begin(), current.ids().end(), previous.ids()[i]) -
        current.ids().begin());
    for (std::size_t j = i + 1; j < previous.size(); ++j) {
      if (previous.label(i) != previous.label(j)) continue;
      ++before;
      const auto cj = static_cast<std::size_t>(
          std::find(current.ids().begin(), current.ids().end(), previous.ids()[j]) -
          current.ids().begin());
      if (current.label(ci) == current.label(cj)) ++both;
    }
  }
  return static_cast<double>(both) / static_cast<double>(before);
}

double direct_silhouette(const DissimilarityMatrix& d, const Partition& p,
                         std::vector<double>* widths) {
  const std::size_t n = p.size();
  double total = 0.0;
  if (widths) widths->assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double own = 0.0;
    std::size_t own_count = 0;
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 1; c <= p.cluster_count(); ++c) {
      double s = 0.0;
      std::size_t m = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (static_cast<std::size_t>(p.label(j)) != c || j == i) continue;
        s += d(i, j);
        ++m;
      }
      if (static_cast<std::size_t>(p.label(i)) == c) {
        own = s;
        own_count = m;
      } else if (m > 0) {
        b = std::min(b, s / static_cast<double>(m));
      }
    }
    double s = 0.0;
    if (own_count > 0) {
      const double a = own / static_cast<double>(own_count);
      s = std::max(a, b) > 0.0 ? (b - a) / std::max(a, b) : 0.0;
    }
    if (widths) (*widths)[i] = s;
    total += s;
  }
  return total / static_cast<double>(n);
}

double centroid_ch(const Eigen::MatrixXd& points, const Partition& p) {
  const Eigen::RowVectorXd grand = points.colwise().mean();
  double within = 0.0, between = 0.0;
  for (const auto& members : p.members()) {
    Eigen::RowVectorXd c = Eigen::RowVectorXd::Zero(points.cols());
    for (std::size_t i : members) c += points.row(static_cast<Eigen::Index>(i));
    c /= static_cast<double>(members.size());
    for (std::size_t i : members) within += (points.row(static_cast<Eigen::Index>(i)) - c).squaredNorm();
    between += static_cast<double>(members.size()) * (c - grand).squaredNorm();
  }
  const double k = static_cast<double>(p.cluster_count());
  const double n = static_cast<double>(p.size());
  return (between / (k - 1.0)) / (within / (n - k));
}

double correlation(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

bool same_grouping(const Partition& a, const Partition& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      if (a.same_cluster(i, j) != b.same_cluster(i, j)) return false;
    }
  }
  return true;
}

}  // namespace oracle
