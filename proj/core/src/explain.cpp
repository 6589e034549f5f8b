#include "peergroup/explain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "peergroup/error.hpp"

namespace peergroup {

namespace {

// ---- PCA ----------------------------------------------------------------

void sign_fix(Eigen::MatrixXd& loadings) {
  for (Eigen::Index c = 0; c < loadings.cols(); ++c) {
    Eigen::Index arg = 0;
    for (Eigen::Index r = 1; r < loadings.rows(); ++r) {
      if (std::abs(loadings(r, c)) > std::abs(loadings(arg, c))) arg = r;
    }
    if (loadings(arg, c) < 0.0) loadings.col(c) *= -1.0;
  }
}

// ---- random forest -------------------------------------------------------

struct TrainingSet {
  Eigen::MatrixXd x;  // canonical row order (ids ascending)
  std::vector<int> y;  // 0..classes-1
  int classes = 0;
};

TrainingSet training_set(const FeatureTable& table, const Partition& labels) {
  table.validate();
  const Partition aligned = align_to(labels, table.ids);
  if (aligned.cluster_count() < 2) throw ConfigError("importance needs at least two clusters");
  for (std::size_t c = 0; c < aligned.cluster_count(); ++c) {
    if (aligned.sizes()[c] < 2) {
      throw ConfigError(fmt::format("cluster {} has fewer than two members", c + 1));
    }
  }
  std::vector<std::size_t> order(table.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return table.ids[a] < table.ids[b]; });
  TrainingSet t;
  t.classes = static_cast<int>(aligned.cluster_count());
  t.x.resize(static_cast<Eigen::Index>(order.size()), table.values.cols());
  for (std::size_t r = 0; r < order.size(); ++r) {
    t.x.row(static_cast<Eigen::Index>(r)) = table.values.row(static_cast<Eigen::Index>(order[r]));
    t.y.push_back(aligned.label(order[r]) - 1);
  }
  return t;
}

// Sum over classes of count^2 / total, the negative part of n * gini.
double purity(const std::vector<double>& counts, double total) {
  if (total <= 0.0) return 0.0;
  double s = 0.0;
  for (double c : counts) s += c * c;
  return s / total;
}

std::vector<double> grow_tree(const TrainingSet& t, std::size_t mtry, std::uint64_t seed,
                              std::size_t tree) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tree), static_cast<std::uint32_t>(tree >> 32)};
  std::mt19937_64 rng(seq);
  const auto n = static_cast<std::size_t>(t.x.rows());
  const auto d = static_cast<std::size_t>(t.x.cols());
  const auto classes = static_cast<std::size_t>(t.classes);
  std::vector<double> importance(d, 0.0);

  std::uniform_int_distribution<std::size_t> draw(0, n - 1);
  std::vector<std::size_t> root(n);
  for (auto& r : root) r = draw(rng);

  std::vector<std::size_t> vars(d);
  std::iota(vars.begin(), vars.end(), std::size_t{0});
  std::vector<std::vector<std::size_t>> stack{std::move(root)};
  std::vector<double> counts(classes), left(classes), right(classes);
  std::vector<std::size_t> sorted;
  while (!stack.empty()) {
    std::vector<std::size_t> node = std::move(stack.back());
    stack.pop_back();
    std::fill(counts.begin(), counts.end(), 0.0);
    for (std::size_t r : node) counts[static_cast<std::size_t>(t.y[r])] += 1.0;
    const double m = static_cast<double>(node.size());
    const auto nonzero = std::count_if(counts.begin(), counts.end(), [](double c) { return c > 0; });
    if (nonzero < 2) continue;
    const double parent = purity(counts, m);

    for (std::size_t i = 0; i < mtry; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, d - 1);
      std::swap(vars[i], vars[pick(rng)]);
    }
    double best_gain = 0.0;
    std::size_t best_var = d;
    double best_threshold = 0.0;
    for (std::size_t v = 0; v < mtry; ++v) {
      const auto col = static_cast<Eigen::Index>(vars[v]);
      sorted = node;
      std::sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
        const double xa = t.x(static_cast<Eigen::Index>(a), col);
        const double xb = t.x(static_cast<Eigen::Index>(b), col);
        return xa < xb || (xa == xb && a < b);
      });
      std::fill(left.begin(), left.end(), 0.0);
      right = counts;
      for (std::size_t s = 0; s + 1 < sorted.size(); ++s) {
        const auto label = static_cast<std::size_t>(t.y[sorted[s]]);
        left[label] += 1.0;
        right[label] -= 1.0;
        const double here = t.x(static_cast<Eigen::Index>(sorted[s]), col);
        const double next = t.x(static_cast<Eigen::Index>(sorted[s + 1]), col);
        if (!(here < next)) continue;
        const double nl = static_cast<double>(s + 1);
        const double gain = purity(left, nl) + purity(right, m - nl) - parent;
        if (gain > best_gain + 1e-12) {
          best_gain = gain;
          best_var = vars[v];
          best_threshold = 0.5 * (here + next);
        }
      }
    }
    if (best_var == d) continue;
    importance[best_var] += best_gain;
    std::vector<std::size_t> lo, hi;
    const auto col = static_cast<Eigen::Index>(best_var);
    for (std::size_t r : node) {
      (t.x(static_cast<Eigen::Index>(r), col) <= best_threshold ? lo : hi).push_back(r);
    }
    stack.push_back(std::move(hi));
    stack.push_back(std::move(lo));
  }
  return importance;
}

std::vector<double> mean_importance(const std::vector<std::vector<double>>& trees,
                                    std::size_t from, std::size_t to, std::size_t d) {
  std::vector<double> out(d, 0.0);
  for (std::size_t t = from; t < to; ++t) {
    for (std::size_t v = 0; v < d; ++v) out[v] += trees[t][v];
  }
  for (double& v : out) v /= static_cast<double>(to - from);
  return out;
}

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

// ---- discrimination --------------------------------------------------------

struct Gaussian {
  Eigen::VectorXd mean;
  Eigen::LLT<Eigen::MatrixXd> llt;
  double log_det = 0.0;
};

Eigen::MatrixXd covariance(const Eigen::MatrixXd& x, const Eigen::VectorXd& mean) {
  const Eigen::MatrixXd c = x.rowwise() - mean.transpose();
  if (x.rows() < 2) return Eigen::MatrixXd::Zero(x.cols(), x.cols());
  return (c.transpose() * c) / static_cast<double>(x.rows() - 1);
}

bool well_conditioned(const Eigen::MatrixXd& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s, Eigen::EigenvaluesOnly);
  const double top = eig.eigenvalues().maxCoeff();
  return eig.eigenvalues().minCoeff() > 1e-10 * std::max(1.0, top);
}

Gaussian prepare(Eigen::VectorXd mean, Eigen::MatrixXd s, std::size_t count, double ridge,
                 const std::string& what, DiscriminationReport& report) {
  const auto d = static_cast<std::size_t>(s.rows());
  if (count <= d || !well_conditioned(s)) {
    s += ridge * Eigen::MatrixXd::Identity(s.rows(), s.cols());
    report.shrinkage_applied = true;
    report.notes.push_back(fmt::format("{} regularised with ridge {}", what, ridge));
  }
  Gaussian g;
  g.mean = std::move(mean);
  g.llt.compute(s);
  if (g.llt.info() != Eigen::Success || !well_conditioned(s)) {
    throw DomainError(fmt::format("{} is singular even after regularisation", what));
  }
  g.log_det = 2.0 * g.llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  return g;
}

double mahalanobis2(const Gaussian& g, const Eigen::VectorXd& centre, const Eigen::VectorXd& x) {
  const Eigen::VectorXd z = g.llt.matrixL().solve(x - centre);
  return z.squaredNorm();
}

}  // namespace

PcaResult pca(const FeatureTable& table) {
  table.validate();
  const auto n = static_cast<Eigen::Index>(table.rows());
  const auto d = static_cast<Eigen::Index>(table.cols());
  if (n < 2 || d < 1) throw ConfigError("PCA needs at least two rows and one column");
  PcaResult r;
  r.center = table.values.colwise().mean().transpose();
  const Eigen::MatrixXd centred = table.values.rowwise() - r.center.transpose();
  const Eigen::MatrixXd cov = (centred.transpose() * centred) / static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success) throw DomainError("covariance eigendecomposition failed");
  r.variance = eig.eigenvalues().reverse().cwiseMax(0.0);
  r.loadings = eig.eigenvectors().rowwise().reverse();
  sign_fix(r.loadings);
  r.scores = centred * r.loadings;
  const double tol = 1e-10 * std::max(r.variance.maxCoeff(), std::numeric_limits<double>::min());
  for (Eigen::Index c = 0; c < d; ++c) {
    if (r.variance(c) > tol) {
      ++r.rank;
    } else {
      r.variance(c) = 0.0;
      r.warnings.push_back(fmt::format("component {} carries no variance", c + 1));
    }
  }
  if (n <= d) {
    r.warnings.push_back(fmt::format("{} observations for {} variables; trailing components are "
                                     "not identified",
                                     n, d));
  }
  return r;
}

double spearman(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error("spearman: length mismatch");
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  const double m = static_cast<double>(a.size());
  if (a.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double mean = (m + 1.0) / 2.0;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - mean) * (rb[i] - mean);
    saa += (ra[i] - mean) * (ra[i] - mean);
    sbb += (rb[i] - mean) * (rb[i] - mean);
  }
  if (saa == 0.0 || sbb == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sab / std::sqrt(saa * sbb);
}

ImportanceReport rf_importance(const FeatureTable& table, const Partition& labels,
                               const ForestConfig& config) {
  if (config.initial_trees < 2 || config.max_trees < config.initial_trees) {
    throw ConfigError("forest needs 2 <= initial_trees <= max_trees");
  }
  const TrainingSet t = training_set(table, labels);
  const std::size_t d = table.cols();
  if (d < 1) throw ConfigError("importance needs at least one variable");
  const std::size_t mtry = config.mtry.value_or(
      std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(d))))));
  if (mtry < 1 || mtry > d) throw ConfigError(fmt::format("mtry {} outside [1, {}]", mtry, d));

  std::vector<std::vector<double>> trees;
  std::size_t target = config.initial_trees;
  ImportanceReport r;
  for (;;) {
    while (trees.size() < target) trees.push_back(grow_tree(t, mtry, config.seed, trees.size()));
    if (d < 2) {
      r.stability = 1.0;
      break;
    }
    const std::size_t half = target / 2;
    const auto first = mean_importance(trees, 0, half, d);
    const auto second = mean_importance(trees, half, target, d);
    r.stability = spearman(first, second);
    if (r.stability >= config.stability_threshold) break;
    if (target >= config.max_trees) {
      r.ceiling_reached = true;
      break;
    }
    target = std::min(2 * target, config.max_trees);
  }
  r.trees = trees.size();
  r.variables = table.variable_names();
  r.importance = mean_importance(trees, 0, trees.size(), d);
  r.ranking.resize(d);
  std::iota(r.ranking.begin(), r.ranking.end(), std::size_t{0});
  std::stable_sort(r.ranking.begin(), r.ranking.end(), [&](std::size_t a, std::size_t b) {
    return r.importance[a] > r.importance[b];
  });
  return r;
}

std::vector<PairImportance> pairwise_importance(const FeatureTable& table,
                                                const Partition& partition,
                                                const ForestConfig& config) {
  const Partition aligned = align_to(partition, table.ids);
  const auto k = static_cast<int>(aligned.cluster_count());
  std::vector<PairImportance> out;
  for (int a = 1; a <= k; ++a) {
    for (int b = a + 1; b <= k; ++b) {
      std::vector<std::size_t> rows;
      std::vector<int> sub_labels;
      for (std::size_t i = 0; i < aligned.size(); ++i) {
        if (aligned.label(i) == a || aligned.label(i) == b) {
          rows.push_back(i);
          sub_labels.push_back(aligned.label(i));
        }
      }
      const FeatureTable sub = select_rows(table, rows);
      PairImportance p;
      p.cluster_a = a;
      p.cluster_b = b;
      p.report = rf_importance(sub, Partition(sub.ids, sub_labels), config);
      out.push_back(std::move(p));
    }
  }
  return out;
}

DiscriminationReport discriminate(const FeatureTable& table, const Partition& labels,
                                  const DiscriminationOptions& options) {
  table.validate();
  const Partition aligned = align_to(labels, table.ids);
  if (aligned.cluster_count() != 2) {
    throw ConfigError(fmt::format("discrimination needs exactly two clusters, got {}",
                                  aligned.cluster_count()));
  }
  if (!(options.ridge > 0.0)) throw ConfigError("ridge must be positive");
  std::array<std::vector<Eigen::Index>, 2> rows;
  for (std::size_t i = 0; i < aligned.size(); ++i) {
    rows[static_cast<std::size_t>(aligned.label(i) - 1)].push_back(static_cast<Eigen::Index>(i));
  }
  DiscriminationReport r;
  r.n = aligned.size();
  std::array<Eigen::MatrixXd, 2> x;
  std::array<Eigen::VectorXd, 2> means;
  std::array<Eigen::MatrixXd, 2> covs;
  for (std::size_t c = 0; c < 2; ++c) {
    x[c] = table.values(rows[c], Eigen::all);
    means[c] = x[c].colwise().mean().transpose();
    covs[c] = covariance(x[c], means[c]);
  }
  const double n0 = static_cast<double>(rows[0].size());
  const double n1 = static_cast<double>(rows[1].size());
  Eigen::MatrixXd pooled = ((n0 - 1.0) * covs[0] + (n1 - 1.0) * covs[1]);
  if (n0 + n1 > 2.0) pooled /= (n0 + n1 - 2.0);
  const Eigen::VectorXd overall = table.values.colwise().mean().transpose();

  const Gaussian shared = prepare(means[0], pooled, r.n - 1, options.ridge, "pooled covariance", r);
  std::array<Gaussian, 2> own;
  for (std::size_t c = 0; c < 2; ++c) {
    own[c] = prepare(means[c], covs[c], rows[c].size(), options.ridge,
                     fmt::format("covariance of cluster {}", c + 1), r);
  }

  for (std::size_t c = 0; c < 2; ++c) {
    for (Eigen::Index i = 0; i < x[c].rows(); ++i) {
      const Eigen::VectorXd p = x[c].row(i).transpose();
      const double lda0 = mahalanobis2(shared, means[0], p);
      const double lda1 = mahalanobis2(shared, means[1], p);
      const double qda0 = own[0].log_det + mahalanobis2(own[0], means[0], p);
      const double qda1 = own[1].log_det + mahalanobis2(own[1], means[1], p);
      const double md0 = own[0].log_det + mahalanobis2(own[0], overall, p);
      const double md1 = own[1].log_det + mahalanobis2(own[1], overall, p);
      ++r.lda[c][lda1 < lda0 ? 1 : 0];
      ++r.qda[c][qda1 < qda0 ? 1 : 0];
      ++r.md[c][md1 < md0 ? 1 : 0];
    }
  }
  auto accuracy = [&](const Confusion& m) {
    return static_cast<double>(m[0][0] + m[1][1]) / static_cast<double>(r.n);
  };
  r.lda_accuracy = accuracy(r.lda);
  r.qda_accuracy = accuracy(r.qda);
  r.md_accuracy = accuracy(r.md);
  return r;
}

}  // namespace peergroup
