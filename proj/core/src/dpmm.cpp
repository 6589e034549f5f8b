#include "peergroup/dpmm.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "peergroup/error.hpp"

namespace peergroup {

namespace {

constexpr double kLogPi = 1.14472988584940017414;
constexpr double kLog2Pi = 1.83787706640934548356;

// Student-t predictive of one dimension, cached as the pieces of its log density.
struct Predictive {
  double loc = 0.0;
  double log_norm = 0.0;
  double inv_nu_scale2 = 0.0;
  double half_nu_plus_one = 0.0;

  double log_density(double x) const {
    const double z = x - loc;
    return log_norm - half_nu_plus_one * std::log1p(z * z * inv_nu_scale2);
  }
};

struct Posterior {
  double k_n, m_n, a_n, b_n;
};

Posterior posterior(const NormalInverseGamma& prior, double count, double sum, double sumsq) {
  Posterior p{};
  p.k_n = prior.k0 + count;
  p.m_n = (prior.k0 * prior.m0 + sum) / p.k_n;
  p.a_n = prior.a0 + 0.5 * count;
  const double ss = count > 0.0 ? std::max(0.0, sumsq - sum * sum / count) : 0.0;
  const double mean = count > 0.0 ? sum / count : 0.0;
  const double dev = mean - prior.m0;
  p.b_n = prior.b0 + 0.5 * ss + prior.k0 * count * dev * dev / (2.0 * p.k_n);
  return p;
}

Predictive predictive(const Posterior& p) {
  const double nu = 2.0 * p.a_n;
  const double scale2 = p.b_n * (p.k_n + 1.0) / (p.a_n * p.k_n);
  Predictive out;
  out.loc = p.m_n;
  out.half_nu_plus_one = 0.5 * (nu + 1.0);
  out.inv_nu_scale2 = 1.0 / (nu * scale2);
  out.log_norm = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                 0.5 * (std::log(nu * scale2) + kLogPi);
  return out;
}

double log_marginal(const NormalInverseGamma& prior, double count, double sum, double sumsq) {
  const Posterior p = posterior(prior, count, sum, sumsq);
  return std::lgamma(p.a_n) - std::lgamma(prior.a0) + prior.a0 * std::log(prior.b0) -
         p.a_n * std::log(p.b_n) + 0.5 * (std::log(prior.k0) - std::log(p.k_n)) -
         0.5 * count * kLog2Pi;
}

double log_gamma_density(double x, const GammaPrior& g) {
  return g.shape * std::log(g.rate) - std::lgamma(g.shape) + (g.shape - 1.0) * std::log(x) -
         g.rate * x;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class Sampler {
 public:
  Sampler(const Eigen::MatrixXd& x, const DpmmConfig& config, std::uint64_t seed)
      : x_(x), config_(config), n_(static_cast<std::size_t>(x.rows())),
        d_(static_cast<std::size_t>(x.cols())), z_(n_, 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    rng_.seed(seq);
    for (std::size_t k = 0; k < d_; ++k) priors_.push_back(config.base_for(k));
    prior_log_pred_.assign(n_, 0.0);
    for (std::size_t k = 0; k < d_; ++k) {
      const Predictive p = predictive(posterior(priors_[k], 0.0, 0.0, 0.0));
      for (std::size_t i = 0; i < n_; ++i) prior_log_pred_[i] += p.log_density(at(i, k));
    }
    // Sequential start: each point is placed given the ones before it.
    alpha_ = config.alpha_prior.shape / config.alpha_prior.rate;
    for (std::size_t i = 0; i < n_; ++i) place(i);
  }

  void sweep() {
    for (std::size_t i = 0; i < n_; ++i) {
      remove(i);
      place(i);
    }
    update_alpha();
  }

  double alpha() const { return alpha_; }
  std::size_t cluster_count() const { return clusters_.size(); }
  const std::vector<std::size_t>& labels() const { return z_; }

  double log_posterior() const {
    const double n = static_cast<double>(n_);
    double lp = static_cast<double>(clusters_.size()) * std::log(alpha_) + std::lgamma(alpha_) -
                std::lgamma(alpha_ + n) + log_gamma_density(alpha_, config_.alpha_prior);
    for (const Cluster& c : clusters_) {
      const double count = static_cast<double>(c.count);
      lp += std::lgamma(count);
      for (std::size_t k = 0; k < d_; ++k) lp += log_marginal(priors_[k], count, c.sum[k], c.sumsq[k]);
    }
    return lp;
  }

 private:
  struct Cluster {
    std::size_t count = 0;
    std::vector<double> sum;
    std::vector<double> sumsq;
    std::vector<Predictive> pred;
  };

  double at(std::size_t i, std::size_t k) const {
    return x_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
  }

  void refresh(std::size_t c) {
    Cluster& cl = clusters_[c];
    cl.pred.resize(d_);
    const double count = static_cast<double>(cl.count);
    for (std::size_t k = 0; k < d_; ++k) {
      cl.pred[k] = predictive(posterior(priors_[k], count, cl.sum[k], cl.sumsq[k]));
    }
  }

  // Draws a cluster for the unassigned point i.
  void place(std::size_t i) {
    const std::size_t k = clusters_.size();
    logw_.resize(k + 1);
    for (std::size_t c = 0; c < k; ++c) {
      double lw = std::log(static_cast<double>(clusters_[c].count));
      for (std::size_t dim = 0; dim < d_; ++dim) {
        lw += clusters_[c].pred[dim].log_density(at(i, dim));
      }
      logw_[c] = lw;
    }
    logw_[k] = std::log(alpha_) + prior_log_pred_[i];
    const double top = *std::max_element(logw_.begin(), logw_.end());
    double total = 0.0;
    for (double& w : logw_) {
      w = std::exp(w - top);
      total += w;
    }
    double u = std::uniform_real_distribution<double>(0.0, total)(rng_);
    std::size_t pick = k;
    for (std::size_t c = 0; c <= k; ++c) {
      u -= logw_[c];
      if (u < 0.0) {
        pick = c;
        break;
      }
    }
    add(i, pick);
  }

  void remove(std::size_t i) {
    const std::size_t c = z_[i];
    Cluster& cl = clusters_[c];
    --cl.count;
    if (cl.count == 0) {
      const std::size_t last = clusters_.size() - 1;
      if (c != last) {
        clusters_[c] = std::move(clusters_[last]);
        for (std::size_t& label : z_) {
          if (label == last) label = c;
        }
      }
      clusters_.pop_back();
      return;
    }
    for (std::size_t k = 0; k < d_; ++k) {
      cl.sum[k] -= at(i, k);
      cl.sumsq[k] -= at(i, k) * at(i, k);
    }
    refresh(c);
  }

  void add(std::size_t i, std::size_t c) {
    if (c == clusters_.size()) {
      Cluster fresh;
      fresh.sum.assign(d_, 0.0);
      fresh.sumsq.assign(d_, 0.0);
      clusters_.push_back(std::move(fresh));
    }
    Cluster& cl = clusters_[c];
    ++cl.count;
    for (std::size_t k = 0; k < d_; ++k) {
      cl.sum[k] += at(i, k);
      cl.sumsq[k] += at(i, k) * at(i, k);
    }
    z_[i] = c;
    refresh(c);
  }

  void update_alpha() {
    const double n = static_cast<double>(n_);
    const double k = static_cast<double>(clusters_.size());
    const double a = config_.alpha_prior.shape;
    const double b = config_.alpha_prior.rate;
    std::gamma_distribution<double> g1(alpha_ + 1.0, 1.0);
    std::gamma_distribution<double> g2(n, 1.0);
    const double x1 = g1(rng_);
    const double x2 = g2(rng_);
    const double eta = x1 / (x1 + x2);
    const double rate = b - std::log(eta);
    const double odds = (a + k - 1.0) / (n * rate);
    const double weight = odds / (1.0 + odds);
    const double shape =
        std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < weight ? a + k : a + k - 1.0;
    alpha_ = std::gamma_distribution<double>(shape, 1.0 / rate)(rng_);
    alpha_ = std::max(alpha_, std::numeric_limits<double>::min());
  }

  const Eigen::MatrixXd& x_;
  const DpmmConfig& config_;
  std::size_t n_;
  std::size_t d_;
  std::vector<NormalInverseGamma> priors_;
  std::vector<double> prior_log_pred_;
  std::vector<Cluster> clusters_;
  std::vector<std::size_t> z_;
  std::vector<double> logw_;
  double alpha_ = 1.0;
  std::mt19937_64 rng_;
};

void require_positive(double v, std::string_view what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ConfigError(fmt::format("{} must be positive and finite, got {}", what, v));
  }
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t m = a.size();
  if (m == 0) return 1.0;
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(m);
  mb /= static_cast<double>(m);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) {
    // Constant vectors carry no pattern to correlate; identical ones agree.
    return a == b ? 1.0 : std::numeric_limits<double>::quiet_NaN();
  }
  return sab / std::sqrt(saa * sbb);
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double variance_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

TraceDiagnostics trace_diagnostics(const std::vector<const std::vector<double>*>& traces) {
  TraceDiagnostics t;
  double within = 0.0;
  double length = 0.0;
  for (const auto* trace : traces) {
    const double m = mean_of(*trace);
    t.chain_means.push_back(m);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < trace->size(); ++i) {
      const double dv = (*trace)[i] - m;
      den += dv * dv;
      if (i + 1 < trace->size()) num += dv * ((*trace)[i + 1] - m);
    }
    t.lag1_autocorrelation.push_back(den > 0.0 ? num / den : 0.0);
    within += variance_of(*trace);
    length += static_cast<double>(trace->size());
  }
  const double chains = static_cast<double>(traces.size());
  within /= chains;
  length /= chains;
  const double between = length * variance_of(t.chain_means);
  if (within > 0.0) {
    t.between_within_ratio = between / within;
  } else {
    t.between_within_ratio = between > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  return t;
}

}  // namespace

void DpmmConfig::validate(std::size_t dimensions) const {
  if (iterations <= burn_in) {
    throw ConfigError(fmt::format("iterations ({}) must exceed burn-in ({})", iterations, burn_in));
  }
  if (thin < 1) throw ConfigError("thinning interval must be at least 1");
  if (chains < 1) throw ConfigError("at least one chain is required");
  require_positive(alpha_prior.shape, "alpha prior shape");
  require_positive(alpha_prior.rate, "alpha prior rate");
  for (const auto& b : base_measure) {
    if (!std::isfinite(b.m0)) throw ConfigError("base measure m0 must be finite");
    require_positive(b.k0, "base measure k0");
    require_positive(b.a0, "base measure a0");
    require_positive(b.b0, "base measure b0");
  }
  if (dimensions > 0 && base_measure.size() > 1 && base_measure.size() != dimensions) {
    throw ConfigError(fmt::format("base measure has {} entries for {} dimensions",
                                  base_measure.size(), dimensions));
  }
}

NormalInverseGamma DpmmConfig::base_for(std::size_t dimension) const {
  if (base_measure.empty()) return {};
  if (base_measure.size() == 1) return base_measure.front();
  return base_measure.at(dimension);
}

std::size_t DpmmConfig::retained_samples() const {
  if (iterations <= burn_in || thin == 0) return 0;
  return (iterations - burn_in + thin - 1) / thin;
}

std::uint64_t chain_seed(std::uint64_t base_seed, std::size_t index) {
  return splitmix64(base_seed ^ splitmix64(static_cast<std::uint64_t>(index)));
}

ChainResult run_chain(const FeatureTable& data, const DpmmConfig& config, std::uint64_t seed) {
  data.validate();
  config.validate(data.cols());
  if (data.rows() < 2) throw ConfigError("DPMM needs at least two observations");
  if (data.cols() < 1) throw ConfigError("DPMM needs at least one variable");
  if (!is_standardized(data)) {
    throw ConfigError("DPMM input must be standardized (mean 0, sd 1 per column)");
  }
  const std::size_t n = data.rows();
  Sampler sampler(data.values, config, seed);
  ChainResult r;
  r.ids = data.ids;
  r.seed = seed;
  r.coassignment = CountMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::vector<std::vector<std::size_t>> members;
  for (std::size_t it = 0; it < config.iterations; ++it) {
    sampler.sweep();
    if (it < config.burn_in || (it - config.burn_in) % config.thin != 0) continue;
    members.assign(sampler.cluster_count(), {});
    for (std::size_t i = 0; i < n; ++i) members[sampler.labels()[i]].push_back(i);
    for (const auto& group : members) {
      for (std::size_t a = 0; a < group.size(); ++a) {
        for (std::size_t b = a; b < group.size(); ++b) {
          ++r.coassignment(static_cast<Eigen::Index>(group[a]), static_cast<Eigen::Index>(group[b]));
        }
      }
    }
    ++r.samples_used;
    r.alpha_trace.push_back(sampler.alpha());
    r.log_posterior_trace.push_back(sampler.log_posterior());
    r.cluster_count_trace.push_back(sampler.cluster_count());
  }
  r.coassignment = r.coassignment.triangularView<Eigen::Upper>();
  const CountMatrix upper = r.coassignment;
  r.coassignment = upper + upper.transpose();
  r.coassignment.diagonal() /= 2;
  return r;
}

std::vector<ChainResult> run_chains(const FeatureTable& data, const DpmmConfig& config) {
  config.validate(data.cols());
  std::vector<std::future<ChainResult>> futures;
  for (std::size_t c = 0; c < config.chains; ++c) {
    futures.push_back(std::async(std::launch::async, [&data, &config, c] {
      return run_chain(data, config, chain_seed(config.seed, c));
    }));
  }
  std::vector<ChainResult> out;
  for (auto& f : futures) out.push_back(f.get());
  return out;
}

DissimilarityMatrix posterior_dissimilarity(const std::vector<ChainResult>& chains) {
  if (chains.empty()) throw ConfigError("no chains to pool");
  const auto& ids = chains.front().ids;
  CountMatrix total = CountMatrix::Zero(static_cast<Eigen::Index>(ids.size()),
                                        static_cast<Eigen::Index>(ids.size()));
  std::size_t samples = 0;
  for (const auto& c : chains) {
    if (c.ids != ids) throw Error("chains were run on different observations");
    total += c.coassignment;
    samples += c.samples_used;
  }
  if (samples == 0) throw Error("chains hold no retained samples");
  Eigen::MatrixXd d = 1.0 - total.cast<double>().array() / static_cast<double>(samples);
  d.diagonal().setZero();
  return DissimilarityMatrix(ids, std::move(d), DissimilarityKind::posterior);
}

DissimilarityMatrix posterior_dissimilarity(const ChainResult& chain) {
  return posterior_dissimilarity(std::vector<ChainResult>{chain});
}

double dpmm_log_posterior(const Eigen::MatrixXd& x, std::span<const int> labels, double alpha,
                          const DpmmConfig& config) {
  const auto n = static_cast<std::size_t>(x.rows());
  const auto d = static_cast<std::size_t>(x.cols());
  if (labels.size() != n) throw Error("label count does not match the data");
  if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
  const int k = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<double> count(static_cast<std::size_t>(k), 0.0);
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(k, static_cast<Eigen::Index>(d));
  Eigen::MatrixXd sumsq = Eigen::MatrixXd::Zero(k, static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < n; ++i) {
    const int c = labels[i];
    if (c < 0) throw Error("labels must be nonnegative");
    count[static_cast<std::size_t>(c)] += 1.0;
    sum.row(c) += x.row(static_cast<Eigen::Index>(i));
    sumsq.row(c) += x.row(static_cast<Eigen::Index>(i)).cwiseAbs2();
  }
  double lp = std::lgamma(alpha) - std::lgamma(alpha + static_cast<double>(n)) +
              log_gamma_density(alpha, config.alpha_prior);
  for (int c = 0; c < k; ++c) {
    const double m = count[static_cast<std::size_t>(c)];
    if (m == 0.0) continue;
    lp += std::log(alpha) + std::lgamma(m);
    for (std::size_t j = 0; j < d; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      lp += log_marginal(config.base_for(j), m, sum(c, jj), sumsq(c, jj));
    }
  }
  return lp;
}

AgreementReport chain_agreement(const std::vector<ChainResult>& chains,
                                const AgreementOptions& options) {
  if (chains.size() < 2) throw ConfigError("agreement diagnostics need at least two chains");
  if (options.density_bins < 1) throw ConfigError("density needs at least one bin");
  AgreementReport r;
  for (const auto& c : chains) {
    const DissimilarityMatrix pdm = posterior_dissimilarity(c);
    std::vector<double> entries;
    for (std::size_t i = 0; i < pdm.size(); ++i) {
      for (std::size_t j = i + 1; j < pdm.size(); ++j) entries.push_back(pdm(i, j));
    }
    r.pdm_entries.push_back(std::move(entries));
  }
  for (std::size_t a = 0; a < chains.size(); ++a) {
    for (std::size_t b = a + 1; b < chains.size(); ++b) {
      ChainPairAgreement p;
      p.chain_a = a;
      p.chain_b = b;
      const auto& ea = r.pdm_entries[a];
      const auto& eb = r.pdm_entries[b];
      for (std::size_t i = 0; i < ea.size(); ++i) {
        p.max_abs_difference = std::max(p.max_abs_difference, std::abs(ea[i] - eb[i]));
      }
      p.correlation = pearson(ea, eb);
      p.flagged = p.max_abs_difference > options.max_difference ||
                  !(p.correlation >= options.min_correlation);
      r.flagged = r.flagged || p.flagged;
      r.pairs.push_back(p);
    }
  }
  std::vector<const std::vector<double>*> alpha, logp;
  for (const auto& c : chains) {
    alpha.push_back(&c.alpha_trace);
    logp.push_back(&c.log_posterior_trace);
  }
  r.alpha = trace_diagnostics(alpha);
  r.log_posterior = trace_diagnostics(logp);

  const std::size_t bins = options.density_bins;
  const double width = 1.0 / static_cast<double>(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    r.density_bin_centers.push_back((static_cast<double>(b) + 0.5) * width);
  }
  for (const auto& entries : r.pdm_entries) {
    std::vector<double> density(bins, 0.0);
    for (double v : entries) {
      const auto b = std::min(bins - 1, static_cast<std::size_t>(v / width));
      density[b] += 1.0;
    }
    if (!entries.empty()) {
      for (double& v : density) v /= static_cast<double>(entries.size()) * width;
    }
    r.densities.push_back(std::move(density));
  }
  return r;
}

std::string format_agreement_report(const AgreementReport& report) {
  std::string out = "chain pair agreement (posterior dissimilarities)\n";
  out += "chain_a chain_b max_abs_difference correlation flagged\n";
  for (const auto& p : report.pairs) {
    out += fmt::format("{} {} {:.6f} {:.6f} {}\n", p.chain_a + 1, p.chain_b + 1,
                       p.max_abs_difference, p.correlation, p.flagged ? "yes" : "no");
  }
  auto traces = [&](std::string_view name, const TraceDiagnostics& t) {
    out += fmt::format("\n{} trace\nchain mean lag1_autocorrelation\n", name);
    for (std::size_t c = 0; c < t.chain_means.size(); ++c) {
      out += fmt::format("{} {:.6f} {:.6f}\n", c + 1, t.chain_means[c], t.lag1_autocorrelation[c]);
    }
    out += fmt::format("between/within variance ratio {:.6f}\n", t.between_within_ratio);
  };
  traces("alpha", report.alpha);
  traces("log posterior", report.log_posterior);
  out += fmt::format("\nstatus: {}\n", report.flagged ? "FLAGGED" : "ok");
  return out;
}

}  // namespace peergroup
