#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <fmt/format.h>

#include "peergroup/dpmm.hpp"
#include "peergroup/error.hpp"
#include "peergroup/explain.hpp"
#include "peergroup/hier.hpp"
#include "peergroup/indices.hpp"
#include "peergroup/io.hpp"
#include "peergroup/preprocess.hpp"
#include "peergroup/realloc.hpp"
#include "peergroup/synthetic.hpp"
#include "peergroup/viz.hpp"

namespace peergroup::cli {

namespace {

template <typename Writer, typename T>
std::string to_text(Writer writer, const T& value) {
  std::ostringstream s;
  writer(s, value);
  return s.str();
}

std::string partition_csv(const Partition& p) {
  return to_text([](std::ostream& s, const Partition& x) { write_partition(s, x); }, p);
}

std::string number(double v) {
  if (std::isnan(v)) return "NA";
  if (std::isinf(v)) return v > 0 ? "Inf" : "-Inf";
  return fmt::format("{:.6f}", v);
}

template <typename F>
double or_nan(F f) {
  try {
    return f();
  } catch (const DomainError&) {
    return std::nan("");
  }
}

std::string index_row(const std::string& method, Linkage linkage, std::size_t cap,
                      const DissimilarityMatrix& d, const Partition& p) {
  const double asw = or_nan([&] { return silhouette(d, p).asw; });
  const double ch = or_nan([&] { return ch_index(d, p); });
  const double pg = or_nan([&] { return pearson_gamma(d, p); });
  return fmt::format("{},{},{},{},{},{},{}\n", method, to_string(linkage), cap, p.cluster_count(),
                     number(asw), number(ch), number(pg));
}

constexpr const char* kIndexHeader = "method,linkage,cap,k,asw,ch,pg\n";

std::string curve_csv(const IndexCurve& curve) {
  std::string s = fmt::format("k,{}\n", to_string(curve.index));
  for (std::size_t i = 0; i < curve.k.size(); ++i) {
    s += fmt::format("{},{}\n", curve.k[i], number(curve.value[i]));
  }
  return s;
}

std::string curve_svg(const IndexCurve& curve, std::size_t chosen_k, const std::string& title) {
  Series s{std::string(to_string(curve.index)), {}, curve.value};
  for (auto k : curve.k) s.x.push_back(static_cast<double>(k));
  CurveOptions opt;
  opt.title = title;
  opt.x_label = "number of clusters";
  opt.y_label = std::string(to_string(curve.index));
  opt.guidelines.push_back({Guideline::Axis::vertical, static_cast<double>(chosen_k),
                            Guideline::Style::dashed, fmt::format("k = {}", chosen_k)});
  const std::vector<Series> series{s};
  return render_curves(series, opt);
}

std::string tree_text(const MergeTree& tree) {
  return to_text([](std::ostream& s, const MergeTree& t) { write_merge_tree(s, t); }, tree);
}

Partition subset(const Partition& p, const std::vector<std::size_t>& rows) {
  std::vector<std::string> ids;
  std::vector<int> labels;
  for (auto r : rows) {
    ids.push_back(p.ids()[r]);
    labels.push_back(p.label(r));
  }
  return Partition(std::move(ids), labels);
}

std::string confusion_text(const char* name, const Confusion& c, int a, int b) {
  return fmt::format("  {:<4} truth {} -> predicted {}: {}, {}: {}\n"
                     "       truth {} -> predicted {}: {}, {}: {}\n",
                     name, a, a, c[0][0], b, c[0][1], b, a, c[1][0], b, c[1][1]);
}

}  // namespace

void cmd_preprocess(const PreprocessOptions& o, RunRecord& run, std::ostream& out) {
  run.config() = {{"input", o.input}, {"kinds", o.kinds}, {"vif_threshold", o.vif_threshold}};
  run.input(o.input);
  std::map<std::string, VariableKind> kinds;
  if (!o.kinds.empty()) {
    run.input(o.kinds);
    kinds = read_kinds(o.kinds);
  }
  const FeatureTable raw = read_feature_table(o.input, kinds);
  const FeatureTable standard = standardize(transform_table(raw));
  const VifResult vif = vif_prune(standard, o.vif_threshold);

  run.write("standardized.csv",
            to_text([](std::ostream& s, const FeatureTable& t) { write_feature_table(s, t); },
                    vif.retained));

  std::string trace = fmt::format("# variance inflation pruning, threshold {}\n", o.vif_threshold);
  for (const auto& r : vif.removed) trace += fmt::format("removed {} {}\n", r.variable, number(r.vif));
  for (std::size_t j = 0; j < vif.retained.cols(); ++j) {
    trace += fmt::format("retained {} {} {}\n", vif.retained.specs[j].name,
                         to_string(vif.retained.specs[j].kind), number(vif.final_vif[j]));
  }
  for (const auto& w : vif.warnings) trace += "warning: " + w + "\n";
  run.write("vif_trace.txt", trace);

  const PercentileTable pct = percentile_table(raw);
  run.write("percentiles.csv",
            to_text([](std::ostream& s, const PercentileTable& t) { write_percentiles(s, t); }, pct));
  for (const auto& w : pct.warnings) out << "warning: " << w << "\n";
  out << fmt::format("{} observations, {} of {} variables retained\n", raw.rows(),
                     vif.retained.cols(), raw.cols());
}

void cmd_dissim(const DissimOptions& o, RunRecord& run, std::ostream& out) {
  run.config() = {{"input", o.input},         {"euclidean", o.euclidean}, {"diagnostics", o.diagnostics},
                  {"iterations", o.iterations}, {"burn_in", o.burn_in},     {"thin", o.thin},
                  {"chains", o.chains}};
  run.input(o.input);
  const FeatureTable table = read_feature_table(o.input);
  if (o.euclidean) {
    if (o.diagnostics) throw ConfigError("--diagnostics needs the sampler; drop --euclidean");
    const auto d = euclidean_dissimilarity(table.ids, table.values);
    run.write("pdm.csv",
              to_text([](std::ostream& s, const DissimilarityMatrix& m) { write_dissimilarity(s, m); }, d));
    out << fmt::format("euclidean dissimilarities for {} observations\n", d.size());
    return;
  }
  if (o.diagnostics && o.chains < 2) {
    throw ConfigError("chain diagnostics need at least two chains (--chains >= 2)");
  }
  DpmmConfig cfg;
  cfg.iterations = o.iterations;
  cfg.burn_in = o.burn_in;
  cfg.thin = o.thin;
  cfg.chains = o.chains;
  cfg.seed = o.seed;
  cfg.validate(table.cols());
  run.seeds()["dpmm"] = o.seed;
  for (std::size_t c = 0; c < cfg.chains; ++c) run.seeds()["chains"].push_back(chain_seed(o.seed, c));

  const auto chains = run_chains(table, cfg);
  const auto d = posterior_dissimilarity(chains);
  run.write("pdm.csv",
            to_text([](std::ostream& s, const DissimilarityMatrix& m) { write_dissimilarity(s, m); }, d));

  if (o.diagnostics) {
    const auto report = chain_agreement(chains);
    run.write("diagnostics.txt", format_agreement_report(report));
    std::string traces = "chain,sample,alpha,log_posterior,clusters\n";
    for (std::size_t c = 0; c < chains.size(); ++c) {
      for (std::size_t s = 0; s < chains[c].samples_used; ++s) {
        traces += fmt::format("{},{},{},{},{}\n", c + 1, s + 1, number(chains[c].alpha_trace[s]),
                              number(chains[c].log_posterior_trace[s]),
                              chains[c].cluster_count_trace[s]);
      }
    }
    run.write("traces.csv", traces);
    std::string density = "bin_center";
    for (std::size_t c = 0; c < chains.size(); ++c) density += fmt::format(",chain{}", c + 1);
    density += "\n";
    std::vector<Series> series;
    for (std::size_t c = 0; c < chains.size(); ++c) {
      series.push_back({fmt::format("chain {}", c + 1), report.density_bin_centers, report.densities[c]});
    }
    for (std::size_t b = 0; b < report.density_bin_centers.size(); ++b) {
      density += number(report.density_bin_centers[b]);
      for (std::size_t c = 0; c < chains.size(); ++c) density += "," + number(report.densities[c][b]);
      density += "\n";
    }
    run.write("pdm_density.csv", density);
    CurveOptions opt;
    opt.title = "Posterior dissimilarity density per chain";
    opt.x_label = "posterior dissimilarity";
    opt.y_label = "density";
    run.write("pdm_density.svg", render_curves(series, opt));
    if (report.flagged) out << "warning: chains disagree; see diagnostics.txt\n";
  }
  out << fmt::format("posterior dissimilarities for {} observations from {} chains\n", d.size(),
                     chains.size());
}

void cmd_cluster(const ClusterOptions& o, RunRecord& run, std::ostream& out) {
  run.config() = {{"dissim", o.dissim}, {"method", o.method}, {"cap", o.cap},
                  {"linkage", o.linkage}, {"index", o.index},  {"max_k", o.max_k ? nlohmann::json(*o.max_k) : nlohmann::json()},
                  {"k", o.k},            {"sweep_caps", o.sweep_caps}};
  run.input(o.dissim);
  const auto d = read_dissimilarity(o.dissim);
  const Linkage linkage = parse_linkage(o.linkage);
  const FitIndex index = parse_fit_index(o.index);

  if (!o.sweep_caps.empty()) {
    std::string csv = kIndexHeader;
    std::vector<Series> series{{"kirigami1", {}, {}}, {"kirigami2", {}, {}}};
    for (std::size_t cap : o.sweep_caps) {
      const auto k1 = kirigami1(d, linkage, index, cap, o.max_k).partition;
      const auto k2 = kirigami2(d, linkage, index, cap, o.max_k).partition;
      csv += index_row("kirigami1", linkage, cap, d, k1);
      csv += index_row("kirigami2", linkage, cap, d, k2);
      const double v1 = or_nan([&] { return fit_index(d, k1, index); });
      const double v2 = or_nan([&] { return fit_index(d, k2, index); });
      if (std::isfinite(v1)) {
        series[0].x.push_back(static_cast<double>(cap));
        series[0].y.push_back(v1);
      }
      if (std::isfinite(v2)) {
        series[1].x.push_back(static_cast<double>(cap));
        series[1].y.push_back(v2);
      }
    }
    run.write("sweep.csv", csv);
    std::erase_if(series, [](const Series& s) { return s.x.empty(); });
    if (!series.empty()) {
      CurveOptions opt;
      opt.title = "Fit index by maximum cluster size";
      opt.x_label = "maximum cluster size";
      opt.y_label = std::string(to_string(index));
      run.write("sweep.svg", render_curves(series, opt));
    }
    out << fmt::format("swept {} caps\n", o.sweep_caps.size());
    return;
  }

  Partition partition;
  if (o.method == "kirigami1" || o.method == "kirigami2") {
    MergeTree tree;
    IndexCurve curve;
    if (o.method == "kirigami1") {
      auto r = kirigami1(d, linkage, index, o.cap, o.max_k);
      partition = std::move(r.partition);
      tree = std::move(r.tree);
      curve = std::move(r.curve);
    } else {
      auto r = kirigami2(d, linkage, index, o.cap, o.max_k);
      partition = std::move(r.partition);
      tree = std::move(r.tree);
      curve = std::move(r.curve);
    }
    run.write("tree.txt", tree_text(tree));
    run.write("index_curve.csv", curve_csv(curve));
    if (!curve.k.empty()) {
      run.write("index_curve.svg", curve_svg(curve, partition.cluster_count(),
                                             fmt::format("{} along the {} tree", to_string(index), o.method)));
    }
  } else if (o.method == "pam") {
    run.seeds()["pam"] = o.seed;
    partition = pam(d, o.k, o.seed).partition;
  } else {
    throw ConfigError(fmt::format("unknown method '{}' (expected kirigami1, kirigami2 or pam)", o.method));
  }
  run.write("partition.csv", partition_csv(partition));
  run.write("index_report.csv", std::string(kIndexHeader) + index_row(o.method, linkage, o.cap, d, partition));
  out << fmt::format("{} clusters, largest {}\n", partition.cluster_count(), partition.largest_cluster());
}

void cmd_reallocate(const ReallocateOptions& o, RunRecord& run, std::ostream& out) {
  run.config() = {{"dissim", o.dissim}, {"previous", o.previous}, {"pcr_min", o.pcr_min},
                  {"grid_step", o.grid_step}, {"cap", o.cap}, {"linkage", o.linkage},
                  {"index", o.index}, {"max_k", o.max_k ? nlohmann::json(*o.max_k) : nlohmann::json()}};
  run.input(o.dissim);
  run.input(o.previous);
  const auto d = read_dissimilarity(o.dissim);
  const auto previous = read_partition(o.previous);
  ReallocConfig cfg;
  cfg.p_grid = reallocation_grid(o.grid_step);
  cfg.pcr_min = o.pcr_min;
  cfg.cap = o.cap;
  cfg.linkage = parse_linkage(o.linkage);
  cfg.index = parse_fit_index(o.index);
  cfg.max_k = o.max_k;
  cfg.validate();

  const TradeoffCurve curve = tradeoff_grid(d, previous, cfg);
  std::string csv = fmt::format("p,pcr,{},k,reallocated,partition,error\n", to_string(cfg.index));
  Series series{"reallocation", {}, {}};
  for (const auto& row : curve.rows) {
    if (!row.ok()) {
      csv += fmt::format("{:.2f},NA,NA,NA,NA,,{}\n", row.p, row.error);
      continue;
    }
    const std::string file = fmt::format("partitions/p{:.2f}.csv", row.p);
    run.write(file, partition_csv(*row.partition));
    csv += fmt::format("{:.2f},{},{},{},{},{},\n", row.p, number(row.pcr), number(row.index), row.k,
                       row.reallocated, file);
    if (std::isfinite(row.index)) {
      series.x.push_back(row.pcr);
      series.y.push_back(row.index);
    }
  }
  run.write("tradeoff.csv", csv);

  const TradeoffRow& chosen = select_stable(curve, cfg.pcr_min);
  const auto fresh = kirigami2(d, cfg.linkage, cfg.index, cfg.cap, cfg.max_k).partition;
  const double fresh_index = or_nan([&] { return fit_index(d, fresh, cfg.index); });

  CurveOptions opt;
  opt.title = "Stability against fit";
  opt.x_label = "proportion of connections retained";
  opt.y_label = std::string(to_string(cfg.index));
  opt.guidelines.push_back({Guideline::Axis::vertical, chosen.pcr, Guideline::Style::dashed,
                            fmt::format("p = {:.2f}", chosen.p)});
  opt.guidelines.push_back({Guideline::Axis::horizontal, chosen.index, Guideline::Style::dashed, ""});
  if (std::isfinite(fresh_index)) {
    opt.guidelines.push_back({Guideline::Axis::horizontal, fresh_index, Guideline::Style::dotted,
                              "fresh clustering"});
  }
  if (!series.x.empty()) {
    const std::vector<Series> all{series};
    run.write("tradeoff.svg", render_curves(all, opt));
  }
  run.write("chosen_partition.csv", partition_csv(*chosen.partition));

  std::string summary = "Reallocation summary\n\n";
  summary += fmt::format("index {}, linkage {}, cap {}, PCR floor {:.2f}\n", to_string(cfg.index),
                         to_string(cfg.linkage), cfg.cap, cfg.pcr_min);
  summary += fmt::format("chosen proportion p        {:.2f}\n", chosen.p);
  summary += fmt::format("connections retained (PCR) {:.4f}\n", chosen.pcr);
  summary += fmt::format("{:<27}{}\n", to_string(cfg.index), number(chosen.index));
  summary += fmt::format("clusters                   {}\n", chosen.k);
  summary += fmt::format("reallocated observations   {}\n", chosen.reallocated);
  if (!curve.rows.empty() && curve.rows.front().ok()) {
    summary += fmt::format("{} without reallocation {}\n", to_string(cfg.index),
                           number(curve.rows.front().index));
  }
  summary += fmt::format("{} of a fresh clustering {} ({} clusters)\n", to_string(cfg.index),
                         number(fresh_index), fresh.cluster_count());
  run.write("summary.txt", summary);
  out << fmt::format("chosen p = {:.2f}: PCR {:.4f}, {} {}\n", chosen.p, chosen.pcr,
                     to_string(cfg.index), number(chosen.index));
}

void cmd_explain(const ExplainOptions& o, RunRecord& run, std::ostream& out) {
  run.config() = {{"input", o.input}, {"partition", o.partition}, {"pairs", o.pairs},
                  {"trees", o.trees}, {"max_trees", o.max_trees}};
  run.seeds()["forest"] = o.seed;
  run.input(o.input);
  run.input(o.partition);
  const FeatureTable table = read_feature_table(o.input);
  const Partition part = align_to(read_partition(o.partition), table.ids);
  ForestConfig fc;
  fc.seed = o.seed;
  fc.initial_trees = o.trees;
  fc.max_trees = o.max_trees;

  std::string csv = "scope,variable,importance,rank\n";
  std::string text;
  auto add_report = [&](const std::string& scope, const ImportanceReport& r) {
    text += fmt::format("{}: {} trees, half-forest Spearman {:.3f}{}\n", scope, r.trees, r.stability,
                        r.ceiling_reached ? " (tree ceiling reached)" : "");
    for (std::size_t pos = 0; pos < r.ranking.size(); ++pos) {
      const auto j = r.ranking[pos];
      csv += fmt::format("{},{},{},{}\n", scope, r.variables[j], number(r.importance[j]), pos + 1);
      text += fmt::format("  {:>3}  {:<24} {}\n", pos + 1, r.variables[j], number(r.importance[j]));
    }
    text += "\n";
  };
  add_report("all", rf_importance(table, part, fc));

  std::vector<std::pair<std::string, DiscriminationReport>> discrimination;
  std::vector<std::string> notes;
  if (part.cluster_count() == 2) discrimination.emplace_back("1-2", discriminate(table, part));
  if (o.pairs) {
    for (const auto& pair : pairwise_importance(table, part, fc)) {
      const std::string scope = fmt::format("{}-{}", pair.cluster_a, pair.cluster_b);
      add_report(scope, pair.report);
      if (part.cluster_count() == 2) continue;
      std::vector<std::size_t> rows;
      for (std::size_t i = 0; i < part.size(); ++i) {
        if (part.label(i) == pair.cluster_a || part.label(i) == pair.cluster_b) rows.push_back(i);
      }
      try {
        auto r = discriminate(select_rows(table, rows), subset(part, rows));
        r.cluster_a = pair.cluster_a;
        r.cluster_b = pair.cluster_b;
        discrimination.emplace_back(scope, std::move(r));
      } catch (const Error& e) {
        notes.push_back(fmt::format("{}: {}", scope, e.what()));
      }
    }
  }
  run.write("importance.csv", csv);
  run.write("importance.txt", text);

  if (!discrimination.empty() || !notes.empty()) {
    std::string dcsv = "scope,n,lda,qda,md,shrinkage\n";
    std::string dtext;
    for (const auto& [scope, r] : discrimination) {
      dcsv += fmt::format("{},{},{},{},{},{}\n", scope, r.n, number(r.lda_accuracy), number(r.qda_accuracy),
                          number(r.md_accuracy), r.shrinkage_applied ? "yes" : "no");
      dtext += fmt::format("clusters {} and {} ({} observations)\n", r.cluster_a, r.cluster_b, r.n);
      dtext += fmt::format("  LDA {:.1f}%  QDA {:.1f}%  MD {:.1f}%\n", 100 * r.lda_accuracy,
                           100 * r.qda_accuracy, 100 * r.md_accuracy);
      dtext += confusion_text("LDA", r.lda, r.cluster_a, r.cluster_b);
      dtext += confusion_text("QDA", r.qda, r.cluster_a, r.cluster_b);
      dtext += confusion_text("MD", r.md, r.cluster_a, r.cluster_b);
      for (const auto& n : r.notes) dtext += "  note: " + n + "\n";
      dtext += "\n";
    }
    for (const auto& n : notes) dtext += "skipped " + n + "\n";
    run.write("discrimination.csv", dcsv);
    run.write("discrimination.txt", dtext);
  }

  const PcaResult p = pca(table);
  std::string scores = "id";
  for (Eigen::Index c = 0; c < p.scores.cols(); ++c) scores += fmt::format(",PC{}", c + 1);
  scores += "\n";
  for (std::size_t i = 0; i < table.rows(); ++i) {
    scores += table.ids[i];
    for (Eigen::Index c = 0; c < p.scores.cols(); ++c) {
      scores += "," + number(p.scores(static_cast<Eigen::Index>(i), c));
    }
    scores += "\n";
  }
  run.write("pca_scores.csv", scores);
  std::string ptext = "component,variance,share\n";
  const double total = p.variance.sum();
  for (Eigen::Index c = 0; c < p.variance.size(); ++c) {
    ptext += fmt::format("PC{},{},{}\n", c + 1, number(p.variance(c)),
                         number(total > 0 ? p.variance(c) / total : 0.0));
  }
  for (const auto& w : p.warnings) ptext += "# warning: " + w + "\n";
  run.write("pca.csv", ptext);
  if (p.scores.cols() >= 2) {
    ScatterOptions so;
    so.title = "Principal components";
    so.x_label = "PC1";
    so.y_label = "PC2";
    run.write("pca_scatter.svg", render_scatter(p.scores.leftCols(2), part, so));
  }
  out << text;
}

void cmd_fingerprint(const FingerprintOptions& o, RunRecord& run, std::ostream& out) {
  run.config() = {{"percentiles", o.percentiles}, {"partition", o.partition}, {"input", o.input},
                  {"variables", o.variables}};
  if (o.top_k) run.config()["top_k"] = *o.top_k;
  if (o.highlight) run.config()["highlight"] = *o.highlight;
  run.input(o.percentiles);
  run.input(o.partition);
  const PercentileTable pct = read_percentiles(o.percentiles);
  const Partition part = read_partition(o.partition);

  std::vector<std::string> variables = o.variables;
  if (o.top_k) {
    if (!variables.empty()) throw ConfigError("--variables and --top-k are mutually exclusive");
    if (o.input.empty()) throw ConfigError("--top-k ranks variables with a random forest and needs --input");
    run.input(o.input);
    run.seeds()["forest"] = o.seed;
    const FeatureTable table = read_feature_table(o.input);
    if (*o.top_k < 1 || *o.top_k > table.cols()) {
      throw ConfigError(fmt::format("--top-k must lie in [1, {}]", table.cols()));
    }
    ForestConfig fc;
    fc.seed = o.seed;
    const auto r = rf_importance(table, align_to(part, table.ids), fc);
    for (std::size_t pos = 0; pos < *o.top_k; ++pos) variables.push_back(r.variables[r.ranking[pos]]);
  } else if (variables.empty()) {
    variables = pct.variables;
  }
  const FingerprintTable ft = fingerprint_table(pct, part, variables, o.highlight);
  run.write("fingerprint.svg", render_fingerprint(ft));
  run.write("fingerprint.csv", fingerprint_csv(ft));
  out << fmt::format("fingerprint of {} clusters over {} variables\n", ft.clusters.size(),
                     ft.variables.size());
}

void cmd_synth(const SynthOptions& o, RunRecord& run, std::ostream& out) {
  run.config() = {{"kind", o.kind},         {"sizes", o.sizes},
                  {"dimensions", o.dimensions}, {"separation", o.separation},
                  {"sd", o.sd},             {"spread_ratio", o.spread_ratio},
                  {"drift_count", o.drift_count}};
  run.seeds()["synthetic"] = o.seed;
  auto table_csv = [](const FeatureTable& t) {
    return to_text([](std::ostream& s, const FeatureTable& x) { write_feature_table(s, x); }, t);
  };
  if (o.kind == "blobs") {
    const auto b = synthetic::separated_blobs(o.sizes, o.dimensions, o.separation, o.sd, o.seed);
    run.write("table.csv", table_csv(b.table));
    run.write("truth.csv", partition_csv(b.truth));
  } else if (o.kind == "shell") {
    if (o.sizes.empty()) throw ConfigError("--sizes needs the per-cluster size");
    const auto b = synthetic::shell(o.sizes.front(), o.dimensions, o.spread_ratio, o.seed);
    run.write("table.csv", table_csv(b.table));
    run.write("truth.csv", partition_csv(b.truth));
  } else if (o.kind == "drift") {
    const auto y = synthetic::drifted_years(o.sizes, o.dimensions, o.separation, o.sd, o.drift_count, o.seed);
    run.write("year1.csv", table_csv(y.first.table));
    run.write("year2.csv", table_csv(y.second));
    run.write("truth.csv", partition_csv(y.first.truth));
    std::string drifted = "id\n";
    for (auto i : y.drifted) drifted += y.second.ids[i] + "\n";
    run.write("drifted.csv", drifted);
  } else {
    throw ConfigError(fmt::format("unknown synthetic kind '{}' (expected blobs, shell or drift)", o.kind));
  }
  out << fmt::format("wrote {} files to {}\n", run.output_count(), run.out_dir().string());
}

}  // namespace peergroup::cli
