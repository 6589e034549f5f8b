#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <functional>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "commands.hpp"
#include "manifest.hpp"
#include "peergroup/error.hpp"
#include "peergroup/io.hpp"

namespace peergroup::cli {

namespace fs = std::filesystem;

namespace {

fs::path resolve_out(const std::string& flag, const std::string& command) {
  if (!flag.empty()) return fs::absolute(flag);
  if (const char* env = std::getenv(kRunDirVariable); env != nullptr && *env != '\0') {
    return fs::absolute(fs::path(env) / command);
  }
  throw ConfigError(fmt::format("no output directory: pass --out or set {}", kRunDirVariable));
}

// Restores the working directory on scope exit.
class CwdGuard {
 public:
  explicit CwdGuard(const fs::path& target) : saved_(fs::current_path()) { fs::current_path(target); }
  ~CwdGuard() {
    std::error_code ec;
    fs::current_path(saved_, ec);
  }
  CwdGuard(const CwdGuard&) = delete;
  CwdGuard& operator=(const CwdGuard&) = delete;

 private:
  fs::path saved_;
};

int replay(const std::string& manifest_path, const std::string& out_flag, std::ostream& out,
           std::ostream& err) {
  const auto manifest = nlohmann::json::parse(read_text_file(manifest_path), nullptr, false);
  if (manifest.is_discarded() || !manifest.contains("arguments") || !manifest.contains("outputs")) {
    throw ParseError(fmt::format("{}: not a run manifest", manifest_path));
  }
  auto args = manifest.at("arguments").get<std::vector<std::string>>();
  const fs::path cwd = manifest.at("working_directory").get<std::string>();
  const fs::path target = out_flag.empty() ? fs::path(manifest.at("output_directory").get<std::string>())
                                           : fs::absolute(out_flag);
  {
    CwdGuard guard(cwd);
    for (const auto& input : manifest.at("inputs")) {
      const auto path = input.at("path").get<std::string>();
      if (sha256_file(path) != input.at("sha256").get<std::string>()) {
        throw Error(fmt::format("input '{}' changed since the recorded run", path));
      }
    }
  }
  auto it = std::find(args.begin(), args.end(), "--out");
  if (it != args.end() && std::next(it) != args.end()) {
    *std::next(it) = target.string();
  } else {
    args.erase(std::remove_if(args.begin(), args.end(),
                              [](const std::string& a) { return a.rfind("--out=", 0) == 0; }),
               args.end());
    args.push_back("--out");
    args.push_back(target.string());
  }
  int rc = 0;
  {
    CwdGuard guard(cwd);
    rc = run(args, out, err);
  }
  if (rc != 0) return rc;
  std::size_t same = 0;
  std::vector<std::string> differing;
  for (const auto& o : manifest.at("outputs")) {
    const auto path = o.at("path").get<std::string>();
    const fs::path file = target / path;
    if (fs::exists(file) && sha256_file(file) == o.at("sha256").get<std::string>()) {
      ++same;
    } else {
      differing.push_back(path);
    }
  }
  const std::size_t total = manifest.at("outputs").size();
  out << fmt::format("replay: {} of {} outputs identical\n", same, total);
  for (const auto& d : differing) err << "differs: " << d << "\n";
  return differing.empty() ? 0 : 1;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  for (char c : text + ",") {
    if (c == ',') {
      if (!item.empty()) out.push_back(item);
      item.clear();
    } else if (c != ' ') {
      item += c;
    }
  }
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Size-constrained peer group clustering", "peergroup"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every command");

  std::string out_flag;
  auto add_out = [&](CLI::App* sub) {
    sub->add_option("--out", out_flag, fmt::format("Output directory (default ${}/<command>)", kRunDirVariable));
  };

  PreprocessOptions pre;
  auto* c_pre = app.add_subcommand("preprocess", "Transform, standardise, prune by VIF and build percentiles");
  c_pre->add_option("--input", pre.input, "Raw feature CSV (id,<variables>)")->required()->check(CLI::ExistingFile);
  c_pre->add_option("--kinds", pre.kinds, "name=kind lines (continuous, proportion, skewed_positive)")
      ->check(CLI::ExistingFile);
  c_pre->add_option("--vif-threshold", pre.vif_threshold, "Remove variables while the largest VIF exceeds this")
      ->capture_default_str();
  add_out(c_pre);

  DissimOptions dis;
  auto* c_dis = app.add_subcommand("dissim", "Posterior (or Euclidean) dissimilarity matrix");
  c_dis->add_option("--input", dis.input, "Standardised feature CSV")->required()->check(CLI::ExistingFile);
  c_dis->add_flag("--euclidean", dis.euclidean, "Euclidean distances instead of the mixture model");
  c_dis->add_flag("--diagnostics", dis.diagnostics, "Write multi-chain agreement diagnostics");
  c_dis->add_option("--iterations", dis.iterations, "Sweeps per chain, burn-in included")->capture_default_str();
  c_dis->add_option("--burn-in", dis.burn_in, "Discarded sweeps")->capture_default_str();
  c_dis->add_option("--thin", dis.thin, "Keep every n-th sweep after burn-in")->capture_default_str();
  c_dis->add_option("--chains", dis.chains, "Independent chains")->capture_default_str();
  c_dis->add_option("--seed", dis.seed, "Base seed")->capture_default_str();
  add_out(c_dis);

  ClusterOptions clu;
  std::string sweep;
  auto* c_clu = app.add_subcommand("cluster", "Size-constrained hierarchical clustering or PAM");
  c_clu->add_option("--dissim", clu.dissim, "Dissimilarity CSV")->required()->check(CLI::ExistingFile);
  c_clu->add_option("--method", clu.method, "kirigami1, kirigami2 or pam")->capture_default_str();
  c_clu->add_option("--cap", clu.cap, "Maximum cluster size")->capture_default_str()->check(CLI::PositiveNumber);
  c_clu->add_option("--linkage", clu.linkage, "average, ward, complete or single")->capture_default_str();
  c_clu->add_option("--index", clu.index, "asw, ch or pg")->capture_default_str();
  c_clu->add_option("--max-k", clu.max_k, "Largest cluster count compared by the index (default floor(sqrt(n)) in [2, 15])");
  c_clu->add_option("--k", clu.k, "Number of medoids (pam)")->capture_default_str();
  c_clu->add_option("--seed", clu.seed, "Tie-breaking seed (pam)")->capture_default_str();
  c_clu->add_option("--sweep-caps", sweep, "Comma-separated caps; compares both kirigami methods");
  add_out(c_clu);

  ReallocateOptions rea;
  auto* c_rea = app.add_subcommand("reallocate", "Re-cluster a new period keeping most connections");
  c_rea->add_option("--dissim", rea.dissim, "New-period dissimilarity CSV")->required()->check(CLI::ExistingFile);
  c_rea->add_option("--previous", rea.previous, "Previous partition CSV")->required()->check(CLI::ExistingFile);
  c_rea->add_option("--pcr-min", rea.pcr_min, "Minimum proportion of connections retained")->capture_default_str();
  c_rea->add_option("--grid-step", rea.grid_step, "Step of the reallocation proportion grid")->capture_default_str();
  c_rea->add_option("--cap", rea.cap, "Maximum cluster size")->capture_default_str();
  c_rea->add_option("--linkage", rea.linkage, "average, ward, complete or single")->capture_default_str();
  c_rea->add_option("--index", rea.index, "asw, ch or pg")->capture_default_str();
  c_rea->add_option("--max-k", rea.max_k, "Largest cluster count compared by the index (default floor(sqrt(n)) in [2, 15])");
  add_out(c_rea);

  ExplainOptions exp;
  auto* c_exp = app.add_subcommand("explain", "Variable importance, discriminant accuracy and PCA");
  c_exp->add_option("--input", exp.input, "Standardised feature CSV")->required()->check(CLI::ExistingFile);
  c_exp->add_option("--partition", exp.partition, "Partition CSV")->required()->check(CLI::ExistingFile);
  c_exp->add_flag("--pairs", exp.pairs, "Also explain every pair of clusters");
  c_exp->add_option("--seed", exp.seed, "Forest seed")->capture_default_str();
  c_exp->add_option("--trees", exp.trees, "Initial forest size")->capture_default_str();
  c_exp->add_option("--max-trees", exp.max_trees, "Forest size ceiling")->capture_default_str();
  add_out(c_exp);

  FingerprintOptions fin;
  std::string variables;
  auto* c_fin = app.add_subcommand("fingerprint", "Quintile fingerprint plot of each cluster");
  c_fin->add_option("--percentiles", fin.percentiles, "Percentile CSV from preprocess")
      ->required()
      ->check(CLI::ExistingFile);
  c_fin->add_option("--partition", fin.partition, "Partition CSV")->required()->check(CLI::ExistingFile);
  c_fin->add_option("--variables", variables, "Comma-separated variables to show");
  c_fin->add_option("--top-k", fin.top_k, "Show the k most important variables (needs --input)");
  c_fin->add_option("--input", fin.input, "Standardised feature CSV used to rank variables")
      ->check(CLI::ExistingFile);
  c_fin->add_option("--highlight", fin.highlight, "Observation id to mark");
  c_fin->add_option("--seed", fin.seed, "Forest seed for --top-k")->capture_default_str();
  add_out(c_fin);

  SynthOptions syn;
  std::string sizes = "30,30,30";
  auto* c_syn = app.add_subcommand("synth", "Generate synthetic data sets");
  c_syn->add_option("--kind", syn.kind, "blobs, shell or drift")->capture_default_str();
  c_syn->add_option("--sizes", sizes, "Comma-separated cluster sizes")->capture_default_str();
  c_syn->add_option("--dimensions", syn.dimensions, "Number of variables")->capture_default_str();
  c_syn->add_option("--separation", syn.separation, "Distance between consecutive centres")->capture_default_str();
  c_syn->add_option("--sd", syn.sd, "Within-cluster standard deviation")->capture_default_str();
  c_syn->add_option("--spread-ratio", syn.spread_ratio, "Variance ratio for shell data")->capture_default_str();
  c_syn->add_option("--drift-count", syn.drift_count, "Observations that drift (drift)")->capture_default_str();
  c_syn->add_option("--seed", syn.seed, "Seed")->capture_default_str();
  add_out(c_syn);

  std::string manifest_path;
  auto* c_rep = app.add_subcommand("replay", "Re-run a recorded command and compare its outputs");
  c_rep->add_option("manifest", manifest_path, "manifest.json of a previous run")
      ->required()
      ->check(CLI::ExistingFile);
  add_out(c_rep);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (c_rep->parsed()) return replay(manifest_path, out_flag, out, err);

    CLI::App* chosen = app.get_subcommands().front();
    const std::string command = chosen->get_name();
    RunRecord record(command, args, resolve_out(out_flag, command));
    if (c_pre->parsed()) {
      cmd_preprocess(pre, record, out);
    } else if (c_dis->parsed()) {
      cmd_dissim(dis, record, out);
    } else if (c_clu->parsed()) {
      for (const auto& s : split_list(sweep)) {
        try {
          clu.sweep_caps.push_back(static_cast<std::size_t>(std::stoull(s)));
        } catch (const std::exception&) {
          throw ConfigError(fmt::format("--sweep-caps: '{}' is not a count", s));
        }
      }
      cmd_cluster(clu, record, out);
    } else if (c_rea->parsed()) {
      cmd_reallocate(rea, record, out);
    } else if (c_exp->parsed()) {
      cmd_explain(exp, record, out);
    } else if (c_fin->parsed()) {
      fin.variables = split_list(variables);
      cmd_fingerprint(fin, record, out);
    } else if (c_syn->parsed()) {
      syn.sizes.clear();
      for (const auto& s : split_list(sizes)) {
        try {
          syn.sizes.push_back(static_cast<std::size_t>(std::stoull(s)));
        } catch (const std::exception&) {
          throw ConfigError(fmt::format("--sizes: '{}' is not a count", s));
        }
      }
      cmd_synth(syn, record, out);
    }
    record.save();
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace peergroup::cli
