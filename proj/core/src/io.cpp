#include "peergroup/io.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "peergroup/error.hpp"

namespace peergroup {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.emplace_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_number(const CsvDocument& doc, std::size_t row, std::string_view column,
                    const std::string& cell) {
  double v = 0.0;
  const char* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (cell.empty() || ec != std::errc() || ptr != end) {
    throw ParseError(fmt::format("{}:{}: column '{}': '{}' is not a number", doc.source,
                                 doc.line_numbers[row], column, cell));
  }
  return v;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot open '{}'", path.string()));
  return in;
}

void require_header(const CsvDocument& doc, std::size_t min_columns, std::string_view what) {
  if (doc.header.size() < min_columns) {
    throw ParseError(fmt::format("{}: {} needs at least {} columns", doc.source, what, min_columns));
  }
}

std::vector<std::string> unique_names(const CsvDocument& doc, std::size_t from) {
  std::vector<std::string> names(doc.header.begin() + static_cast<std::ptrdiff_t>(from),
                                 doc.header.end());
  std::set<std::string> seen;
  for (const auto& name : names) {
    if (name.empty()) throw ParseError(fmt::format("{}: empty column name in header", doc.source));
    if (!seen.insert(name).second) {
      throw ParseError(fmt::format("{}: duplicate column '{}'", doc.source, name));
    }
  }
  return names;
}

std::vector<std::string> unique_ids(const CsvDocument& doc) {
  std::vector<std::string> ids;
  std::set<std::string> seen;
  for (std::size_t r = 0; r < doc.rows.size(); ++r) {
    const auto& id = doc.rows[r][0];
    if (id.empty()) throw ParseError(fmt::format("{}:{}: empty id", doc.source, doc.line_numbers[r]));
    if (!seen.insert(id).second) {
      throw ParseError(fmt::format("{}:{}: duplicate id '{}'", doc.source, doc.line_numbers[r], id));
    }
    ids.push_back(id);
  }
  return ids;
}

}  // namespace

CsvDocument parse_csv(std::istream& in, const std::string& source) {
  CsvDocument doc;
  doc.source = source;
  std::string line;
  std::size_t number = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    if (line.find('"') != std::string::npos) {
      throw ParseError(fmt::format("{}:{}: quoted fields are not supported", source, number));
    }
    auto fields = split(line);
    if (!have_header) {
      doc.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != doc.header.size()) {
      throw ParseError(fmt::format("{}:{}: expected {} fields, found {}", source, number,
                                   doc.header.size(), fields.size()));
    }
    doc.rows.push_back(std::move(fields));
    doc.line_numbers.push_back(number);
  }
  if (!have_header) throw ParseError(fmt::format("{}: no header line", source));
  return doc;
}

CsvDocument read_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_csv(in, path.string());
}

std::map<std::string, VariableKind> parse_kinds(std::istream& in, const std::string& source) {
  std::map<std::string, VariableKind> kinds;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view body = line;
    if (const auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
    body = trim(body);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(fmt::format("{}:{}: expected name=kind", source, number));
    }
    const std::string name(trim(body.substr(0, eq)));
    const auto token = trim(body.substr(eq + 1));
    if (name.empty()) throw ParseError(fmt::format("{}:{}: empty variable name", source, number));
    VariableKind kind{};
    try {
      kind = parse_variable_kind(token);
    } catch (const ConfigError& e) {
      throw ConfigError(fmt::format("{}:{}: {}", source, number, e.what()));
    }
    if (!kinds.emplace(name, kind).second) {
      throw ParseError(fmt::format("{}:{}: variable '{}' listed twice", source, number, name));
    }
  }
  return kinds;
}

std::map<std::string, VariableKind> read_kinds(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_kinds(in, path.string());
}

FeatureTable parse_feature_table(const CsvDocument& doc,
                                 const std::map<std::string, VariableKind>& kinds) {
  require_header(doc, 2, "a feature table");
  if (doc.rows.empty()) throw ParseError(fmt::format("{}: no data rows", doc.source));
  FeatureTable t;
  const auto names = unique_names(doc, 1);
  for (const auto& [name, kind] : kinds) {
    if (std::find(names.begin(), names.end(), name) == names.end()) {
      throw ConfigError(fmt::format("kinds file names unknown variable '{}'", name));
    }
  }
  for (const auto& name : names) {
    const auto it = kinds.find(name);
    t.specs.push_back({name, it == kinds.end() ? VariableKind::continuous : it->second});
  }
  t.ids = unique_ids(doc);
  t.values.resize(static_cast<Eigen::Index>(doc.rows.size()), static_cast<Eigen::Index>(names.size()));
  for (std::size_t r = 0; r < doc.rows.size(); ++r) {
    for (std::size_t c = 0; c < names.size(); ++c) {
      t.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          parse_number(doc, r, names[c], doc.rows[r][c + 1]);
    }
  }
  t.validate();
  return t;
}

FeatureTable read_feature_table(const std::filesystem::path& path,
                                const std::map<std::string, VariableKind>& kinds) {
  return parse_feature_table(read_csv(path), kinds);
}

void write_feature_table(std::ostream& out, const FeatureTable& table) {
  out << "id";
  for (const auto& s : table.specs) out << ',' << s.name;
  out << '\n';
  for (std::size_t r = 0; r < table.rows(); ++r) {
    out << table.ids[r];
    for (std::size_t c = 0; c < table.cols(); ++c) {
      out << fmt::format(",{}", table.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)));
    }
    out << '\n';
  }
}

DissimilarityMatrix parse_dissimilarity(const CsvDocument& doc) {
  require_header(doc, 2, "a dissimilarity matrix");
  const auto ids = unique_names(doc, 1);
  if (doc.rows.size() != ids.size()) {
    throw ParseError(fmt::format("{}: {} columns but {} rows", doc.source, ids.size(), doc.rows.size()));
  }
  const auto n = static_cast<Eigen::Index>(ids.size());
  Eigen::MatrixXd d(n, n);
  bool unit = true;
  for (std::size_t r = 0; r < ids.size(); ++r) {
    if (doc.rows[r][0] != ids[r]) {
      throw ParseError(fmt::format("{}:{}: row id '{}' does not match column id '{}'", doc.source,
                                   doc.line_numbers[r], doc.rows[r][0], ids[r]));
    }
    for (std::size_t c = 0; c < ids.size(); ++c) {
      const double v = parse_number(doc, r, ids[c], doc.rows[r][c + 1]);
      d(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
      unit = unit && v >= 0.0 && v <= 1.0;
    }
  }
  return DissimilarityMatrix(ids, std::move(d),
                             unit ? DissimilarityKind::posterior : DissimilarityKind::metric);
}

DissimilarityMatrix read_dissimilarity(const std::filesystem::path& path) {
  return parse_dissimilarity(read_csv(path));
}

void write_dissimilarity(std::ostream& out, const DissimilarityMatrix& d) {
  out << "id";
  for (const auto& id : d.ids()) out << ',' << id;
  out << '\n';
  for (std::size_t r = 0; r < d.size(); ++r) {
    out << d.ids()[r];
    for (std::size_t c = 0; c < d.size(); ++c) out << fmt::format(",{:.6f}", d(r, c));
    out << '\n';
  }
}

Partition parse_partition(const CsvDocument& doc) {
  if (doc.header.size() != 2) {
    throw ParseError(fmt::format("{}: a partition has exactly two columns (id,cluster)", doc.source));
  }
  if (doc.rows.empty()) throw ParseError(fmt::format("{}: no data rows", doc.source));
  auto ids = unique_ids(doc);
  std::vector<int> labels;
  for (std::size_t r = 0; r < doc.rows.size(); ++r) {
    const auto& cell = doc.rows[r][1];
    int v = 0;
    const char* end = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(cell.data(), end, v);
    if (cell.empty() || ec != std::errc() || ptr != end) {
      throw ParseError(fmt::format("{}:{}: cluster '{}' is not an integer", doc.source,
                                   doc.line_numbers[r], cell));
    }
    labels.push_back(v);
  }
  return Partition(std::move(ids), labels);
}

Partition read_partition(const std::filesystem::path& path) { return parse_partition(read_csv(path)); }

void write_partition(std::ostream& out, const Partition& p) {
  out << "id,cluster\n";
  for (std::size_t i = 0; i < p.size(); ++i) out << p.ids()[i] << ',' << p.label(i) << '\n';
}

PercentileTable parse_percentiles(const CsvDocument& doc) {
  require_header(doc, 2, "a percentile table");
  if (doc.rows.empty()) throw ParseError(fmt::format("{}: no data rows", doc.source));
  auto vars = unique_names(doc, 1);
  auto ids = unique_ids(doc);
  Eigen::MatrixXd u(static_cast<Eigen::Index>(ids.size()), static_cast<Eigen::Index>(vars.size()));
  for (std::size_t r = 0; r < ids.size(); ++r) {
    for (std::size_t c = 0; c < vars.size(); ++c) {
      const double v = parse_number(doc, r, vars[c], doc.rows[r][c + 1]);
      if (!(v > 0.0 && v < 1.0)) {
        throw ParseError(fmt::format("{}:{}: percentile {} outside (0,1)", doc.source,
                                     doc.line_numbers[r], v));
      }
      u(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
    }
  }
  return percentile_table(std::move(ids), std::move(vars), std::move(u));
}

PercentileTable read_percentiles(const std::filesystem::path& path) {
  return parse_percentiles(read_csv(path));
}

void write_percentiles(std::ostream& out, const PercentileTable& table) {
  out << "id";
  for (const auto& v : table.variables) out << ',' << v;
  out << '\n';
  for (std::size_t r = 0; r < table.ids.size(); ++r) {
    out << table.ids[r];
    for (std::size_t c = 0; c < table.variables.size(); ++c) {
      out << fmt::format(",{}", table.u(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)));
    }
    out << '\n';
  }
}

void write_merge_tree(std::ostream& out, const MergeTree& tree) {
  out << fmt::format("# leaves {}\n# forced_merges {}\nleft right height size\n", tree.leaf_count(),
                     tree.forced_merges);
  for (const auto& m : tree.merges) {
    out << fmt::format("{} {} {} {}\n", m.left, m.right, m.height, m.size);
  }
}

MergeTree parse_merge_tree(std::istream& in, std::vector<std::string> leaves) {
  MergeTree tree;
  tree.leaves = std::move(leaves);
  std::string line;
  std::size_t number = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++number;
    const auto body = trim(line);
    if (body.empty()) continue;
    std::istringstream fields{std::string(body)};
    if (body.front() == '#') {
      std::string hash, key;
      std::size_t value = 0;
      fields >> hash >> key >> value;
      if (key == "leaves" && value != tree.leaf_count()) {
        throw ParseError(fmt::format("merge tree has {} leaves, expected {}", value, tree.leaf_count()));
      }
      if (key == "forced_merges") tree.forced_merges = value;
      continue;
    }
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    Merge m;
    if (!(fields >> m.left >> m.right >> m.height >> m.size)) {
      throw ParseError(fmt::format("merge tree line {}: expected left right height size", number));
    }
    tree.merges.push_back(m);
  }
  return tree;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
  out << text;
  if (!out) throw Error(fmt::format("failed writing '{}'", path.string()));
}

std::string read_text_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace peergroup
