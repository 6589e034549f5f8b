#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "peergroup/dissimilarity.hpp"
#include "peergroup/hier.hpp"
#include "peergroup/partition.hpp"
#include "peergroup/preprocess.hpp"

namespace peergroup {

// Minimal CSV: comma separated, no quoting, blank lines ignored. Parse
// errors name the 1-based line number.
struct CsvDocument {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // source line of each row
  std::string source = "<input>";
};

CsvDocument parse_csv(std::istream& in, const std::string& source = "<input>");
CsvDocument read_csv(const std::filesystem::path& path);

// Reads `name=kind` lines; '#' starts a comment.
std::map<std::string, VariableKind> parse_kinds(std::istream& in,
                                                const std::string& source = "<kinds>");
std::map<std::string, VariableKind> read_kinds(const std::filesystem::path& path);

// Header `id,<var>,...`; unlisted variables default to continuous. Duplicate
// ids or variables, non-numeric cells and kinds for unknown variables are
// errors.
FeatureTable parse_feature_table(const CsvDocument& doc,
                                 const std::map<std::string, VariableKind>& kinds = {});
FeatureTable read_feature_table(const std::filesystem::path& path,
                                const std::map<std::string, VariableKind>& kinds = {});
void write_feature_table(std::ostream& out, const FeatureTable& table);

// First row and column carry ids, body to six decimals. The kind is posterior
// when every entry lies in [0,1], metric otherwise.
DissimilarityMatrix parse_dissimilarity(const CsvDocument& doc);
DissimilarityMatrix read_dissimilarity(const std::filesystem::path& path);
void write_dissimilarity(std::ostream& out, const DissimilarityMatrix& d);

// `id,cluster` rows.
Partition parse_partition(const CsvDocument& doc);
Partition read_partition(const std::filesystem::path& path);
void write_partition(std::ostream& out, const Partition& p);

// `id,<var>,...` with PIT values; bins are rebuilt on read.
PercentileTable parse_percentiles(const CsvDocument& doc);
PercentileTable read_percentiles(const std::filesystem::path& path);
void write_percentiles(std::ostream& out, const PercentileTable& table);

// Whitespace table: `# leaves n`, `# forced_merges f`, a header line
// `left right height size`, then one merge per row in hclust encoding.
void write_merge_tree(std::ostream& out, const MergeTree& tree);
MergeTree parse_merge_tree(std::istream& in, std::vector<std::string> leaves);

// Writes text to a file, creating parent directories.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace peergroup
