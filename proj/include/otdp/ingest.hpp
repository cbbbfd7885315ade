#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "otdp/table.hpp"

namespace otdp {

inline constexpr std::size_t kDefaultMaxCells = 20'000'000;

struct CsvOptions {
  char delimiter = ',';  // ',', ';' or '\t'
  bool has_header = true;
  std::size_t max_cells = kDefaultMaxCells;
};

// RFC-4180 style reader. Quoted cells may contain delimiters, doubled quotes
// and line breaks; the stored cell text is the unquoted value.
RawTable parse_csv(std::string_view text, const CsvOptions& options = {},
                   std::string source_name = "<memory>");

// Dense ARFF (@relation / @attribute / @data). Keywords are case-insensitive,
// '%' starts a comment line, '?' is missing.
RawTable parse_arff(std::string_view text, std::size_t max_cells = kDefaultMaxCells,
                    std::string source_name = "<memory>");

// Picks the most frequent of ',', ';', '\t' on the first line; ',' on ties.
char sniff_delimiter(std::string_view text);

// Streaming record counters used when a file exceeds the in-memory cell cap.
std::size_t count_csv_rows(std::istream& in, bool has_header);
std::size_t count_arff_rows(std::istream& in);

// Writes the table back as delimited text, quoting only where needed.
std::string to_csv(const RawTable& table, char delimiter = ',');

enum class InputFormat { automatic, csv, arff };

struct LoadOptions {
  InputFormat format = InputFormat::automatic;
  char delimiter = 0;  // 0 = sniff
  bool has_header = true;
  std::size_t max_cells = kDefaultMaxCells;
};

// Reads a file from disk. XLSX workbooks are rejected with a conversion hint.
RawTable load_table(const std::filesystem::path& path, const LoadOptions& options = {});
InputFormat detect_format(const std::filesystem::path& path, std::string_view head);

enum class LabelSource { hint, name_match, fallback };

struct LabelSpec {
  std::size_t column_index = 0;
  std::set<std::string> benign_aliases;  // stored lower-case
  std::string positive_class_name = "malicious";
  LabelSource source = LabelSource::fallback;

  bool is_benign(std::string_view cell) const;
  bool operator==(const LabelSpec&) const = default;
};

const std::vector<std::string>& default_label_names();
const std::vector<std::string>& default_benign_aliases();

struct SchemaOptions {
  std::optional<std::string> label_hint;
  std::vector<std::string> label_names = default_label_names();
  std::vector<std::string> benign_aliases = default_benign_aliases();
};

struct Schema {
  std::vector<ColumnMeta> columns;
  LabelSpec label;

  bool operator==(const Schema&) const = default;
};

Schema infer_schema(const RawTable& table, const SchemaOptions& options = {});

struct Readiness {
  bool ready = false;
  std::vector<std::string> reasons;
};

Readiness check_ml_ready(const RawTable& table, const LabelSpec& label);

}  // namespace otdp
