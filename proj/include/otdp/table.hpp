#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace otdp {

enum class TableFormat { csv, arff, xlsx_unsupported };
enum class ColumnKind { numeric, categorical, missing_only };

std::string_view to_string(TableFormat format);
std::string_view to_string(ColumnKind kind);

struct ColumnMeta {
  std::string name;
  ColumnKind kind = ColumnKind::categorical;
  std::size_t distinct_count = 0;
  std::size_t missing_count = 0;
  // Declarations carried over from an ARFF header. A CSV column has neither.
  bool declared_numeric = false;
  std::optional<std::vector<std::string>> nominal_domain;

  bool operator==(const ColumnMeta&) const = default;
};

// Parsed tabular file. Cells keep their original text; missingness is a
// property of the text (see is_missing_token), so re-serialising a table is
// loss-free. Storage is a single character arena plus cell offsets, which keeps
// multi-million cell files affordable.
class RawTable {
 public:
  RawTable() = default;
  RawTable(std::string source_name, TableFormat format, std::vector<ColumnMeta> columns);

  const std::string& source_name() const noexcept { return source_name_; }
  TableFormat format() const noexcept { return format_; }
  std::size_t n_rows() const noexcept { return n_rows_; }
  std::size_t n_cols() const noexcept { return columns_.size(); }

  const std::vector<ColumnMeta>& columns() const noexcept { return columns_; }
  const ColumnMeta& column(std::size_t index) const { return columns_.at(index); }
  ColumnMeta& column(std::size_t index) { return columns_.at(index); }
  std::optional<std::size_t> find_column(std::string_view name) const;

  std::string_view cell(std::size_t row, std::size_t col) const;
  bool is_missing(std::size_t row, std::size_t col) const;

  // Throws Error(parse) if the cell count differs from n_cols().
  void append_row(std::span<const std::string> cells);
  void append_row(std::span<const std::string_view> cells);
  void reserve(std::size_t rows, std::size_t bytes);

  // Keeps the listed rows (in the given order) and columns.
  RawTable select(std::span<const std::size_t> rows, std::span<const std::size_t> cols) const;

 private:
  template <class Cell>
  void append_cells(std::span<const Cell> cells);

  std::string source_name_;
  TableFormat format_ = TableFormat::csv;
  std::vector<ColumnMeta> columns_;
  std::size_t n_rows_ = 0;
  std::string arena_;
  std::vector<std::size_t> offsets_{0};
};

// "", "?", "NaN" and "nan" (surrounding whitespace ignored) mark a missing cell.
bool is_missing_token(std::string_view text);

// Parses a finite real; rejects partial matches, inf and nan.
std::optional<double> parse_real(std::string_view text);

std::string_view trim(std::string_view text);
std::string to_lower_ascii(std::string_view text);

// Recomputes kind, distinct_count and missing_count of every column. ARFF
// declarations win over inference (except that an all-missing column is
// always missing_only).
void describe_columns(RawTable& table);

}  // namespace otdp
