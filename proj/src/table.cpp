#include "otdp/table.hpp"

#include <charconv>
#include <cmath>
#include <unordered_set>

#include "otdp/error.hpp"

namespace otdp {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::io: return "io";
    case ErrorKind::parse: return "parse";
    case ErrorKind::empty_input: return "empty-input";
    case ErrorKind::unsupported_format: return "unsupported-format";
    case ErrorKind::too_large: return "too-large";
    case ErrorKind::no_label: return "no-label";
    case ErrorKind::not_ml_ready: return "not-ml-ready";
    case ErrorKind::empty_after_clean: return "empty-after-clean";
    case ErrorKind::single_class: return "single-class";
    case ErrorKind::insufficient_class: return "insufficient-class";
    case ErrorKind::no_features: return "no-features";
    case ErrorKind::degenerate: return "degenerate";
    case ErrorKind::too_small: return "too-small";
    case ErrorKind::catalog_corrupt: return "catalog-corrupt";
    case ErrorKind::unknown_attack: return "unknown-attack";
    case ErrorKind::unknown_dataset: return "unknown-dataset";
  }
  return "unknown";
}

std::string_view to_string(TableFormat format) {
  switch (format) {
    case TableFormat::csv: return "csv";
    case TableFormat::arff: return "arff";
    case TableFormat::xlsx_unsupported: return "xlsx";
  }
  return "unknown";
}

std::string_view to_string(ColumnKind kind) {
  switch (kind) {
    case ColumnKind::numeric: return "numeric";
    case ColumnKind::categorical: return "categorical";
    case ColumnKind::missing_only: return "missing-only";
  }
  return "unknown";
}

RawTable::RawTable(std::string source_name, TableFormat format, std::vector<ColumnMeta> columns)
    : source_name_(std::move(source_name)), format_(format), columns_(std::move(columns)) {}

std::optional<std::size_t> RawTable::find_column(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].name == name) return i;
  }
  return std::nullopt;
}

std::string_view RawTable::cell(std::size_t row, std::size_t col) const {
  const std::size_t index = row * columns_.size() + col;
  return std::string_view(arena_).substr(offsets_[index], offsets_[index + 1] - offsets_[index]);
}

bool RawTable::is_missing(std::size_t row, std::size_t col) const {
  return is_missing_token(cell(row, col));
}

template <class Cell>
void RawTable::append_cells(std::span<const Cell> cells) {
  if (cells.size() != columns_.size()) {
    throw Error(ErrorKind::parse, "row " + std::to_string(n_rows_ + 1) + ": expected " +
                                      std::to_string(columns_.size()) + " cells, found " +
                                      std::to_string(cells.size()));
  }
  for (const auto& c : cells) {
    arena_.append(c);
    offsets_.push_back(arena_.size());
  }
  ++n_rows_;
}

void RawTable::append_row(std::span<const std::string> cells) { append_cells(cells); }
void RawTable::append_row(std::span<const std::string_view> cells) { append_cells(cells); }

void RawTable::reserve(std::size_t rows, std::size_t bytes) {
  offsets_.reserve(rows * columns_.size() + 1);
  arena_.reserve(bytes);
}

RawTable RawTable::select(std::span<const std::size_t> rows, std::span<const std::size_t> cols) const {
  std::vector<ColumnMeta> kept;
  kept.reserve(cols.size());
  for (std::size_t c : cols) kept.push_back(columns_.at(c));
  RawTable out(source_name_, format_, std::move(kept));
  out.offsets_.reserve(rows.size() * cols.size() + 1);
  std::vector<std::string_view> buffer(cols.size());
  for (std::size_t r : rows) {
    for (std::size_t j = 0; j < cols.size(); ++j) buffer[j] = cell(r, cols[j]);
    out.append_row(std::span<const std::string_view>(buffer));
  }
  return out;
}

std::string_view trim(std::string_view text) {
  constexpr std::string_view ws = " \t\r\n\f\v";
  const auto first = text.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(ws);
  return text.substr(first, last - first + 1);
}

std::string to_lower_ascii(std::string_view text) {
  std::string out(text);
  for (char& ch : out) {
    if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
  }
  return out;
}

bool is_missing_token(std::string_view text) {
  const auto t = trim(text);
  return t.empty() || t == "?" || t == "NaN" || t == "nan";
}

std::optional<double> parse_real(std::string_view text) {
  auto t = trim(text);
  if (!t.empty() && t.front() == '+') t.remove_prefix(1);
  if (t.empty()) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

void describe_columns(RawTable& table) {
  for (std::size_t c = 0; c < table.n_cols(); ++c) {
    ColumnMeta& meta = table.column(c);
    std::unordered_set<std::string_view> distinct;
    std::size_t missing = 0;
    bool all_numeric = true;
    for (std::size_t r = 0; r < table.n_rows(); ++r) {
      const auto text = table.cell(r, c);
      if (is_missing_token(text)) {
        ++missing;
        continue;
      }
      distinct.insert(text);
      if (all_numeric && !meta.nominal_domain && !parse_real(text)) all_numeric = false;
    }
    meta.missing_count = missing;
    meta.distinct_count = distinct.size();
    if (missing == table.n_rows()) {
      meta.kind = ColumnKind::missing_only;
    } else if (meta.nominal_domain) {
      meta.kind = ColumnKind::categorical;
    } else if (meta.declared_numeric || all_numeric) {
      meta.kind = ColumnKind::numeric;
    } else {
      meta.kind = ColumnKind::categorical;
    }
  }
}

}  // namespace otdp
