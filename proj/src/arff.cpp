#include <algorithm>
#include <istream>
#include <string>

#include "otdp/error.hpp"
#include "otdp/ingest.hpp"

namespace otdp {
namespace {

bool starts_with_keyword(std::string_view line, std::string_view keyword) {
  return line.size() >= keyword.size() && to_lower_ascii(line.substr(0, keyword.size())) == keyword &&
         (line.size() == keyword.size() || line[keyword.size()] == ' ' || line[keyword.size()] == '\t');
}

std::string_view unquote(std::string_view value) {
  value = trim(value);
  if (value.size() >= 2 && (value.front() == '\'' || value.front() == '"') && value.back() == value.front()) {
    return value.substr(1, value.size() - 2);
  }
  return value;
}

// Splits on commas outside single or double quotes. Values are trimmed and unquoted.
std::vector<std::string_view> split_values(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  char quote = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (quote != 0) {
      if (ch == '\\') ++i;
      else if (ch == quote) quote = 0;
    } else if (ch == '\'' || ch == '"') {
      quote = ch;
    } else if (ch == ',') {
      out.push_back(unquote(text.substr(start, i - start)));
      start = i + 1;
    }
  }
  out.push_back(unquote(text.substr(start)));
  return out;
}

ColumnMeta parse_attribute(std::string_view rest, std::size_t line_no) {
  rest = trim(rest);
  ColumnMeta meta;
  std::size_t name_end = 0;
  if (!rest.empty() && (rest.front() == '\'' || rest.front() == '"')) {
    const auto close = rest.find(rest.front(), 1);
    if (close == std::string_view::npos) {
      throw Error(ErrorKind::parse, "line " + std::to_string(line_no) + ": unterminated attribute name");
    }
    meta.name = std::string(rest.substr(1, close - 1));
    name_end = close + 1;
  } else {
    name_end = std::min(rest.find_first_of(" \t{"), rest.size());
    meta.name = std::string(rest.substr(0, name_end));
  }
  const auto type = trim(rest.substr(name_end));
  if (meta.name.empty() || type.empty()) {
    throw Error(ErrorKind::parse, "line " + std::to_string(line_no) + ": malformed @attribute");
  }
  if (type.front() == '{') {
    const auto close = type.rfind('}');
    if (close == std::string_view::npos) {
      throw Error(ErrorKind::parse, "line " + std::to_string(line_no) + ": unterminated nominal domain");
    }
    std::vector<std::string> domain;
    for (auto v : split_values(type.substr(1, close - 1))) domain.emplace_back(v);
    meta.nominal_domain = std::move(domain);
    meta.kind = ColumnKind::categorical;
    return meta;
  }
  const auto keyword = to_lower_ascii(type.substr(0, type.find_first_of(" \t")));
  if (keyword == "numeric" || keyword == "real" || keyword == "integer") {
    meta.declared_numeric = true;
    meta.kind = ColumnKind::numeric;
  } else if (keyword == "string" || keyword == "date") {
    meta.kind = ColumnKind::categorical;
  } else {
    throw Error(ErrorKind::unsupported_format,
                "line " + std::to_string(line_no) + ": unsupported attribute type '" + std::string(type) + "'");
  }
  return meta;
}

}  // namespace

RawTable parse_arff(std::string_view text, std::size_t max_cells, std::string source_name) {
  if (trim(text).empty()) throw Error(ErrorKind::empty_input, "input is empty");

  std::vector<ColumnMeta> columns;
  bool saw_relation = false;
  bool in_data = false;
  RawTable table;
  std::vector<std::string_view> values;

  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const auto line = trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (line.empty() || line.front() == '%') continue;

    if (!in_data) {
      if (starts_with_keyword(line, "@relation")) {
        saw_relation = true;
      } else if (starts_with_keyword(line, "@attribute")) {
        columns.push_back(parse_attribute(line.substr(10), line_no));
      } else if (to_lower_ascii(line) == "@data") {
        if (!saw_relation) throw Error(ErrorKind::parse, "missing @relation before @data");
        if (columns.size() < 2) {
          throw Error(ErrorKind::parse, "need at least two attributes (one feature and one label)");
        }
        table = RawTable(std::move(source_name), TableFormat::arff, std::move(columns));
        in_data = true;
      } else {
        throw Error(ErrorKind::parse, "line " + std::to_string(line_no) + ": unexpected header line");
      }
      continue;
    }

    if (line.front() == '{') {
      throw Error(ErrorKind::unsupported_format, "sparse ARFF rows are not supported");
    }
    values = split_values(line);
    if (values.size() != table.n_cols()) {
      throw Error(ErrorKind::parse, "line " + std::to_string(line_no) + ": expected " +
                                        std::to_string(table.n_cols()) + " values, found " +
                                        std::to_string(values.size()));
    }
    for (std::size_t c = 0; c < values.size(); ++c) {
      const auto v = values[c];
      if (v == "?") continue;
      const ColumnMeta& meta = table.column(c);
      if (meta.nominal_domain &&
          std::find(meta.nominal_domain->begin(), meta.nominal_domain->end(), v) == meta.nominal_domain->end()) {
        throw Error(ErrorKind::parse, "column " + meta.name + ": value '" + std::string(v) +
                                          "' not in nominal domain");
      }
      if (meta.declared_numeric && !parse_real(v)) {
        throw Error(ErrorKind::parse, "column " + meta.name + ": value '" + std::string(v) + "' is not numeric");
      }
    }
    if ((table.n_rows() + 1) * table.n_cols() > max_cells) {
      throw Error(ErrorKind::too_large,
                  "table exceeds the in-memory limit of " + std::to_string(max_cells) + " cells");
    }
    table.append_row(std::span<const std::string_view>(values));
  }

  if (!in_data) throw Error(ErrorKind::parse, "missing @data section");
  if (table.n_rows() == 0) throw Error(ErrorKind::empty_input, "ARFF file has no data rows");
  describe_columns(table);
  return table;
}

std::size_t count_arff_rows(std::istream& in) {
  std::string line;
  bool in_data = false;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    const auto t = trim(line);
    if (t.empty() || t.front() == '%') continue;
    if (!in_data) {
      in_data = to_lower_ascii(t) == "@data";
      continue;
    }
    ++rows;
  }
  return rows;
}

}  // namespace otdp
