#include <array>
#include <deque>
#include <fstream>
#include <istream>
#include <iterator>
#include <sstream>

#include "otdp/error.hpp"
#include "otdp/ingest.hpp"

namespace otdp {
namespace {

std::string_view strip_bom(std::string_view text) {
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  return text;
}

class CsvReader {
 public:
  CsvReader(std::string_view text, char delimiter) : text_(text), delimiter_(delimiter) {}

  // Reads the next non-blank record into `cells`. Returns false at end of input.
  bool next(std::vector<std::string_view>& cells) {
    while (pos_ < text_.size()) {
      ++record_;
      cells.clear();
      scratch_.clear();
      read_record(cells);
      if (cells.size() == 1 && cells.front().empty()) continue;  // blank line
      return true;
    }
    return false;
  }

  std::size_t record_number() const noexcept { return record_; }

 private:
  void read_record(std::vector<std::string_view>& cells) {
    for (;;) {
      cells.push_back(pos_ < text_.size() && text_[pos_] == '"' ? read_quoted() : read_plain());
      if (pos_ >= text_.size()) return;
      const char ch = text_[pos_];
      if (ch == delimiter_) {
        ++pos_;
        continue;
      }
      // end of line: "\n", "\r\n" or a lone "\r"
      ++pos_;
      if (ch == '\r' && pos_ < text_.size() && text_[pos_] == '\n') ++pos_;
      return;
    }
  }

  std::string_view read_plain() {
    const std::size_t start = pos_;
    while (pos_ < text_.size()) {
      const char ch = text_[pos_];
      if (ch == delimiter_ || ch == '\n' || ch == '\r') break;
      ++pos_;
    }
    return text_.substr(start, pos_ - start);
  }

  std::string_view read_quoted() {
    ++pos_;  // opening quote
    const std::size_t start = pos_;
    bool escaped = false;
    for (;;) {
      const auto close = text_.find('"', pos_);
      if (close == std::string_view::npos) {
        throw Error(ErrorKind::parse,
                    "row " + std::to_string(record_) + ": unterminated quoted cell");
      }
      if (close + 1 < text_.size() && text_[close + 1] == '"') {
        escaped = true;
        pos_ = close + 2;
        continue;
      }
      pos_ = close + 1;
      break;
    }
    const std::string_view raw = text_.substr(start, pos_ - 1 - start);
    // Anything between the closing quote and the next delimiter is kept verbatim.
    const std::string_view tail = read_plain();
    if (!escaped && tail.empty()) return raw;
    std::string& out = scratch_.emplace_back();
    out.reserve(raw.size() + tail.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
      out.push_back(raw[i]);
      if (raw[i] == '"') ++i;  // skip the second quote of a doubled pair
    }
    out.append(tail);
    return out;
  }

  std::string_view text_;
  char delimiter_;
  std::size_t pos_ = 0;
  std::size_t record_ = 0;
  std::deque<std::string> scratch_;  // stable storage for unescaped cells
};

}  // namespace

RawTable parse_csv(std::string_view text, const CsvOptions& options, std::string source_name) {
  if (options.delimiter != ',' && options.delimiter != ';' && options.delimiter != '\t') {
    throw Error(ErrorKind::invalid_argument, "delimiter must be comma, semicolon or tab");
  }
  text = strip_bom(text);
  if (trim(text).empty()) throw Error(ErrorKind::empty_input, "input is empty");

  CsvReader reader(text, options.delimiter);
  std::vector<std::string_view> cells;
  if (!reader.next(cells)) throw Error(ErrorKind::empty_input, "input is empty");

  std::vector<ColumnMeta> columns(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    columns[i].name = options.has_header ? std::string(trim(cells[i])) : "col_" + std::to_string(i);
  }
  if (columns.size() < 2) {
    throw Error(ErrorKind::parse, "need at least two columns (one feature and one label)");
  }

  RawTable table(std::move(source_name), TableFormat::csv, std::move(columns));
  const std::size_t width = table.n_cols();
  // Rough pre-sizing: most of the input text ends up in the arena.
  table.reserve(text.size() / (width * 4 + 1), text.size());

  auto add = [&](std::size_t record) {
    if (cells.size() != width) {
      throw Error(ErrorKind::parse, "row " + std::to_string(record) + ": expected " +
                                        std::to_string(width) + " cells, found " +
                                        std::to_string(cells.size()));
    }
    if ((table.n_rows() + 1) * width > options.max_cells) {
      throw Error(ErrorKind::too_large, "table exceeds the in-memory limit of " +
                                            std::to_string(options.max_cells) + " cells");
    }
    table.append_row(std::span<const std::string_view>(cells));
  };

  if (!options.has_header) add(reader.record_number());
  while (reader.next(cells)) add(reader.record_number());

  if (table.n_rows() == 0) throw Error(ErrorKind::empty_input, "input has a header but no data rows");
  describe_columns(table);
  return table;
}

char sniff_delimiter(std::string_view text) {
  text = strip_bom(text);
  std::array<std::size_t, 3> counts{};
  bool quoted = false;
  for (char ch : text) {
    if (ch == '"') quoted = !quoted;
    if (quoted) continue;
    if (ch == '\n' || ch == '\r') break;
    if (ch == ',') ++counts[0];
    if (ch == ';') ++counts[1];
    if (ch == '\t') ++counts[2];
  }
  if (counts[1] > counts[0] && counts[1] >= counts[2]) return ';';
  if (counts[2] > counts[0] && counts[2] > counts[1]) return '\t';
  return ',';
}

std::size_t count_csv_rows(std::istream& in, bool has_header) {
  std::size_t records = 0;
  bool quoted = false;
  bool line_has_content = false;
  std::istreambuf_iterator<char> it(in), end;
  for (; it != end; ++it) {
    const char ch = *it;
    if (ch == '"') quoted = !quoted;
    if (!quoted && (ch == '\n' || ch == '\r')) {
      if (line_has_content) ++records;
      line_has_content = false;
      continue;
    }
    line_has_content = true;
  }
  if (line_has_content) ++records;
  if (has_header && records > 0) --records;
  return records;
}

std::string to_csv(const RawTable& table, char delimiter) {
  std::string out;
  auto put = [&](std::string_view cell) {
    const bool needs_quotes = cell.find_first_of(std::string{delimiter, '"', '\n', '\r'}) !=
                              std::string_view::npos;
    if (!needs_quotes) {
      out.append(cell);
      return;
    }
    out.push_back('"');
    for (char ch : cell) {
      if (ch == '"') out.push_back('"');
      out.push_back(ch);
    }
    out.push_back('"');
  };
  for (std::size_t c = 0; c < table.n_cols(); ++c) {
    if (c > 0) out.push_back(delimiter);
    put(table.column(c).name);
  }
  out.push_back('\n');
  for (std::size_t r = 0; r < table.n_rows(); ++r) {
    for (std::size_t c = 0; c < table.n_cols(); ++c) {
      if (c > 0) out.push_back(delimiter);
      put(table.cell(r, c));
    }
    out.push_back('\n');
  }
  return out;
}

InputFormat detect_format(const std::filesystem::path& path, std::string_view head) {
  const std::string ext = to_lower_ascii(path.extension().string());
  if (ext == ".xlsx" || ext == ".xls" || head.substr(0, 4) == std::string_view("PK\x03\x04", 4)) {
    throw Error(ErrorKind::unsupported_format,
                "spreadsheet input is not supported; export the sheet to CSV first "
                "(for example `libreoffice --headless --convert-to csv " +
                    path.filename().string() + "`)");
  }
  if (ext == ".arff") return InputFormat::arff;
  if (ext == ".csv" || ext == ".tsv" || ext == ".txt") return InputFormat::csv;
  // Unknown extension: look for an ARFF header keyword.
  std::istringstream lines{std::string(head)};
  std::string line;
  while (std::getline(lines, line)) {
    const auto t = trim(line);
    if (t.empty() || t.front() == '%') continue;
    return to_lower_ascii(t.substr(0, 9)) == "@relation" ? InputFormat::arff : InputFormat::csv;
  }
  return InputFormat::csv;
}

RawTable load_table(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  InputFormat format = options.format;
  const InputFormat detected = detect_format(path, std::string_view(text).substr(0, 4096));
  if (format == InputFormat::automatic) format = detected;

  if (format == InputFormat::arff) {
    return parse_arff(text, options.max_cells, path.filename().string());
  }
  CsvOptions csv;
  csv.delimiter = options.delimiter != 0 ? options.delimiter : sniff_delimiter(text);
  csv.has_header = options.has_header;
  csv.max_cells = options.max_cells;
  return parse_csv(text, csv, path.filename().string());
}

}  // namespace otdp
