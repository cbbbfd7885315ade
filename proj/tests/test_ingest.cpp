#include <doctest.h>

#include <sstream>

#include "otdp/error.hpp"
#include "otdp/ingest.hpp"
#include "otdp/random.hpp"
#include "support.hpp"

using namespace otdp;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an otdp::Error");
  return ErrorKind::invalid_argument;
}

std::string message_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("csv: minimal table") {
  const RawTable t = parse_csv("a,b,label\n1,x,Normal\n2,y,Attack");
  CHECK(t.n_rows() == 2);
  CHECK(t.n_cols() == 3);
  CHECK(t.column(0).name == "a");
  CHECK(t.column(2).name == "label");
  CHECK(t.cell(1, 1) == "y");
  CHECK(t.column(0).kind == ColumnKind::numeric);
  CHECK(t.column(1).kind == ColumnKind::categorical);
}

TEST_CASE("csv: ragged row names the row") {
  CHECK(message_of([] { parse_csv("1,2\n3"); }) == "row 2: expected 2 cells, found 1");
  CHECK(kind_of([] { parse_csv("1,2\n3"); }) == ErrorKind::parse);
}

TEST_CASE("csv: empty input") {
  CHECK(kind_of([] { parse_csv(""); }) == ErrorKind::empty_input);
  CHECK(kind_of([] { parse_csv("\n\n"); }) == ErrorKind::empty_input);
}

TEST_CASE("csv: missing tokens are counted per column") {
  // hand count: column 0 has one '?', column 1 has an empty cell and a NaN
  const RawTable t = parse_csv("f,g,label\n1,2,a\n?,3,b\n4,,a\n5,NaN,b\n6,7,a\n");
  CHECK(t.n_rows() == 5);
  CHECK(t.column(0).missing_count == 1);
  CHECK(t.column(1).missing_count == 2);
  CHECK(t.column(2).missing_count == 0);
  CHECK(t.is_missing(1, 0));
  for (std::size_t c = 0; c < t.n_cols(); ++c) {
    std::size_t present = 0;
    for (std::size_t r = 0; r < t.n_rows(); ++r) present += !t.is_missing(r, c);
    CHECK(present + t.column(c).missing_count == t.n_rows());
  }
}

TEST_CASE("csv: quoting, BOM, CRLF and blank lines") {
  const std::string text = "\xEF\xBB\xBFname,\"note, with comma\"\r\n\"a \"\"q\"\"\",\"line\nbreak\"\r\n\r\nb,plain\r\n";
  const RawTable t = parse_csv(text);
  CHECK(t.column(0).name == "name");
  CHECK(t.column(1).name == "note, with comma");
  REQUIRE(t.n_rows() == 2);
  CHECK(t.cell(0, 0) == "a \"q\"");
  CHECK(t.cell(0, 1) == "line\nbreak");
  CHECK(t.cell(1, 1) == "plain");
}

TEST_CASE("csv: headerless input gets synthetic names") {
  CsvOptions o;
  o.has_header = false;
  const RawTable t = parse_csv("1,2\n3,4\n", o);
  CHECK(t.n_rows() == 2);
  CHECK(t.column(0).name == "col_0");
  CHECK(t.column(1).name == "col_1");
}

TEST_CASE("csv: delimiter sniffing") {
  CHECK(sniff_delimiter("a;b;c\n1;2;3") == ';');
  CHECK(sniff_delimiter("a\tb\n") == '\t');
  CHECK(sniff_delimiter("a,b\n") == ',');
  CHECK(sniff_delimiter("abc\n") == ',');
}

TEST_CASE("csv: cell cap") {
  CsvOptions o;
  o.max_cells = 5;
  CHECK(kind_of([&] { parse_csv("a,b\n1,2\n3,4\n5,6\n", o); }) == ErrorKind::too_large);
  std::istringstream in("a,b\n1,2\n\"x\ny\",4\n5,6\n");
  CHECK(count_csv_rows(in, true) == 3);
}

TEST_CASE("csv: mixed column is categorical") {
  const RawTable t = parse_csv("v,label\n1,a\n2,b\nx,a\n");
  CHECK(t.column(0).kind == ColumnKind::categorical);
  // oracle: the column is numeric only if every present cell parses
  bool all_parse = true;
  for (std::size_t r = 0; r < t.n_rows(); ++r) all_parse = all_parse && parse_real(t.cell(r, 0)).has_value();
  CHECK_FALSE(all_parse);
}

TEST_CASE("csv: round trip reproduces every cell") {
  const std::string alphabet = "ab,\"\n 1.;\t";
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    SeededRng rng(seed);
    const std::size_t cols = 2 + rng.uniform_below(4);
    const std::size_t rows = 1 + rng.uniform_below(20);
    std::vector<ColumnMeta> meta(cols);
    for (std::size_t c = 0; c < cols; ++c) meta[c].name = "c" + std::to_string(c);
    RawTable t("mem", TableFormat::csv, meta);
    for (std::size_t r = 0; r < rows; ++r) {
      std::vector<std::string> cells(cols);
      for (auto& cell : cells) {
        const std::size_t len = 1 + rng.uniform_below(6);
        for (std::size_t k = 0; k < len; ++k) cell.push_back(alphabet[rng.uniform_below(alphabet.size())]);
      }
      t.append_row(cells);
    }
    for (char d : {',', ';', '\t'}) {
      CsvOptions o;
      o.delimiter = d;
      const RawTable back = parse_csv(to_csv(t, d), o);
      REQUIRE(back.n_rows() == t.n_rows());
      REQUIRE(back.n_cols() == t.n_cols());
      for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) CHECK(back.cell(r, c) == t.cell(r, c));
      }
    }
  }
}

TEST_CASE("arff: minimal file") {
  const RawTable t = parse_arff("@relation t\n@attribute f numeric\n@attribute c {a,b}\n@data\n1,a\n2,b");
  CHECK(t.n_rows() == 2);
  CHECK(t.n_cols() == 2);
  CHECK(t.format() == TableFormat::arff);
  CHECK(t.column(0).kind == ColumnKind::numeric);
  CHECK(t.column(1).kind == ColumnKind::categorical);
  CHECK(t.column(1).nominal_domain == std::vector<std::string>{"a", "b"});
}

TEST_CASE("arff: nominal domain is enforced") {
  const std::string text = "@relation t\n@attribute f numeric\n@attribute c {a,b}\n@data\n1,a\n3,z\n";
  CHECK(message_of([&] { parse_arff(text); }) == "column c: value 'z' not in nominal domain");
}

TEST_CASE("arff: comments, case, quoting and missing values") {
  const std::string text =
      "% header comment\n@RELATION 'gas'\n@Attribute 'my col' REAL\n@attribute label {normal,attack}\n"
      "@DATA\n% data comment\n1.5,normal\n?,attack\n";
  const RawTable t = parse_arff(text);
  CHECK(t.column(0).name == "my col");
  CHECK(t.n_rows() == 2);
  CHECK(t.is_missing(1, 0));
  CHECK(t.column(0).missing_count == 1);
}

TEST_CASE("arff: sparse rows are unsupported") {
  const std::string text = "@relation t\n@attribute f numeric\n@attribute g numeric\n@data\n{0 1, 1 2}\n";
  CHECK(kind_of([&] { parse_arff(text); }) == ErrorKind::unsupported_format);
}

TEST_CASE("arff: nineteen attributes") {
  std::string text = "@relation ian\n";
  for (int i = 0; i < 18; ++i) text += "@attribute f" + std::to_string(i) + " numeric\n";
  text += "@attribute result {0,1}\n@data\n";
  for (int r = 0; r < 4; ++r) {
    for (int i = 0; i < 18; ++i) text += std::to_string(r * i) + ",";
    text += std::to_string(r % 2) + "\n";
  }
  const RawTable t = parse_arff(text);
  CHECK(t.n_cols() == 19);
  std::istringstream in(text);
  CHECK(count_arff_rows(in) == 4);
}

TEST_CASE("load: spreadsheets get a conversion hint") {
  const auto dir = testing::fresh_dir("xlsx");
  testing::write_file(dir / "book.xlsx", "PK\x03\x04 not really a workbook");
  try {
    load_table(dir / "book.xlsx");
    FAIL("expected unsupported format");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::unsupported_format);
    CHECK(std::string(e.what()).find("CSV") != std::string::npos);
  }
}

TEST_CASE("load: format detection by extension and content") {
  CHECK(detect_format("x.arff", "") == InputFormat::arff);
  CHECK(detect_format("x.csv", "@relation x") == InputFormat::csv);
  CHECK(detect_format("x.data", "% c\n@relation x\n") == InputFormat::arff);
  CHECK(detect_format("x.data", "a,b\n") == InputFormat::csv);
}

TEST_CASE("schema: label by name, hint and fallback") {
  const RawTable t = parse_csv("dur,proto,Label\n1,tcp,normal\n2,udp,dos\n");
  CHECK(infer_schema(t).label.column_index == 2);
  CHECK(infer_schema(t).label.source == LabelSource::name_match);

  const RawTable h = parse_csv("marker,x,class\nnormal,1,a\nattack,2,b\n");
  SchemaOptions o;
  o.label_hint = "marker";
  CHECK(infer_schema(h, o).label.column_index == 0);
  o.label_hint = "nope";
  CHECK(kind_of([&] { infer_schema(h, o); }) == ErrorKind::invalid_argument);

  const RawTable f = parse_csv("x,y,z\n1,2,normal\n1,3,bad\n");
  CHECK(infer_schema(f).label.column_index == 2);
  CHECK(infer_schema(f).label.source == LabelSource::fallback);
}

TEST_CASE("schema: all-constant table has no label") {
  const RawTable t = parse_csv("x,y\n1,2\n1,2\n");
  CHECK(kind_of([&] { infer_schema(t); }) == ErrorKind::no_label);
}

TEST_CASE("schema: deterministic") {
  const std::string text = "a,b,type\n1,x,normal\n2,y,scan\n3,x,normal\n";
  CHECK(infer_schema(parse_csv(text)) == infer_schema(parse_csv(text)));
}

TEST_CASE("schema: default benign aliases") {
  const auto& a = default_benign_aliases();
  for (const char* v : {"benign", "normal", "0", "false", "good", "natural"}) {
    CHECK(std::find(a.begin(), a.end(), v) != a.end());
  }
}

TEST_CASE("readiness verdicts") {
  SUBCASE("single class") {
    const RawTable t = parse_csv("a,label\n1,Normal\n2,Normal\n");
    const Readiness r = check_ml_ready(t, infer_schema(t).label);
    CHECK_FALSE(r.ready);
    CHECK(std::find(r.reasons.begin(), r.reasons.end(), "single-class labels") != r.reasons.end());
  }
  SUBCASE("ready") {
    const RawTable t = parse_csv("f1,f2,f3,f4,f5,label\n1,2,3,4,5,Normal\n2,3,4,5,6,DoS\n");
    CHECK(check_ml_ready(t, infer_schema(t).label).ready);
  }
  SUBCASE("unlabeled capture export") {
    const RawTable t = parse_csv("src,dst,bytes\n10.0.0.1,10.0.0.2,60\n10.0.0.2,10.0.0.1,1500\n");
    const Readiness r = check_ml_ready(t, infer_schema(t).label);
    CHECK_FALSE(r.ready);
    CHECK(r.reasons == std::vector<std::string>{"no label column"});
  }
  SUBCASE("no usable feature") {
    const RawTable t = parse_csv("f,label\n?,normal\n,attack\n");
    const Readiness r = check_ml_ready(t, infer_schema(t).label);
    CHECK(std::find(r.reasons.begin(), r.reasons.end(), "no usable feature column") != r.reasons.end());
  }
}
