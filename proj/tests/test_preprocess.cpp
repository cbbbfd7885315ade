#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "otdp/error.hpp"
#include "otdp/ingest.hpp"
#include "otdp/preprocess.hpp"
#include "otdp/random.hpp"

using namespace otdp;

namespace {

Labels labels_of(const std::vector<std::string>& values) {
  std::string text = "f,label\n";
  for (std::size_t i = 0; i < values.size(); ++i) text += std::to_string(i) + "," + values[i] + "\n";
  const RawTable t = parse_csv(text);
  return binarize_labels(t, infer_schema(t).label);
}

Labels make_y(std::size_t benign, std::size_t malicious) {
  Labels y(benign, 0);
  y.insert(y.end(), malicious, 1);
  return y;
}

}  // namespace

TEST_CASE("clean: drops rows with a missing cell") {
  const RawTable t = parse_csv("a,b,label\n1,2,normal\n3,?,attack\n5,6,attack\n");
  const CleanResult c = clean(t, infer_schema(t).label);
  CHECK(c.table.n_rows() == 2);
  CHECK(c.dropped_rows == 1);
  CHECK(c.kept_rows == std::vector<std::size_t>{0, 2});
}

TEST_CASE("clean: identity without missing cells") {
  const RawTable t = parse_csv("a,b,label\n1,2,normal\n3,4,attack\n");
  const CleanResult c = clean(t, infer_schema(t).label);
  CHECK(c.dropped_rows == 0);
  CHECK(to_csv(c.table) == to_csv(t));
}

TEST_CASE("clean: missing-only columns go first, then rows") {
  const RawTable t = parse_csv("a,empty,label\n1,,normal\n?,,attack\n3,?,attack\n");
  const CleanResult c = clean(t, infer_schema(t).label);
  CHECK(c.dropped_columns == std::vector<std::string>{"empty"});
  CHECK(c.table.n_cols() == 2);
  CHECK(c.table.n_rows() == 2);
  CHECK(c.label.column_index == 1);
}

TEST_CASE("clean: everything missing") {
  const RawTable t = parse_csv("a,label\n?,normal\n1,?\n");
  CHECK_THROWS_AS(clean(t, infer_schema(t).label), Error);
}

TEST_CASE("clean: row count matches an independent scan") {
  SeededRng rng(7);
  std::string text = "a,b,c,label\n";
  for (int r = 0; r < 400; ++r) {
    for (int c = 0; c < 3; ++c) text += (rng.uniform01() < 0.1 / 3 ? std::string("?") : std::to_string(r + c)) + ",";
    text += rng.uniform01() < 0.02 ? "" : (r % 3 ? "attack" : "normal");
    text += "\n";
  }
  const RawTable t = parse_csv(text);
  std::size_t complete = 0;
  for (std::size_t r = 0; r < t.n_rows(); ++r) {
    bool ok = true;
    for (std::size_t c = 0; c < t.n_cols(); ++c) ok = ok && !is_missing_token(t.cell(r, c));
    complete += ok;
  }
  const CleanResult c = clean(t, infer_schema(t).label);
  CHECK(c.table.n_rows() == complete);
  CHECK(c.dropped_rows == t.n_rows() - complete);
  CHECK(c.table.n_rows() <= t.n_rows());
}

TEST_CASE("binarize: benign aliases") {
  CHECK(labels_of({"Normal", "DoS", "normal "}) == Labels{0, 1, 0});
  CHECK(labels_of({"0", "1", "1"}) == Labels{0, 1, 1});
  CHECK(labels_of({"benign", "MITM", "Replay", "Scan"}) == Labels{0, 1, 1, 1});
}

TEST_CASE("binarize: single class is an error") {
  const RawTable t = parse_csv("f,label\n1,normal\n2,normal\n");
  LabelSpec spec = infer_schema(t).label;
  try {
    binarize_labels(t, spec);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::single_class);
  }
}

TEST_CASE("imbalance ratio") {
  CHECK(imbalance_ratio(make_y(990, 10)).ir == 99.0);
  CHECK(imbalance_ratio(make_y(500, 500)).ir == 1.0);
  const ImbalanceStat s = imbalance_ratio(make_y(17, 3));
  CHECK(s.ir == doctest::Approx(17.0 / 3.0).epsilon(1e-15));
  CHECK(s.n_benign == 17);
  CHECK(s.n_malicious == 3);
  CHECK(imbalance_ratio(make_y(3, 17)).ir == s.ir);
  CHECK_THROWS_AS(imbalance_ratio(make_y(5, 0)), Error);
}

TEST_CASE("stratified sample: proportional split") {
  const Labels y = make_y(900, 100);
  const auto rows = stratified_sample(y, {100, 42});
  REQUIRE(rows.size() == 100);
  std::size_t mal = 0;
  for (auto r : rows) mal += y[r];
  CHECK(mal == 10);
  CHECK(std::is_sorted(rows.begin(), rows.end()));
  CHECK(std::adjacent_find(rows.begin(), rows.end()) == rows.end());
}

TEST_CASE("stratified sample: k >= n returns everything") {
  const Labels y = make_y(400, 100);
  const auto rows = stratified_sample(y, {1000, 42});
  REQUIRE(rows.size() == 500);
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(rows[i] == i);
}

TEST_CASE("stratified sample: tiny minority is clamped") {
  const Labels y = make_y(997, 3);
  const auto rows = stratified_sample(y, {100, 42});
  REQUIRE(rows.size() == 100);
  std::size_t mal = 0;
  for (auto r : rows) mal += y[r];
  CHECK(mal >= 2);
  CHECK(100 - mal >= 97);
  CHECK(100 - mal <= 98);
}

TEST_CASE("stratified sample: deterministic and ratio preserving") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    SeededRng rng(seed * 31);
    const std::size_t benign = 50 + rng.uniform_below(2000);
    const std::size_t malicious = 2 + rng.uniform_below(800);
    const Labels y = make_y(benign, malicious);
    const std::size_t k = 10 + rng.uniform_below(300);
    const auto a = stratified_sample(y, {k, seed});
    CHECK(a == stratified_sample(y, {k, seed}));
    if (k >= y.size()) continue;
    std::size_t nb = 0;
    for (auto r : a) nb += y[r] == 0;
    // n_b is within half a row of k * p_benign unless the per-class floor applies
    const double ideal = static_cast<double>(k) * static_cast<double>(benign) / static_cast<double>(y.size());
    if (nb > 2 && k - nb > 2) CHECK(std::abs(static_cast<double>(nb) - ideal) <= 0.5);
  }
}

TEST_CASE("stratified sample: class with one row") {
  CHECK_THROWS_AS(stratified_sample(make_y(10, 1), {5, 1}), Error);
}

TEST_CASE("one-hot: indicators in first-appearance order") {
  const RawTable t = parse_csv("proto,x,label\ntcp,1.5,normal\nudp,2.0,attack\ntcp,3,attack\n");
  const Schema s = infer_schema(t);
  const Labels y = binarize_labels(t, s.label);
  const std::vector<std::size_t> rows{0, 1, 2};
  const LabeledMatrix m = one_hot_encode(t, s.label, rows, y);
  REQUIRE(m.feature_names == std::vector<std::string>{"proto=tcp", "proto=udp", "x"});
  CHECK(m.X(0, 0) == 1.0);
  CHECK(m.X(0, 1) == 0.0);
  CHECK(m.X(1, 0) == 0.0);
  CHECK(m.X(1, 1) == 1.0);
  CHECK(m.X(2, 0) == 1.0);
  CHECK(m.X(0, 2) == 1.5);
  CHECK(m.X(1, 2) == 2.0);
  CHECK(m.is_indicator(0));
  CHECK_FALSE(m.is_indicator(2));
  for (Eigen::Index r = 0; r < m.X.rows(); ++r) CHECK(m.X(r, 0) + m.X(r, 1) == 1.0);
}

TEST_CASE("one-hot: wide categorical is dropped with a warning") {
  std::string text = "flow,x,label\n";
  for (int i = 0; i < 5000; ++i) text += "id" + std::to_string(i) + "," + std::to_string(i % 7) + "," + (i % 2 ? "a" : "normal") + "\n";
  const RawTable t = parse_csv(text);
  const Schema s = infer_schema(t, {});
  const Labels y = binarize_labels(t, s.label);
  std::vector<std::size_t> rows(t.n_rows());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  const LabeledMatrix m = one_hot_encode(t, s.label, rows, y, 64);
  CHECK(m.feature_names == std::vector<std::string>{"x"});
  REQUIRE(m.warnings.size() == 1);
  CHECK(m.warnings[0].find("high-cardinality categorical dropped") != std::string::npos);
}

TEST_CASE("one-hot: nothing survives") {
  const RawTable t = parse_csv("flow,label\na,normal\nb,attack\nc,attack\n");
  const Schema s = infer_schema(t);
  const Labels y = binarize_labels(t, s.label);
  const std::vector<std::size_t> rows{0, 1, 2};
  try {
    one_hot_encode(t, s.label, rows, y, 2);
    FAIL("expected no_features");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::no_features);
  }
}

TEST_CASE("one-hot: domain comes from the whole table, not the sample") {
  const RawTable t = parse_csv("proto,label\ntcp,normal\nudp,attack\nicmp,attack\ntcp,normal\n");
  const Schema s = infer_schema(t);
  const Labels y = binarize_labels(t, s.label);
  const std::vector<std::size_t> rows{0, 1};
  const Labels ys{y[0], y[1]};
  const LabeledMatrix m = one_hot_encode(t, s.label, rows, ys);
  CHECK(m.n_features() == 3);
  const auto full = encode_feature(t, m.sources[2]);
  CHECK(full == std::vector<double>{0, 0, 1, 0});
}
