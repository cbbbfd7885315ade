#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <regex>
#include <sstream>

#include "otdp/error.hpp"
#include "otdp/report.hpp"
#include "support.hpp"

using namespace otdp;

namespace {

AnalysisBundle sample_bundle() {
  AnalysisBundle b;
  b.dataset_name = "HDGM";
  b.source_file = "train_data.csv";
  b.stats = {3890, 78, "csv"};
  b.imbalance = {1945, 1945, 1.0};
  b.complexity.cs = 0.4789;
  b.complexity.ir = b.imbalance;
  b.complexity.k_used = 1000;
  b.complexity.m_used = 10;
  b.complexity.seed = 42;
  b.complexity.measures = {{MeasureId::F1, 0.123456789012345, 0.1}, {MeasureId::N1, 1.0 / 3.0, 1.0 / 3.0}};
  b.complexity.skipped = {{MeasureId::F1v, "singular scatter matrix"}};
  for (std::size_t i = 0; i < 7; ++i) {
    b.ranking.push_back({i, "feat \"" + std::to_string(i) + "\"", 1.0 / static_cast<double>(i + 3)});
  }
  b.plot_features = {0, 1, 2, 3, 4};
  b.label_column = "result";
  b.dropped_rows = 3;
  b.dropped_columns = {"time"};
  b.warnings = {"column 'x' dropped: too many categories"};
  b.config = {{"k", 1000}, {"m", 10}, {"seed", 42}};
  return b;
}

struct Point {
  double x;
  double y;
  std::string cls;
};

// Circle coordinates per class group, in document order.
std::vector<Point> svg_points(const std::string& svg) {
  std::vector<Point> out;
  const std::regex group(R"rx(<g class="(benign|malicious)"[^>]*>([\s\S]*?)</g>)rx");
  const std::regex circle(R"rx(<circle cx="([-0-9.]+)" cy="([-0-9.]+)" r="1.5"/>)rx");
  for (std::sregex_iterator g(svg.begin(), svg.end(), group), end; g != end; ++g) {
    const std::string body = (*g)[2];
    for (std::sregex_iterator c(body.begin(), body.end(), circle); c != end; ++c) {
      out.push_back({std::stod((*c)[1]), std::stod((*c)[2]), (*g)[1]});
    }
  }
  return out;
}

// Independent re-plot from a sidecar: fixed margins, linear axes.
std::vector<Point> replot(const std::string& tsv, std::size_t total_rows, const PlotStyle& style) {
  struct Row {
    double row;
    double value;
    std::string cls;
  };
  std::vector<Row> rows;
  std::istringstream in(tsv);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream f(line);
    Row r;
    std::string a, b;
    std::getline(f, a, '\t');
    std::getline(f, b, '\t');
    std::getline(f, r.cls, '\t');
    r.row = std::stod(a);
    r.value = std::stod(b);
    rows.push_back(r);
  }
  double lo = rows.front().value, hi = rows.front().value;
  for (const auto& r : rows) {
    lo = std::min(lo, r.value);
    hi = std::max(hi, r.value);
  }
  const double left = 70.0, top = 30.0, width = style.width - 90.0, height = style.height - 80.0;
  const double x_max = static_cast<double>(total_rows - 1);
  std::vector<Point> out;
  for (const char* cls : {"benign", "malicious"}) {
    for (const auto& r : rows) {
      if (r.cls != cls) continue;
      const double x = x_max > 0 ? left + r.row / x_max * width : left + 0.5 * width;
      const double y = hi > lo ? top + height - (r.value - lo) / (hi - lo) * height : top + 0.5 * height;
      out.push_back({std::stod(format_fixed_half_up(x, 2)), std::stod(format_fixed_half_up(y, 2)), cls});
    }
  }
  return out;
}

std::size_t count_of(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("half-up rounding") {
  CHECK(format_fixed_half_up(2.5, 2) == "2.50");
  CHECK(format_fixed_half_up(0.31234, 3) == "0.312");
  CHECK(format_fixed_half_up(2.675, 2) == "2.68");
  CHECK(format_fixed_half_up(0.0005, 3) == "0.001");
  CHECK(format_fixed_half_up(0.4785, 3) == "0.479");
  CHECK(format_fixed_half_up(99.0, 2) == "99.00");
  CHECK(format_fixed_half_up(0.9996, 3) == "1.000");
  CHECK(format_fixed_half_up(9.995, 2) == "10.00");
  CHECK(format_fixed_half_up(-2.5, 0) == "-3");
  CHECK(format_fixed_half_up(1e-20, 3) == "0.000");
  CHECK(format_fixed_half_up(12345.0, 1) == "12345.0");
  CHECK(format_shortest(0.1) == "0.1");
  CHECK(std::stod(format_shortest(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("stats row") {
  AnalysisBundle b = sample_bundle();
  const std::string row = emit_stats_row(b);
  CHECK(row.rfind("HDGM | ", 0) == 0);
  CHECK(row.find("3890 | 78 | 1.00 | 0.479") != std::string::npos);
  CHECK(stats_header() == "Dataset | File | Format | # Data points | # Features | IR | Avg. CS");

  b.imbalance.ir = 2.5;
  b.complexity.cs = 0.31234;
  const std::string r2 = emit_stats_row(b);
  CHECK(r2.size() >= 12);
  CHECK(r2.find("2.50 | 0.312") != std::string::npos);
  CHECK(emit_stats_row(b) == r2);
}

TEST_CASE("bundle json round trip") {
  const AnalysisBundle b = sample_bundle();
  const auto j = to_json(b);
  CHECK(bundle_from_json(j) == b);
  CHECK(bundle_from_json(nlohmann::json::parse(emit_stats_json(b))) == b);
  CHECK(j.at("complexity").at("cs_3dp") == "0.479");
  CHECK(j.at("complexity").at("seed") == 42);
  CHECK(j.at("complexity").at("k_used") == 1000);
  CHECK(j.at("complexity").at("m_used") == 10);
  CHECK(emit_stats_json(b) == emit_stats_json(b));
  CHECK_THROWS_AS(bundle_from_json(nlohmann::json::parse(R"({"dataset_name": 3})")), Error);
}

TEST_CASE("bundle validation") {
  AnalysisBundle b = sample_bundle();
  CHECK_NOTHROW(validate_bundle(b));
  b.plot_features.push_back(5);
  CHECK_THROWS_AS(validate_bundle(b), Error);
  b = sample_bundle();
  b.plot_features = {42};
  CHECK_THROWS_AS(validate_bundle(b), Error);
}

TEST_CASE("feature plot: two points") {
  const std::vector<double> values{1.0, 2.0};
  const Labels y{0, 1};
  const PlotStyle style;
  const auto data = make_plot_data("x", values, y, style.max_points);
  const auto svg = render_feature_svg(data, style);
  const auto pts = svg_points(svg);
  REQUIRE(pts.size() == 2);
  CHECK(pts[0].cls == "benign");
  CHECK(pts[1].cls == "malicious");
  // row 0 at the left edge, min value at the bottom; row 1 at the right, max at the top
  CHECK(pts[0].x == 70.0);
  CHECK(pts[0].y == style.height - 50.0);
  CHECK(pts[1].x == style.width - 20.0);
  CHECK(pts[1].y == 30.0);
  CHECK(svg.find("fill=\"blue\"") != std::string::npos);
  CHECK(svg.find("fill=\"red\"") != std::string::npos);
  CHECK(render_feature_tsv(data) == "0\t1\tbenign\n1\t2\tmalicious\n");
}

TEST_CASE("feature plot: sidecar line count and re-plot") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SeededRng rng(seed);
    const std::size_t n = 50 + rng.uniform_below(500);
    std::vector<double> values(n);
    Labels y(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = i >= n / 3;  // benign block first, as in many captures
      values[i] = testing::normal(rng) * 100.0 + 3.0 * y[i];
    }
    const PlotStyle style;
    const auto data = make_plot_data("f", values, y, style.max_points);
    const auto tsv = render_feature_tsv(data);
    CHECK(testing::count_lines(tsv) == n);
    const auto drawn = svg_points(render_feature_svg(data, style));
    const auto expected = replot(tsv, n, style);
    REQUIRE(drawn.size() == expected.size());
    for (std::size_t i = 0; i < drawn.size(); ++i) {
      CHECK(drawn[i].x == expected[i].x);
      CHECK(drawn[i].y == expected[i].y);
      CHECK(drawn[i].cls == expected[i].cls);
    }
  }
}

TEST_CASE("feature plot: thinning") {
  const std::size_t n = 1001;
  std::vector<double> values(n);
  Labels y(n, 0);
  for (std::size_t i = 0; i < n; ++i) values[i] = static_cast<double>(i % 7);
  y[500] = 1;
  const auto data = make_plot_data("f", values, y, 100);
  CHECK(data.thinning == 11);  // ceil(1001 / 100)
  CHECK(data.total_rows == n);
  CHECK(data.values.size() == 91);  // rows 0, 11, ..., 990
  CHECK(data.row_index.front() == 0);
  CHECK(data.row_index.back() == 990);
  const auto svg = render_feature_svg(data);
  CHECK(svg.find("data-thinning=\"11\"") != std::string::npos);
  CHECK(svg.find("data-rows=\"1001\"") != std::string::npos);
  const auto full = make_plot_data("f", values, y, 200000);
  CHECK(full.thinning == 1);
  CHECK(full.values.size() == n);
}

TEST_CASE("feature plot: constant feature") {
  const std::vector<double> values(10, 4.0);
  Labels y(10, 0);
  y[9] = 1;
  const auto svg = render_feature_svg(make_plot_data("flat", values, y, 100));
  CHECK(svg.find("class=\"annotation\"") != std::string::npos);
  CHECK(svg.find("constant feature") != std::string::npos);
  CHECK(svg_points(svg).size() == 10);
}

TEST_CASE("importance chart") {
  std::vector<FeatureScore> one{{0, "x", 1.0}};
  const std::string svg = render_importance_svg(one);
  CHECK(count_of(svg, "<rect class=\"bar\"") == 1);
  const PlotStyle style;
  const std::string full_width = "width=\"" + format_fixed_half_up(style.width - 230.0 - 30.0, 2) + "\"";
  CHECK(svg.find(full_width) != std::string::npos);
  CHECK(svg.find("mutual information (bits)") != std::string::npos);

  std::vector<FeatureScore> zeros{{0, "a", 0.0}, {1, "b", 0.0}, {2, "c", 0.0}};
  const std::string zsvg = render_importance_svg(zeros);
  CHECK(count_of(zsvg, "width=\"0.00\"") == 3);
  CHECK(zsvg.find("mutual information (bits)") != std::string::npos);

  std::vector<FeatureScore> many;
  for (std::size_t i = 0; i < 62; ++i) many.push_back({i, "f" + std::to_string(i), 0.01 * static_cast<double>(62 - i)});
  const std::string msvg = render_importance_svg(many);
  CHECK(count_of(msvg, "<rect class=\"bar\"") == 62);
  CHECK(msvg.find("data-features=\"62\"") != std::string::npos);
  CHECK(testing::count_lines(render_importance_tsv(many)) == 62);
  CHECK(render_importance_tsv(one) == "1\tx\t1\n");
  CHECK_THROWS_AS(render_importance_svg(std::vector<FeatureScore>{}), Error);
}

TEST_CASE("emitters write byte-identical files") {
  const auto dir_a = testing::fresh_dir("report-a");
  const auto dir_b = testing::fresh_dir("report-b");
  std::vector<double> values{3, 1, 4, 1, 5, 9, 2, 6};
  Labels y{0, 0, 0, 1, 1, 0, 1, 1};
  const auto data = make_plot_data("pi digits", values, y, 100);
  const std::vector<FeatureScore> ranking{{0, "pi digits", 0.5}};
  const auto a = emit_feature_plot(data, {}, dir_a, sanitize_file_stem("pi digits"));
  const auto b = emit_feature_plot(data, {}, dir_b, sanitize_file_stem("pi digits"));
  emit_importance_chart(ranking, {}, dir_a);
  emit_importance_chart(ranking, {}, dir_b);
  REQUIRE(a.size() == 2);
  CHECK(a[0].filename() == "pi_digits.svg");
  for (const char* name : {"pi_digits.svg", "pi_digits.tsv", "importance.svg", "importance.tsv"}) {
    CHECK(testing::read_file(dir_a / name) == testing::read_file(dir_b / name));
    CHECK_FALSE(testing::read_file(dir_a / name).empty());
  }
  CHECK(sanitize_file_stem("a/b:c") == "a_b_c");
}
