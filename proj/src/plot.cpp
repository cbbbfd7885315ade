#include <algorithm>
#include <cctype>
#include <sstream>

#include "otdp/error.hpp"
#include "otdp/report.hpp"

namespace otdp {
namespace {

std::string xml_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string px(double v) { return format_fixed_half_up(v, 2); }

std::string text_element(double x, double y, std::string_view anchor, int size, std::string_view body,
                         std::string_view extra = {}) {
  std::string out = "<text x=\"" + px(x) + "\" y=\"" + px(y) + "\" text-anchor=\"" + std::string(anchor) +
                    "\" font-family=\"sans-serif\" font-size=\"" + std::to_string(size) + "\"";
  if (!extra.empty()) out += " " + std::string(extra);
  return out + ">" + xml_escape(body) + "</text>\n";
}

std::string line_element(double x1, double y1, double x2, double y2, std::string_view stroke = "black",
                         std::string_view extra = {}) {
  std::string out = "<line x1=\"" + px(x1) + "\" y1=\"" + px(y1) + "\" x2=\"" + px(x2) + "\" y2=\"" + px(y2) +
                    "\" stroke=\"" + std::string(stroke) + "\"";
  if (!extra.empty()) out += " " + std::string(extra);
  return out + "/>\n";
}

std::string svg_open(int width, int height, std::string_view attrs) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(width) + "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " +
         std::to_string(width) + " " + std::to_string(height) + "\" " + std::string(attrs) +
         ">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

std::string_view class_name(std::uint8_t c) { return c ? "malicious" : "benign"; }

}  // namespace

FeaturePlotData make_plot_data(std::string feature_name, std::span<const double> values,
                               std::span<const std::uint8_t> classes, std::size_t max_points) {
  if (values.size() != classes.size()) throw Error(ErrorKind::invalid_argument, "values and classes differ in length");
  FeaturePlotData data;
  data.feature_name = std::move(feature_name);
  data.total_rows = values.size();
  const std::size_t cap = std::max<std::size_t>(max_points, 1);
  data.thinning = values.empty() ? 1 : (values.size() + cap - 1) / cap;
  for (std::size_t i = 0; i < values.size(); i += data.thinning) {
    data.row_index.push_back(i);
    data.values.push_back(values[i]);
    data.classes.push_back(classes[i]);
  }
  return data;
}

PlotFrame PlotFrame::for_data(const FeaturePlotData& data, const PlotStyle& style) {
  PlotFrame f;
  f.width = style.width - f.left - 20.0;
  f.height = style.height - f.top - 50.0;
  f.x_max = data.total_rows > 1 ? static_cast<double>(data.total_rows - 1) : 0.0;
  if (!data.values.empty()) {
    const auto [lo, hi] = std::minmax_element(data.values.begin(), data.values.end());
    f.y_min = *lo;
    f.y_max = *hi;
  }
  return f;
}

double PlotFrame::x(double row) const { return left + (x_max > 0.0 ? row / x_max : 0.5) * width; }

double PlotFrame::y(double value) const {
  if (flat()) return top + height / 2.0;
  return top + height - (value - y_min) / (y_max - y_min) * height;
}

std::string render_feature_svg(const FeaturePlotData& data, const PlotStyle& style) {
  const PlotFrame f = PlotFrame::for_data(data, style);
  std::string out = svg_open(style.width, style.height,
                             "data-rows=\"" + std::to_string(data.total_rows) + "\" data-thinning=\"" +
                                 std::to_string(data.thinning) + "\"");
  out += text_element(style.width / 2.0, 18.0, "middle", 14, data.feature_name);
  const double bottom = f.top + f.height;
  const double right = f.left + f.width;
  out += line_element(f.left, bottom, right, bottom);
  out += line_element(f.left, f.top, f.left, bottom);
  out += text_element(f.left, bottom + 16.0, "middle", 11, "0");
  out += text_element(right, bottom + 16.0, "middle", 11, format_shortest(f.x_max));
  out += text_element(f.left + f.width / 2.0, bottom + 34.0, "middle", 12, "row index");
  if (f.flat()) {
    out += text_element(f.left - 6.0, f.y(f.y_min) + 4.0, "end", 11, format_shortest(f.y_min));
    out += line_element(f.left, f.y(f.y_min), right, f.y(f.y_min), "gray", "stroke-dasharray=\"4 3\"");
    out += text_element(f.left + f.width / 2.0, f.top + 14.0, "middle", 12,
                        "constant feature: every value is " + format_shortest(f.y_min), "class=\"annotation\"");
  } else {
    out += text_element(f.left - 6.0, bottom + 4.0, "end", 11, format_shortest(f.y_min));
    out += text_element(f.left - 6.0, f.top + 4.0, "end", 11, format_shortest(f.y_max));
  }
  for (std::uint8_t cls : {std::uint8_t{0}, std::uint8_t{1}}) {
    const std::string& color = cls ? style.malicious_color : style.benign_color;
    out += "<g class=\"" + std::string(class_name(cls)) + "\" fill=\"" + xml_escape(color) + "\">\n";
    for (std::size_t i = 0; i < data.values.size(); ++i) {
      if (data.classes[i] != cls) continue;
      out += "<circle cx=\"" + px(f.x(static_cast<double>(data.row_index[i]))) + "\" cy=\"" + px(f.y(data.values[i])) +
             "\" r=\"1.5\"/>\n";
    }
    out += "</g>\n";
  }
  out += "<circle cx=\"" + px(right - 130.0) + "\" cy=\"12\" r=\"4\" fill=\"" + xml_escape(style.benign_color) + "\"/>\n";
  out += text_element(right - 122.0, 16.0, "start", 11, "benign");
  out += "<circle cx=\"" + px(right - 65.0) + "\" cy=\"12\" r=\"4\" fill=\"" + xml_escape(style.malicious_color) +
         "\"/>\n";
  out += text_element(right - 57.0, 16.0, "start", 11, "malicious");
  return out + "</svg>\n";
}

std::string render_feature_tsv(const FeaturePlotData& data) {
  std::string out;
  for (std::size_t i = 0; i < data.values.size(); ++i) {
    out += std::to_string(data.row_index[i]) + "\t" + format_shortest(data.values[i]) + "\t" +
           std::string(class_name(data.classes[i])) + "\n";
  }
  return out;
}

std::string render_importance_svg(std::span<const FeatureScore> ranking, const PlotStyle& style) {
  if (ranking.empty()) throw Error(ErrorKind::invalid_argument, "importance chart needs at least one feature");
  constexpr double left = 230.0;
  constexpr double top = 40.0;
  constexpr double row = 18.0;
  const double plot_width = style.width - left - 30.0;
  const double plot_height = row * static_cast<double>(ranking.size());
  const int height = static_cast<int>(top + plot_height + 50.0);
  double axis_max = 0.0;
  for (const auto& s : ranking) axis_max = std::max(axis_max, s.mi_bits);
  if (!(axis_max > 0.0)) axis_max = 1.0;

  std::string out = svg_open(style.width, height, "data-features=\"" + std::to_string(ranking.size()) + "\"");
  out += text_element(style.width / 2.0, 20.0, "middle", 14, "Feature importance (mutual information)");
  const double bottom = top + plot_height;
  out += line_element(left, top, left, bottom);
  out += line_element(left, bottom, left + plot_width, bottom);
  for (int t = 0; t <= 4; ++t) {
    const double frac = t / 4.0;
    const double x = left + frac * plot_width;
    out += line_element(x, bottom, x, bottom + 4.0);
    out += text_element(x, bottom + 16.0, "middle", 11, format_fixed_half_up(axis_max * frac, 3));
  }
  out += text_element(left + plot_width / 2.0, bottom + 36.0, "middle", 12, "mutual information (bits)");
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    const double y = top + row * static_cast<double>(i);
    std::string name = ranking[i].feature_name;
    if (name.size() > 36) name = name.substr(0, 33) + "...";
    out += text_element(left - 6.0, y + 13.0, "end", 11, name);
    out += "<rect class=\"bar\" x=\"" + px(left) + "\" y=\"" + px(y + 3.0) + "\" width=\"" +
           px(std::max(0.0, ranking[i].mi_bits) / axis_max * plot_width) + "\" height=\"" + px(row - 6.0) +
           "\" fill=\"steelblue\"/>\n";
  }
  return out + "</svg>\n";
}

std::string render_importance_tsv(std::span<const FeatureScore> ranking) {
  std::string out;
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    out += std::to_string(i + 1) + "\t" + ranking[i].feature_name + "\t" + format_shortest(ranking[i].mi_bits) + "\n";
  }
  return out;
}

std::string sanitize_file_stem(std::string_view name) {
  std::string out;
  for (char c : name) {
    const auto u = static_cast<unsigned char>(c);
    out.push_back(std::isalnum(u) || c == '-' || c == '_' || c == '.' ? c : '_');
    if (out.size() == 60) break;
  }
  if (out.empty() || out.front() == '.') out.insert(out.begin(), 'f');
  return out;
}

std::vector<std::filesystem::path> emit_feature_plot(const FeaturePlotData& data, const PlotStyle& style,
                                                     const std::filesystem::path& out_dir, std::string_view stem) {
  std::filesystem::create_directories(out_dir);
  const auto svg = out_dir / (std::string(stem) + ".svg");
  const auto tsv = out_dir / (std::string(stem) + ".tsv");
  write_text_file(svg, render_feature_svg(data, style));
  write_text_file(tsv, render_feature_tsv(data));
  return {svg, tsv};
}

std::vector<std::filesystem::path> emit_importance_chart(std::span<const FeatureScore> ranking,
                                                         const PlotStyle& style, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const auto svg = out_dir / "importance.svg";
  const auto tsv = out_dir / "importance.tsv";
  write_text_file(svg, render_importance_svg(ranking, style));
  write_text_file(tsv, render_importance_tsv(ranking));
  return {svg, tsv};
}

}  // namespace otdp
