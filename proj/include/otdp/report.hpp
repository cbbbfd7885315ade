#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "otdp/complexity.hpp"
#include "otdp/features.hpp"
#include "otdp/preprocess.hpp"

namespace otdp {

// Rounds half away from zero at `decimals` places. Works on the shortest
// round-trip decimal form of `value`, so 2.675 becomes "2.68" even though the
// nearest double is slightly below it. Locale-independent.
std::string format_fixed_half_up(double value, int decimals);

// Shortest text that parses back to the same double.
std::string format_shortest(double value);

struct DatasetShape {
  std::size_t n_points = 0;    // data rows in the input file
  std::size_t n_features = 0;  // input columns minus the label
  std::string file_format;

  bool operator==(const DatasetShape&) const = default;
};

inline constexpr std::size_t kPlotFeatureCount = 5;

struct AnalysisBundle {
  std::string dataset_name;
  std::string source_file;
  DatasetShape stats;
  ImbalanceStat imbalance;  // whole cleaned file
  ComplexityReport complexity;
  std::vector<FeatureScore> ranking;
  std::vector<std::size_t> plot_features;  // feature indices, best first
  std::string label_column;
  std::size_t dropped_rows = 0;
  std::vector<std::string> dropped_columns;
  std::vector<std::string> warnings;
  std::string sampling = "stratified, without replacement";
  nlohmann::json config = nlohmann::json::object();  // echoed run configuration

  bool operator==(const AnalysisBundle&) const = default;
};

// Throws Error(invalid_argument) when plot_features is not a subset of the
// ranking or lists more than five features.
void validate_bundle(const AnalysisBundle& bundle);

std::string stats_header();
// "name | file | format | points | features | IR | CS" with IR to 2 and CS to 3 places.
std::string emit_stats_row(const AnalysisBundle& bundle);

nlohmann::json to_json(const AnalysisBundle& bundle);
AnalysisBundle bundle_from_json(const nlohmann::json& j);
std::string emit_stats_json(const AnalysisBundle& bundle);

struct PlotStyle {
  std::string benign_color = "blue";
  std::string malicious_color = "red";
  std::size_t max_points = 200'000;
  int width = 900;
  int height = 420;
};

// Values of one feature over the analysed file, possibly thinned.
struct FeaturePlotData {
  std::string feature_name;
  std::size_t total_rows = 0;  // rows of the analysed file; the x axis spans 0 .. total_rows-1
  std::vector<std::size_t> row_index;
  std::vector<double> values;
  Labels classes;
  std::size_t thinning = 1;  // every thinning-th row is kept
};

// Keeps every ceil(n / max_points)-th row starting at row 0.
FeaturePlotData make_plot_data(std::string feature_name, std::span<const double> values,
                               std::span<const std::uint8_t> classes, std::size_t max_points);

// Maps data coordinates to SVG pixel coordinates.
struct PlotFrame {
  double left = 70.0;
  double top = 30.0;
  double width = 0.0;
  double height = 0.0;
  double x_max = 0.0;  // largest row index
  double y_min = 0.0;
  double y_max = 0.0;

  static PlotFrame for_data(const FeaturePlotData& data, const PlotStyle& style);
  bool flat() const { return !(y_max > y_min); }
  double x(double row) const;
  double y(double value) const;
};

std::string render_feature_svg(const FeaturePlotData& data, const PlotStyle& style = {});
// One "row_index<TAB>value<TAB>benign|malicious" line per plotted point, no header.
std::string render_feature_tsv(const FeaturePlotData& data);

std::string render_importance_svg(std::span<const FeatureScore> ranking, const PlotStyle& style = {});
// One "rank<TAB>feature<TAB>mi_bits" line per feature, no header.
std::string render_importance_tsv(std::span<const FeatureScore> ranking);

// Writes <stem>.svg and <stem>.tsv into out_dir; returns both paths.
std::vector<std::filesystem::path> emit_feature_plot(const FeaturePlotData& data, const PlotStyle& style,
                                                     const std::filesystem::path& out_dir, std::string_view stem);
std::vector<std::filesystem::path> emit_importance_chart(std::span<const FeatureScore> ranking,
                                                         const PlotStyle& style, const std::filesystem::path& out_dir);

// File-name friendly form of a feature name.
std::string sanitize_file_stem(std::string_view name);

void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace otdp
