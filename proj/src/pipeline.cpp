#include "otdp/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "otdp/complexity.hpp"
#include "otdp/preprocess.hpp"

namespace otdp {
namespace {

std::string_view format_name(InputFormat format) {
  switch (format) {
    case InputFormat::automatic: return "auto";
    case InputFormat::csv: return "csv";
    case InputFormat::arff: return "arff";
  }
  return "auto";
}

std::string delimiter_name(char d) {
  switch (d) {
    case 0: return "auto";
    case '\t': return "tab";
    default: return std::string(1, d);
  }
}

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorKind::invalid_argument, message);
}

}  // namespace

void validate(const RunConfig& c) {
  require(!c.input_path.empty(), "an input file is required");
  require(c.k >= 4, "--k must be at least 4");
  require(c.m >= 1, "--m must be at least 1");
  require(c.bins >= 2, "--bins must be at least 2");
  require(c.cardinality_cap >= 1, "--cap must be at least 1");
  require(c.plot.max_points >= 1, "--max-plot-points must be at least 1");
  require(c.max_cells >= 2, "--max-cells must be at least 2");
  require(!c.benign_aliases.empty(), "the benign alias list must not be empty");
}

nlohmann::json config_to_json(const RunConfig& c) {
  nlohmann::json j = {
      {"input", c.input_path.generic_string()},
      {"label", c.label_column ? nlohmann::json(*c.label_column) : nlohmann::json(nullptr)},
      {"k", c.k},
      {"m", c.m},
      {"bins", c.bins},
      {"binning", std::string(to_string(c.binning))},
      {"seed", c.seed},
      {"cap", c.cardinality_cap},
      {"out", c.out_dir.generic_string()},
      {"format", std::string(format_name(c.format))},
      {"delimiter", delimiter_name(c.delimiter)},
      {"header", c.has_header},
      {"label_names", c.label_names},
      {"benign", c.benign_aliases},
      {"max_cells", c.max_cells},
      {"max_plot_points", c.plot.max_points},
      {"skip_sampling", c.skip_sampling},
      {"name", c.dataset_name ? nlohmann::json(*c.dataset_name) : nlohmann::json(nullptr)},
      {"benign_color", c.plot.benign_color},
      {"malicious_color", c.plot.malicious_color},
      {"config_file", c.config_file ? nlohmann::json(*c.config_file) : nlohmann::json(nullptr)},
  };
  return j;
}

Analysis analyze(const RunConfig& config) {
  validate(config);
  LoadOptions load;
  load.format = config.format;
  load.delimiter = config.delimiter;
  load.has_header = config.has_header;
  load.max_cells = config.max_cells;
  RawTable table = load_table(config.input_path, load);

  Analysis out;
  AnalysisBundle& b = out.bundle;
  b.dataset_name = config.dataset_name.value_or(config.input_path.stem().string());
  b.source_file = config.input_path.filename().string();
  b.stats = {table.n_rows(), table.n_cols() - 1, std::string(to_string(table.format()))};
  b.config = config_to_json(config);

  SchemaOptions schema_options;
  schema_options.label_hint = config.label_column;
  schema_options.label_names = config.label_names;
  schema_options.benign_aliases = config.benign_aliases;
  const Schema schema = infer_schema(table, schema_options);
  const Readiness readiness = check_ml_ready(table, schema.label);
  if (!readiness.ready) {
    // A label column with only one class is reported separately from other readiness failures.
    const bool class_only = std::all_of(readiness.reasons.begin(), readiness.reasons.end(), [](const std::string& r) {
      return r == "single-class labels" || r == "no benign label values" || r == "no malicious label values";
    });
    if (class_only) {
      throw Error(ErrorKind::single_class, "labels contain a single class").with_details(readiness.reasons);
    }
    throw Error(ErrorKind::not_ml_ready, "input is not ML-ready").with_details(readiness.reasons);
  }
  b.label_column = table.column(schema.label.column_index).name;

  CleanResult cleaned = clean(std::move(table), schema.label);
  b.dropped_rows = cleaned.dropped_rows;
  b.dropped_columns = cleaned.dropped_columns;
  const Labels y = binarize_labels(cleaned.table, cleaned.label);
  b.imbalance = imbalance_ratio(y);

  std::vector<std::size_t> rows;
  if (config.skip_sampling) {
    rows.resize(y.size());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    b.sampling = "none (full file)";
  } else {
    rows = stratified_sample(y, {config.k, config.seed});
  }
  Labels y_rows;
  y_rows.reserve(rows.size());
  for (std::size_t r : rows) y_rows.push_back(y[r]);

  LabeledMatrix data = one_hot_encode(cleaned.table, cleaned.label, rows, y_rows, config.cardinality_cap);
  data.provenance = {cleaned.table.source_name(), config.seed, config.k, cleaned.dropped_rows};
  b.warnings = data.warnings;

  FeatureSelectionConfig selection_config{config.m, config.bins, config.binning};
  b.ranking = rank_features(data, selection_config);
  const auto selection = select_top_m(b.ranking, config.m);

  ComplexityConfig complexity_config;
  complexity_config.seed = config.seed;
  try {
    b.complexity = complexity_report(data, selection, complexity_config);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::too_large) throw;
    throw Error(ErrorKind::invalid_argument,
                std::string(e.what()) + "; drop --skip-sampling or choose --k <= " +
                    std::to_string(complexity_config.max_rows));
  }

  for (std::size_t i = 0; i < b.ranking.size() && i < kPlotFeatureCount; ++i) {
    const std::size_t f = b.ranking[i].feature_index;
    b.plot_features.push_back(f);
    const std::vector<double> values = encode_feature(cleaned.table, data.sources[f]);
    FeaturePlotData plot = make_plot_data(data.feature_names[f], values, y, config.plot.max_points);
    // x axis: row position in the input file, before cleaning
    for (auto& r : plot.row_index) r = cleaned.kept_rows[r];
    plot.total_rows = b.stats.n_points;
    out.plots.push_back({f, std::move(plot)});
  }
  validate_bundle(b);
  return out;
}

namespace {

// Outputs of an earlier run in the same directory would otherwise mix with
// this run's (plot names depend on the ranking). Other files are left alone.
void remove_previous_outputs(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    const auto ext = entry.path().extension();
    const bool plot = name.rfind("feature_", 0) == 0 && (ext == ".svg" || ext == ".tsv");
    if (plot || name == "error.json" || name == "report.json" || name == "stats.txt" || name == "importance.svg" ||
        name == "importance.tsv") {
      std::filesystem::remove(entry.path());
    }
  }
}

}  // namespace

std::vector<std::filesystem::path> write_outputs(const Analysis& analysis, const RunConfig& config) {
  const auto& dir = config.out_dir;
  remove_previous_outputs(dir);
  std::vector<std::filesystem::path> written;
  written.push_back(dir / "report.json");
  write_text_file(written.back(), emit_stats_json(analysis.bundle));
  written.push_back(dir / "stats.txt");
  write_text_file(written.back(), stats_header() + "\n" + emit_stats_row(analysis.bundle) + "\n");
  for (auto& p : emit_importance_chart(analysis.bundle.ranking, config.plot, dir)) written.push_back(p);
  for (std::size_t i = 0; i < analysis.plots.size(); ++i) {
    const auto& series = analysis.plots[i];
    char prefix[16];
    std::snprintf(prefix, sizeof(prefix), "feature_%02zu_", i + 1);
    const std::string stem = prefix + sanitize_file_stem(series.data.feature_name);
    for (auto& p : emit_feature_plot(series.data, config.plot, dir, stem)) written.push_back(p);
  }
  return written;
}

RowCount count_rows_only(const RunConfig& config, const std::string& reason) {
  std::ifstream in(config.input_path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + config.input_path.string());
  std::string head(4096, '\0');
  in.read(head.data(), static_cast<std::streamsize>(head.size()));
  head.resize(static_cast<std::size_t>(in.gcount()));
  InputFormat format = config.format;
  if (format == InputFormat::automatic) format = detect_format(config.input_path, head);
  in.clear();
  in.seekg(0);
  RowCount count;
  count.reason = reason;
  count.n_points = format == InputFormat::arff ? count_arff_rows(in) : count_csv_rows(in, config.has_header);
  return count;
}

std::filesystem::path write_row_count_report(const RowCount& count, const RunConfig& config) {
  remove_previous_outputs(config.out_dir);
  const nlohmann::json j = {{"dataset_name", config.dataset_name.value_or(config.input_path.stem().string())},
                            {"source_file", config.input_path.filename().string()},
                            {"row_count_only", true},
                            {"stats", {{"n_points", count.n_points}}},
                            {"reason", count.reason},
                            {"config", config_to_json(config)}};
  const auto path = config.out_dir / "report.json";
  write_text_file(path, j.dump(2, ' ', false, nlohmann::json::error_handler_t::replace) + "\n");
  return path;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::no_label:
    case ErrorKind::not_ml_ready:
    case ErrorKind::empty_after_clean:
    case ErrorKind::no_features:
    case ErrorKind::too_small:
      return kExitNotMlReady;
    case ErrorKind::single_class:
    case ErrorKind::insufficient_class:
      return kExitSingleClass;
    case ErrorKind::unknown_attack:
    case ErrorKind::unknown_dataset:
      return kExitUnknownName;
    case ErrorKind::parse:
    case ErrorKind::empty_input:
    case ErrorKind::unsupported_format:
      return kExitUnsupportedInput;
    case ErrorKind::too_large:
      return kExitRowCountOnly;
    case ErrorKind::invalid_argument:
    case ErrorKind::io:
    case ErrorKind::degenerate:
    case ErrorKind::catalog_corrupt:
      return kExitFailure;
  }
  return kExitFailure;
}

nlohmann::json error_to_json(const Error& error) {
  return {{"error",
           {{"kind", std::string(to_string(error.kind()))},
            {"message", error.what()},
            {"details", error.details()},
            {"exit_code", exit_code_for(error.kind())}}}};
}

}  // namespace otdp
