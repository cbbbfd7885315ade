#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "otdp/error.hpp"
#include "otdp/features.hpp"
#include "otdp/ingest.hpp"
#include "otdp/report.hpp"

namespace otdp {

struct RunConfig {
  std::filesystem::path input_path;
  std::optional<std::string> label_column;
  std::size_t k = 1000;
  std::size_t m = 10;
  std::size_t bins = 10;
  Binning binning = Binning::equal_frequency;
  std::uint64_t seed = 42;
  std::size_t cardinality_cap = kDefaultCardinalityCap;
  std::filesystem::path out_dir = "otdp-out";

  // input overrides
  InputFormat format = InputFormat::automatic;
  char delimiter = 0;  // 0 = sniff
  bool has_header = true;
  std::vector<std::string> label_names = default_label_names();
  std::vector<std::string> benign_aliases = default_benign_aliases();
  std::size_t max_cells = kDefaultMaxCells;

  bool skip_sampling = false;
  std::optional<std::string> dataset_name;  // defaults to the file stem
  PlotStyle plot;
  std::optional<std::string> config_file;  // recorded only
};

// Throws Error(invalid_argument) when a value is below its minimum
// (k >= 4, m >= 1, bins >= 2, cardinality_cap >= 1, max plot points >= 1).
void validate(const RunConfig& config);
nlohmann::json config_to_json(const RunConfig& config);

struct PlotSeries {
  std::size_t feature_index = 0;
  FeaturePlotData data;
};

struct Analysis {
  AnalysisBundle bundle;
  std::vector<PlotSeries> plots;
};

// parse -> schema -> readiness -> clean -> binarize -> IR -> sample ->
// one-hot -> rank -> top-m -> complexity. Nothing is written.
Analysis analyze(const RunConfig& config);

// Writes report.json, stats.txt, importance.{svg,tsv} and
// feature_0N_<name>.{svg,tsv} into config.out_dir; returns the written paths.
std::vector<std::filesystem::path> write_outputs(const Analysis& analysis, const RunConfig& config);

struct RowCount {
  std::size_t n_points = 0;
  std::string reason;
};

// Streaming record count for files over the in-memory cell limit.
RowCount count_rows_only(const RunConfig& config, const std::string& reason);
std::filesystem::path write_row_count_report(const RowCount& count, const RunConfig& config);

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitNotMlReady = 2,
  kExitSingleClass = 3,
  kExitUnknownName = 4,
  kExitUnsupportedInput = 5,
  kExitRowCountOnly = 6,
};

int exit_code_for(ErrorKind kind);
nlohmann::json error_to_json(const Error& error);

}  // namespace otdp
