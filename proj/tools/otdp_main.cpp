// otdp: characterise labelled OT network-traffic datasets and browse the
// dataset catalogue.
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "otdp/catalog.hpp"
#include "otdp/complexity.hpp"
#include "otdp/pipeline.hpp"
#include "otdp/report.hpp"

namespace {

using nlohmann::json;
using otdp::Error;
using otdp::ErrorKind;

std::string dump(const json& j) { return j.dump(2, ' ', false, json::error_handler_t::replace); }

int report_error(const Error& e, const std::filesystem::path* out_dir = nullptr) {
  const json j = otdp::error_to_json(e);
  std::cerr << j.dump(-1, ' ', false, json::error_handler_t::replace) << "\n";
  if (out_dir != nullptr) {
    std::error_code ec;
    std::filesystem::create_directories(*out_dir, ec);
    if (!ec) {
      try {
        otdp::write_text_file(*out_dir / "error.json", dump(j) + "\n");
      } catch (const Error&) {
        // the stderr copy is enough
      }
    }
  }
  return otdp::exit_code_for(e.kind());
}

char parse_delimiter(const std::string& text) {
  if (text == "auto") return 0;
  if (text == "tab" || text == "\\t" || text == "\t") return '\t';
  if (text == "," || text == "comma") return ',';
  if (text == ";" || text == "semicolon") return ';';
  throw Error(ErrorKind::invalid_argument, "--delimiter must be auto, ',', ';' or tab");
}

// Values from a TOML/INI file fill the analyze options that were not given
// on the command line. Keys may sit at top level or under [analyze].
void apply_config_file(CLI::App& sub, const std::string& path) {
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigTOML().from_file(path);
  } catch (const CLI::Error& e) {
    throw Error(ErrorKind::io, "cannot read config file '" + path + "': " + e.what());
  }
  for (const auto& item : items) {
    if (item.name == "++" || item.name == "--") continue;  // section markers
    if (!item.parents.empty() && !(item.parents.size() == 1 && item.parents[0] == sub.get_name())) {
      throw Error(ErrorKind::invalid_argument, "config file: unexpected section for '" + item.fullname() + "'");
    }
    CLI::Option* opt = sub.get_option_no_throw("--" + item.name);
    if (opt == nullptr) opt = sub.get_option_no_throw(item.name);
    if (opt == nullptr || item.name == "config") {
      throw Error(ErrorKind::invalid_argument, "config file: unknown option '" + item.name + "'");
    }
    if (opt->count() > 0) continue;  // the command line wins
    try {
      opt->add_result(item.inputs);
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw Error(ErrorKind::invalid_argument, "config file: bad value for '" + item.name + "': " + e.what());
    }
  }
}

otdp::InputFormat parse_format(const std::string& text) {
  if (text == "auto") return otdp::InputFormat::automatic;
  if (text == "csv") return otdp::InputFormat::csv;
  if (text == "arff") return otdp::InputFormat::arff;
  throw Error(ErrorKind::invalid_argument, "--format must be auto, csv or arff");
}

// ---- catalogue output ----

json record_to_json(const otdp::DatasetRecord& r) {
  json attacks = json::array();
  for (auto name : r.attack_names()) attacks.push_back(std::string(name));
  json steps = json::array();
  for (auto step : otdp::kCkcSteps) {
    if (r.has_step(step)) steps.push_back(std::string(otdp::to_string(step)));
  }
  json j = {{"id", r.id},
            {"name", r.name},
            {"year", r.year},
            {"scenario", r.scenario},
            {"attack_type_count", r.attack_type_count},
            {"attacks", attacks},
            {"ckc_steps", steps},
            {"reference", r.reference},
            {"ml_ready", r.ml_ready()},
            {"notes", r.notes}};
  j["ckc_table_year"] = r.ckc_table_year ? json(*r.ckc_table_year) : json(nullptr);
  j["url"] = r.url ? json(*r.url) : json(nullptr);
  if (r.stats) {
    const auto& s = *r.stats;
    j["stats"] = {{"file", s.file},           {"format", s.format}, {"n_points", s.n_points},
                  {"n_features", s.n_features}, {"ir", s.ir},         {"avg_cs", s.avg_cs},
                  {"label_column", s.label_column}};
  } else {
    j["stats"] = nullptr;
  }
  return j;
}

void print_record_list(const std::vector<otdp::DatasetRecord>& records, bool as_json) {
  if (as_json) {
    json arr = json::array();
    for (const auto& r : records) arr.push_back(record_to_json(r));
    std::cout << dump(arr) << "\n";
    return;
  }
  for (const auto& r : records) {
    std::cout << r.id << " | " << r.name << " | " << r.year << " | " << r.scenario << " | "
              << (r.ml_ready() ? "ML-ready" : "-") << "\n";
  }
}

void print_record(const otdp::DatasetRecord& r) {
  std::cout << "id: " << r.id << "\nname: " << r.name << "\nyear: " << r.year;
  if (r.ckc_table_year) std::cout << " (kill-chain tables: " << *r.ckc_table_year << ")";
  std::cout << "\nscenario: " << r.scenario << "\nattack types: " << r.attack_type_count << "\n";
  for (auto step : otdp::kCkcSteps) {
    std::string line;
    for (std::size_t a : r.attacks) {
      if (otdp::attack_subheadings()[a].step != step) continue;
      if (!line.empty()) line += ", ";
      line += otdp::attack_subheadings()[a].name;
    }
    if (!line.empty()) std::cout << "  " << otdp::to_string(step) << ": " << line << "\n";
  }
  if (r.url) std::cout << "url: " << *r.url << "\n";
  std::cout << "reference: " << r.reference << "\nml_ready: " << (r.ml_ready() ? "yes" : "no") << "\n";
  if (r.stats) {
    const auto& s = *r.stats;
    std::cout << "file: " << s.file << "\nformat: " << s.format << "\nn_points: " << s.n_points
              << "\nn_features: " << s.n_features << "\nir: " << otdp::format_fixed_half_up(s.ir, 2)
              << "\navg_cs: " << otdp::format_fixed_half_up(s.avg_cs, 3) << "\nlabel_column: " << s.label_column
              << "\n";
  }
  for (const auto& note : r.notes) std::cout << "note: " << note << "\n";
}

void print_summary(const otdp::CatalogSummary& s, bool as_json) {
  if (as_json) {
    std::cout << dump({{"n_records", s.n_records},
                       {"n_ml_ready", s.n_ml_ready},
                       {"avg_ir", s.avg_ir},
                       {"avg_cs", s.avg_cs},
                       {"cs_histogram", s.cs_histogram},
                       {"ir_above_30", s.ir_above_30}})
              << "\n";
    return;
  }
  std::cout << "records: " << s.n_records << "\nML-ready: " << s.n_ml_ready
            << "\naverage IR: " << otdp::format_fixed_half_up(s.avg_ir, 2)
            << "\naverage CS: " << otdp::format_fixed_half_up(s.avg_cs, 4) << "\nIR above 30: " << s.ir_above_30
            << "\nCS histogram [0,.1) [.1,.2) [.2,.3) [.3,.4) [.4,.5] (.5,1]:";
  for (auto c : s.cs_histogram) std::cout << " " << c;
  std::cout << "\n";
}

void print_measures(bool as_json) {
  if (as_json) {
    json arr = json::array();
    for (auto id : otdp::kAllMeasures) {
      const auto& m = otdp::measure_info(id);
      arr.push_back({{"id", std::string(m.name)},
                     {"family", std::string(otdp::to_string(m.family))},
                     {"title", std::string(m.title)},
                     {"formula", std::string(m.formula)},
                     {"raw_range", std::string(m.raw_range)},
                     {"normalization", std::string(m.normalization)},
                     {"skipped_when", std::string(m.skipped_when)}});
    }
    std::cout << dump(arr) << "\n";
    return;
  }
  for (auto id : otdp::kAllMeasures) {
    const auto& m = otdp::measure_info(id);
    std::cout << m.name << " [" << otdp::to_string(m.family) << "] " << m.title << "\n"
              << "    " << m.formula << "\n"
              << "    raw range " << m.raw_range << "; normalized = " << m.normalization
              << "; skipped when: " << m.skipped_when << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Characterise labelled OT/ICS network-traffic datasets: imbalance, classification complexity, "
               "feature importance and a catalogue of public datasets mapped to the Cyber Kill Chain."};
  app.require_subcommand(1);
  std::string catalog_path;
  app.add_option("--catalog", catalog_path, "Catalogue file to use instead of the built-in one")
      ->envname("OTDP_CATALOG");

  // analyze
  otdp::RunConfig run;
  std::string input;
  std::string label;
  std::string delimiter = "auto";
  std::string format = "auto";
  std::string binning = "equal-frequency";
  std::string out_dir = run.out_dir.string();
  std::string name;
  bool no_header = false;
  auto* analyze = app.add_subcommand("analyze", "Run the full analysis on a CSV or ARFF file");
  std::string config_file;
  analyze->add_option("--config", config_file, "TOML/INI file with option values (command-line flags take precedence)");
  analyze->add_option("input", input, "Dataset file (.csv or .arff)");
  analyze->add_option("--label", label, "Label column name (default: detected from a list of common names)");
  analyze->add_option("-k,--k", run.k, "Rows in the stratified sample used for complexity")->capture_default_str();
  analyze->add_option("-m,--m", run.m, "Top features (by mutual information) used for complexity")
      ->capture_default_str();
  analyze->add_option("--bins", run.bins, "Bins for discretising continuous features")->capture_default_str();
  analyze->add_option("--binning", binning, "equal-frequency or equal-width")->capture_default_str();
  analyze->add_option("--seed", run.seed, "Seed for sampling and synthetic points")->capture_default_str();
  analyze->add_option("--cap", run.cardinality_cap,
                      "Categorical columns with more distinct values are dropped instead of one-hot encoded")
      ->capture_default_str();
  analyze->add_option("-o,--out", out_dir, "Output directory")->capture_default_str();
  analyze->add_option("--delimiter", delimiter, "CSV delimiter: auto, ',', ';' or tab")->capture_default_str();
  analyze->add_flag("--no-header", no_header, "CSV has no header row");
  analyze->add_option("--format", format, "Input format: auto, csv or arff")->capture_default_str();
  analyze->add_option("--benign", run.benign_aliases, "Label values meaning benign (comma separated)")
      ->delimiter(',')
      ->capture_default_str();
  analyze->add_option("--label-names", run.label_names, "Column names tried when detecting the label")
      ->delimiter(',')
      ->capture_default_str();
  analyze->add_option("--max-cells", run.max_cells,
                      "Largest table held in memory; bigger inputs only get a row count (exit 6)")
      ->capture_default_str();
  analyze->add_option("--max-plot-points", run.plot.max_points, "Plots thin rows uniformly above this count")
      ->capture_default_str();
  analyze->add_flag("--skip-sampling", run.skip_sampling, "Compute complexity on every row (small inputs only)");
  analyze->add_option("--name", name, "Dataset name in reports (default: file stem)");
  analyze->add_option("--benign-color", run.plot.benign_color, "Plot colour for benign rows")->capture_default_str();
  analyze->add_option("--malicious-color", run.plot.malicious_color, "Plot colour for malicious rows")
      ->capture_default_str();

  // catalog
  auto* catalog = app.add_subcommand("catalog", "Browse the dataset catalogue");
  catalog->require_subcommand(1);
  bool extended = false;
  catalog->add_flag("--extended", extended, "Accept catalogues with more or fewer records than the built-in one");
  bool list_ml = false;
  bool list_json = false;
  auto* list = catalog->add_subcommand("list", "List every dataset");
  list->add_flag("--ml-ready", list_ml, "Only datasets with published statistics");
  list->add_flag("--json", list_json, "JSON output");
  std::string show_name;
  bool show_json = false;
  auto* show = catalog->add_subcommand("show", "Show one dataset by name or id");
  show->add_option("dataset", show_name, "Dataset name or id")->required();
  show->add_flag("--json", show_json, "JSON output");
  otdp::DatasetFilter filter;
  std::string step_text;
  bool query_json = false;
  auto* query = catalog->add_subcommand("query", "Filter datasets; all given clauses must hold");
  query->add_option("--attack", filter.attack, "Attack subheading, e.g. Ransomware or \"DoS/DDoS\"");
  query->add_option("--step", step_text, "Kill-chain step, e.g. Reconnaissance");
  query->add_option("--year-from", filter.year_from, "Earliest year");
  query->add_option("--year-to", filter.year_to, "Latest year");
  query->add_option("--scenario", filter.scenario, "Case-insensitive substring of the scenario");
  query->add_flag("--ml-ready", filter.ml_ready_only, "Only datasets with published statistics");
  query->add_flag("--json", query_json, "JSON output");
  bool summary_json = false;
  auto* summary = catalog->add_subcommand("summary", "Averages and histograms over the ML-ready datasets");
  summary->add_flag("--json", summary_json, "JSON output");

  bool measures_json = false;
  auto* measures = app.add_subcommand("measures", "Describe the 22 complexity measures");
  measures->add_flag("--json", measures_json, "JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : otdp::kExitFailure;
  }

  if (*measures) {
    print_measures(measures_json);
    return otdp::kExitOk;
  }

  if (*analyze) {
    try {
      if (!config_file.empty()) apply_config_file(*analyze, config_file);
      if (input.empty()) throw Error(ErrorKind::invalid_argument, "analyze needs an input file");
    } catch (const Error& e) {
      return report_error(e);
    }
    run.input_path = input;
    run.out_dir = out_dir;
    if (!label.empty()) run.label_column = label;
    if (!name.empty()) run.dataset_name = name;
    run.has_header = !no_header;
    if (!config_file.empty()) run.config_file = config_file;
    try {
      run.delimiter = parse_delimiter(delimiter);
      run.format = parse_format(format);
      run.binning = otdp::parse_binning(binning);
      otdp::Analysis analysis;
      try {
        analysis = otdp::analyze(run);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::too_large) throw;
        const auto count = otdp::count_rows_only(run, e.what());
        otdp::write_row_count_report(count, run);
        std::cout << run.input_path.filename().string() << ": " << count.n_points << " data rows (row count only: "
                  << e.what() << ")\n";
        return otdp::kExitRowCountOnly;
      }
      const auto written = otdp::write_outputs(analysis, run);
      const auto& bundle = analysis.bundle;
      std::cout << otdp::stats_header() << "\n" << otdp::emit_stats_row(bundle) << "\n";
      for (const auto& w : bundle.warnings) std::cerr << "warning: " << w << "\n";
      if (bundle.complexity.low_confidence) {
        std::cerr << "warning: low confidence, " << bundle.complexity.skipped.size() << " measures were skipped\n";
      }
      std::cerr << "wrote " << written.size() << " files to " << run.out_dir.string() << "\n";
      return otdp::kExitOk;
    } catch (const Error& e) {
      return report_error(e, &run.out_dir);
    } catch (const std::exception& e) {
      return report_error(Error(ErrorKind::io, e.what()), &run.out_dir);
    }
  }

  try {
    otdp::CatalogLimits limits;
    if (extended) limits = {std::nullopt, std::nullopt};
    const otdp::Catalog cat =
        catalog_path.empty() ? otdp::load_catalog(otdp::embedded_catalog_text(), limits)
                             : otdp::load_catalog_file(catalog_path, limits);
    if (*list) {
      otdp::DatasetFilter all;
      all.ml_ready_only = list_ml;
      print_record_list(otdp::query_datasets(cat, all), list_json);
    } else if (*show) {
      const auto* record = otdp::find_dataset(cat, show_name);
      if (record == nullptr) {
        const auto suggestions = otdp::suggest_datasets(cat, show_name);
        std::string message = "unknown dataset '" + show_name + "'";
        if (!suggestions.empty()) message += "; did you mean '" + suggestions.front() + "'?";
        throw Error(ErrorKind::unknown_dataset, message).with_details(suggestions);
      }
      if (show_json) std::cout << dump(record_to_json(*record)) << "\n";
      else print_record(*record);
    } else if (*query) {
      if (!step_text.empty()) {
        filter.step = otdp::parse_ckc_step(step_text);
        if (!filter.step) {
          std::vector<std::string> names;
          for (auto s : otdp::kCkcSteps) names.emplace_back(otdp::to_string(s));
          throw Error(ErrorKind::invalid_argument, "unknown kill-chain step '" + step_text + "'").with_details(names);
        }
      }
      print_record_list(otdp::query_datasets(cat, filter), query_json);
    } else if (*summary) {
      print_summary(otdp::summary_stats(cat), summary_json);
    }
    return otdp::kExitOk;
  } catch (const Error& e) {
    return report_error(e);
  }
}
