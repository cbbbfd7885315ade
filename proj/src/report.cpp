#include "otdp/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

#include "otdp/error.hpp"

namespace otdp {
namespace {

using nlohmann::json;

std::string shortest(double value, std::chars_format format) {
  char buf[400];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value, format);
  return std::string(buf, result.ptr);
}

json measure_to_json(const MeasureValue& v) {
  return {{"id", std::string(to_string(v.id))}, {"raw", v.raw}, {"normalized", v.normalized}};
}

MeasureId measure_from_json(const json& j) {
  const auto id = parse_measure_id(j.at("id").get<std::string>());
  if (!id) throw Error(ErrorKind::parse, "unknown measure id '" + j.at("id").get<std::string>() + "'");
  return *id;
}

json imbalance_to_json(const ImbalanceStat& s) {
  return {{"n_benign", s.n_benign}, {"n_malicious", s.n_malicious}, {"ir", s.ir},
          {"ir_2dp", format_fixed_half_up(s.ir, 2)}};
}

ImbalanceStat imbalance_from_json(const json& j) {
  return {j.at("n_benign").get<std::size_t>(), j.at("n_malicious").get<std::size_t>(), j.at("ir").get<double>()};
}

json complexity_to_json(const ComplexityReport& r) {
  json measures = json::array();
  for (const auto& v : r.measures) measures.push_back(measure_to_json(v));
  json skipped = json::array();
  for (const auto& s : r.skipped) skipped.push_back({{"id", std::string(to_string(s.id))}, {"reason", s.reason}});
  return {{"cs", r.cs},
          {"cs_3dp", format_fixed_half_up(r.cs, 3)},
          {"measures", measures},
          {"skipped", skipped},
          {"ir", imbalance_to_json(r.ir)},
          {"k_used", r.k_used},
          {"m_used", r.m_used},
          {"seed", r.seed},
          {"low_confidence", r.low_confidence}};
}

ComplexityReport complexity_from_json(const json& j) {
  ComplexityReport r;
  for (const auto& m : j.at("measures")) {
    r.measures.push_back({measure_from_json(m), m.at("raw").get<double>(), m.at("normalized").get<double>()});
  }
  for (const auto& s : j.at("skipped")) r.skipped.push_back({measure_from_json(s), s.at("reason").get<std::string>()});
  r.cs = j.at("cs").get<double>();
  r.ir = imbalance_from_json(j.at("ir"));
  r.k_used = j.at("k_used").get<std::size_t>();
  r.m_used = j.at("m_used").get<std::size_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.low_confidence = j.at("low_confidence").get<bool>();
  return r;
}

}  // namespace

std::string format_shortest(double value) {
  if (!std::isfinite(value)) return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
  return shortest(value, std::chars_format::general);
}

std::string format_fixed_half_up(double value, int decimals) {
  if (!std::isfinite(value)) return format_shortest(value);
  if (decimals < 0) decimals = 0;
  std::string text = shortest(value, std::chars_format::fixed);
  const bool negative = text.front() == '-';
  if (negative) text.erase(0, 1);
  const auto dot = text.find('.');
  std::string whole = text.substr(0, dot);
  std::string frac = dot == std::string::npos ? std::string() : text.substr(dot + 1);
  const auto places = static_cast<std::size_t>(decimals);
  if (frac.size() > places) {
    const bool round_up = frac[places] >= '5';
    frac.resize(places);
    if (round_up) {
      std::string digits = whole + frac;
      std::size_t i = digits.size();
      while (i > 0) {
        --i;
        if (digits[i] == '9') {
          digits[i] = '0';
        } else {
          ++digits[i];
          break;
        }
        if (i == 0) digits.insert(digits.begin(), '1');
      }
      whole = digits.substr(0, digits.size() - places);
      frac = digits.substr(digits.size() - places);
    }
  } else {
    frac.append(places - frac.size(), '0');
  }
  std::string out = whole;
  if (places > 0) out += "." + frac;
  if (negative && out.find_first_not_of("0.") != std::string::npos) out.insert(out.begin(), '-');
  return out;
}

void validate_bundle(const AnalysisBundle& bundle) {
  if (bundle.plot_features.size() > kPlotFeatureCount) {
    throw Error(ErrorKind::invalid_argument, "at most five plot features are allowed");
  }
  std::set<std::size_t> ranked;
  for (const auto& s : bundle.ranking) ranked.insert(s.feature_index);
  for (std::size_t f : bundle.plot_features) {
    if (!ranked.contains(f)) {
      throw Error(ErrorKind::invalid_argument, "plot feature " + std::to_string(f) + " is not in the ranking");
    }
  }
}

std::string stats_header() { return "Dataset | File | Format | # Data points | # Features | IR | Avg. CS"; }

std::string emit_stats_row(const AnalysisBundle& b) {
  return b.dataset_name + " | " + b.source_file + " | " + b.stats.file_format + " | " +
         std::to_string(b.stats.n_points) + " | " + std::to_string(b.stats.n_features) + " | " +
         format_fixed_half_up(b.imbalance.ir, 2) + " | " + format_fixed_half_up(b.complexity.cs, 3);
}

json to_json(const AnalysisBundle& b) {
  json ranking = json::array();
  for (const auto& s : b.ranking) {
    ranking.push_back({{"index", s.feature_index}, {"name", s.feature_name}, {"mi_bits", s.mi_bits}});
  }
  return {{"dataset_name", b.dataset_name},
          {"source_file", b.source_file},
          {"stats",
           {{"n_points", b.stats.n_points}, {"n_features", b.stats.n_features}, {"file_format", b.stats.file_format}}},
          {"imbalance", imbalance_to_json(b.imbalance)},
          {"complexity", complexity_to_json(b.complexity)},
          {"ranking", ranking},
          {"plot_features", b.plot_features},
          {"label_column", b.label_column},
          {"dropped_rows", b.dropped_rows},
          {"dropped_columns", b.dropped_columns},
          {"warnings", b.warnings},
          {"sampling", b.sampling},
          {"stats_row", emit_stats_row(b)},
          {"config", b.config}};
}

AnalysisBundle bundle_from_json(const json& j) {
  try {
    AnalysisBundle b;
    b.dataset_name = j.at("dataset_name").get<std::string>();
    b.source_file = j.at("source_file").get<std::string>();
    const auto& stats = j.at("stats");
    b.stats = {stats.at("n_points").get<std::size_t>(), stats.at("n_features").get<std::size_t>(),
               stats.at("file_format").get<std::string>()};
    b.imbalance = imbalance_from_json(j.at("imbalance"));
    b.complexity = complexity_from_json(j.at("complexity"));
    for (const auto& s : j.at("ranking")) {
      b.ranking.push_back({s.at("index").get<std::size_t>(), s.at("name").get<std::string>(),
                           s.at("mi_bits").get<double>()});
    }
    b.plot_features = j.at("plot_features").get<std::vector<std::size_t>>();
    b.label_column = j.at("label_column").get<std::string>();
    b.dropped_rows = j.at("dropped_rows").get<std::size_t>();
    b.dropped_columns = j.at("dropped_columns").get<std::vector<std::string>>();
    b.warnings = j.at("warnings").get<std::vector<std::string>>();
    b.sampling = j.at("sampling").get<std::string>();
    b.config = j.at("config");
    return b;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse, std::string("malformed report JSON: ") + e.what());
  }
}

std::string emit_stats_json(const AnalysisBundle& bundle) {
  return to_json(bundle).dump(2, ' ', false, json::error_handler_t::replace) + "\n";
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot write '" + path.string() + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorKind::io, "write failed for '" + path.string() + "'");
}

}  // namespace otdp
