#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace otdp {

enum class CkcStep {
  reconnaissance,
  weaponisation,
  delivery,
  exploitation,
  installation,
  command_and_control,
  actions_on_objectives,
};

inline constexpr std::array<CkcStep, 7> kCkcSteps{
    CkcStep::reconnaissance, CkcStep::weaponisation,       CkcStep::delivery,
    CkcStep::exploitation,   CkcStep::installation,        CkcStep::command_and_control,
    CkcStep::actions_on_objectives,
};

std::string_view to_string(CkcStep step);
// Case-insensitive; spaces, '&' and other punctuation are ignored ("command & control").
std::optional<CkcStep> parse_ckc_step(std::string_view text);

struct AttackSubheading {
  std::string_view name;
  CkcStep step;
};

inline constexpr std::size_t kAttackCount = 23;

// Column headings of the kill-chain mapping, in table order.
const std::array<AttackSubheading, kAttackCount>& attack_subheadings();
// Index into attack_subheadings(); case-insensitive, whitespace ignored.
std::optional<std::size_t> find_attack(std::string_view name);

struct DatasetStats {
  std::string file;
  std::string format;
  std::size_t n_points = 0;
  std::size_t n_features = 0;
  double ir = 1.0;
  double avg_cs = 0.0;
  std::string label_column = "auto";
  std::size_t table_order = 0;  // row position in the statistics table, 1-based

  bool operator==(const DatasetStats&) const = default;
};

struct DatasetRecord {
  int id = 0;
  std::string name;
  int year = 0;
  std::optional<int> ckc_table_year;
  std::string scenario;
  int attack_type_count = 0;
  std::vector<std::size_t> attacks;  // ascending indices into attack_subheadings()
  std::optional<std::string> url;
  std::string reference;
  std::optional<DatasetStats> stats;
  std::vector<std::string> notes;

  bool ml_ready() const { return stats.has_value(); }
  bool has_attack(std::size_t attack) const;
  bool has_step(CkcStep step) const;
  std::vector<std::string_view> attack_names() const;

  bool operator==(const DatasetRecord&) const = default;
};

struct Catalog {
  int version = 1;
  std::vector<DatasetRecord> records;  // ascending id
};

inline constexpr std::size_t kCatalogRecords = 32;
inline constexpr std::size_t kCatalogMlReady = 17;

struct CatalogLimits {
  // nullopt disables the count checks (for user catalogues with extra datasets).
  std::optional<std::size_t> records = kCatalogRecords;
  std::optional<std::size_t> ml_ready = kCatalogMlReady;
};

// Throws Error(catalog_corrupt) with the offending line on any format or
// consistency problem.
Catalog load_catalog(std::string_view text, const CatalogLimits& limits = {});
Catalog load_catalog_file(const std::filesystem::path& path, const CatalogLimits& limits = {});

std::string_view embedded_catalog_text();
const Catalog& embedded_catalog();

struct DatasetFilter {
  std::optional<std::string> attack;
  std::optional<CkcStep> step;
  std::optional<int> year_from;
  std::optional<int> year_to;
  std::optional<std::string> scenario;  // case-insensitive substring
  bool ml_ready_only = false;
};

// Records matching every given clause, by ascending id. Unknown attack names
// raise Error(unknown_attack) listing the valid names.
std::vector<DatasetRecord> query_datasets(const Catalog& catalog, const DatasetFilter& filter);

// By id ("15"), exact name, or name ignoring case and punctuation.
const DatasetRecord* find_dataset(const Catalog& catalog, std::string_view query);
// Closest names by edit distance, best first.
std::vector<std::string> suggest_datasets(const Catalog& catalog, std::string_view query, std::size_t limit = 3);

struct CatalogSummary {
  std::size_t n_records = 0;
  std::size_t n_ml_ready = 0;
  double avg_ir = 0.0;
  double avg_cs = 0.0;
  // [0,0.1) [0.1,0.2) [0.2,0.3) [0.3,0.4) [0.4,0.5] (0.5,1]
  std::array<std::size_t, 6> cs_histogram{};
  std::size_t ir_above_30 = 0;
};

std::size_t cs_histogram_bin(double cs);
std::size_t count_ir_above(const Catalog& catalog, double threshold);
CatalogSummary summary_stats(const Catalog& catalog);

}  // namespace otdp
