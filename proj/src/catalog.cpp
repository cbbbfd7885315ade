#include "otdp/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "otdp/error.hpp"
#include "otdp/table.hpp"

namespace otdp {
namespace {

constexpr std::array<AttackSubheading, kAttackCount> kAttacks{{
    {"TCP/UDP Port Scan", CkcStep::reconnaissance},
    {"Modbus/Scada Scan", CkcStep::reconnaissance},
    {"OS Fingerprint", CkcStep::reconnaissance},
    {"Vulnerability Scan", CkcStep::reconnaissance},
    {"DoS/DDoS", CkcStep::exploitation},
    {"Injection-Protocol/Data", CkcStep::exploitation},
    {"Injection-SQL/XSS", CkcStep::exploitation},
    {"MITM", CkcStep::exploitation},
    {"PLC web service", CkcStep::exploitation},
    {"Replay", CkcStep::exploitation},
    {"DNP3", CkcStep::exploitation},
    {"GOOSE", CkcStep::exploitation},
    {"S7 Comm", CkcStep::exploitation},
    {"SCADA/Modbus", CkcStep::exploitation},
    {"Backdoor", CkcStep::installation},
    {"Malware", CkcStep::installation},
    {"Brute Force", CkcStep::command_and_control},
    {"Dictionary", CkcStep::command_and_control},
    {"Malicious Insider", CkcStep::command_and_control},
    {"Upload", CkcStep::command_and_control},
    {"Exfiltration", CkcStep::actions_on_objectives},
    {"Tampering", CkcStep::actions_on_objectives},
    {"Ransomware", CkcStep::actions_on_objectives},
}};

std::string fold(std::string_view text, bool keep_punct) {
  std::string out;
  for (unsigned char c : text) {
    if (std::isspace(c)) continue;
    if (!keep_punct && !std::isalnum(c)) continue;
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

[[noreturn]] void corrupt(std::size_t line, const std::string& message) {
  throw Error(ErrorKind::catalog_corrupt, "catalogue line " + std::to_string(line) + ": " + message);
}

template <class T>
T parse_number(std::string_view text, std::size_t line, std::string_view key) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) corrupt(line, std::string(key) + ": not a number: '" + std::string(text) + "'");
  return value;
}

struct PendingRecord {
  DatasetRecord record;
  std::size_t line = 0;
  std::optional<bool> ml_ready;
  std::set<std::string> seen;
  DatasetStats stats;
  std::set<std::string> stats_seen;
};

const std::set<std::string>& stats_keys() {
  static const std::set<std::string> keys{"file", "format", "points", "features", "ir", "avg-cs", "label-column",
                                          "stats-order"};
  return keys;
}

DatasetRecord finish(PendingRecord& p) {
  for (const char* key : {"id", "name", "year", "scenario", "attack-types", "attacks", "reference", "ml-ready"}) {
    if (!p.seen.contains(key)) corrupt(p.line, std::string("record is missing '") + key + "'");
  }
  const bool any_stats = !p.stats_seen.empty();
  if (*p.ml_ready != any_stats) {
    corrupt(p.line, "record " + std::to_string(p.record.id) + ": ml-ready does not match presence of statistics");
  }
  if (any_stats) {
    for (const auto& key : stats_keys()) {
      if (!p.stats_seen.contains(key)) corrupt(p.line, "ML-ready record is missing '" + key + "'");
    }
    if (p.stats.ir < 1.0) corrupt(p.line, "ir must be at least 1");
    if (p.stats.avg_cs < 0.0 || p.stats.avg_cs > 1.0) corrupt(p.line, "avg-cs must lie in [0, 1]");
    p.record.stats = p.stats;
  }
  return std::move(p.record);
}

void assign(PendingRecord& p, const std::string& key, std::string_view value, std::size_t line) {
  if (key != "note" && !p.seen.insert(key).second) corrupt(line, "duplicate field '" + key + "'");
  DatasetRecord& r = p.record;
  if (key == "id") r.id = parse_number<int>(value, line, key);
  else if (key == "name") r.name = value;
  else if (key == "year") r.year = parse_number<int>(value, line, key);
  else if (key == "ckc-table-year") r.ckc_table_year = parse_number<int>(value, line, key);
  else if (key == "scenario") r.scenario = value;
  else if (key == "attack-types") r.attack_type_count = parse_number<int>(value, line, key);
  else if (key == "attacks") {
    std::string_view rest = value;
    while (!rest.empty()) {
      const auto cut = rest.find(';');
      const std::string_view item = trim(rest.substr(0, cut));
      rest = cut == std::string_view::npos ? std::string_view{} : rest.substr(cut + 1);
      if (item.empty()) continue;
      const auto index = find_attack(item);
      if (!index) corrupt(line, "unknown attack subheading '" + std::string(item) + "'");
      r.attacks.push_back(*index);
    }
    std::sort(r.attacks.begin(), r.attacks.end());
    r.attacks.erase(std::unique(r.attacks.begin(), r.attacks.end()), r.attacks.end());
  } else if (key == "url") r.url = std::string(value);
  else if (key == "reference") r.reference = value;
  else if (key == "note") r.notes.emplace_back(value);
  else if (key == "ml-ready") {
    if (value == "yes") p.ml_ready = true;
    else if (value == "no") p.ml_ready = false;
    else corrupt(line, "ml-ready must be yes or no");
  } else if (stats_keys().contains(key)) {
    p.stats_seen.insert(key);
    DatasetStats& s = p.stats;
    if (key == "file") s.file = value;
    else if (key == "format") s.format = value;
    else if (key == "points") s.n_points = parse_number<std::size_t>(value, line, key);
    else if (key == "features") s.n_features = parse_number<std::size_t>(value, line, key);
    else if (key == "ir") s.ir = parse_number<double>(value, line, key);
    else if (key == "avg-cs") s.avg_cs = parse_number<double>(value, line, key);
    else if (key == "label-column") s.label_column = value;
    else s.table_order = parse_number<std::size_t>(value, line, key);
  } else {
    corrupt(line, "unknown field '" + key + "'");
  }
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace

std::string_view to_string(CkcStep step) {
  switch (step) {
    case CkcStep::reconnaissance: return "Reconnaissance";
    case CkcStep::weaponisation: return "Weaponisation";
    case CkcStep::delivery: return "Delivery";
    case CkcStep::exploitation: return "Exploitation";
    case CkcStep::installation: return "Installation";
    case CkcStep::command_and_control: return "Command & Control";
    case CkcStep::actions_on_objectives: return "Actions on Objectives";
  }
  return "unknown";
}

std::optional<CkcStep> parse_ckc_step(std::string_view text) {
  const std::string key = fold(text, false);
  for (CkcStep step : kCkcSteps) {
    if (fold(to_string(step), false) == key) return step;
  }
  if (key == "weaponization") return CkcStep::weaponisation;
  if (key == "c2" || key == "commandcontrol" || key == "commandandcontrol") return CkcStep::command_and_control;
  if (key == "actions" || key == "actionsonobjectives") return CkcStep::actions_on_objectives;
  return std::nullopt;
}

const std::array<AttackSubheading, kAttackCount>& attack_subheadings() { return kAttacks; }

std::optional<std::size_t> find_attack(std::string_view name) {
  const std::string key = fold(name, true);
  for (std::size_t i = 0; i < kAttacks.size(); ++i) {
    if (fold(kAttacks[i].name, true) == key) return i;
  }
  return std::nullopt;
}

bool DatasetRecord::has_attack(std::size_t attack) const {
  return std::binary_search(attacks.begin(), attacks.end(), attack);
}

bool DatasetRecord::has_step(CkcStep step) const {
  return std::any_of(attacks.begin(), attacks.end(), [step](std::size_t a) { return kAttacks[a].step == step; });
}

std::vector<std::string_view> DatasetRecord::attack_names() const {
  std::vector<std::string_view> names;
  for (std::size_t a : attacks) names.push_back(kAttacks[a].name);
  return names;
}

Catalog load_catalog(std::string_view text, const CatalogLimits& limits) {
  Catalog catalog;
  bool have_version = false;
  std::optional<PendingRecord> pending;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view raw = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line == "[dataset]") {
      if (!have_version) corrupt(line_no, "missing 'catalog-version' before the first record");
      if (pending) catalog.records.push_back(finish(*pending));
      pending.emplace();
      pending->line = line_no;
      continue;
    }
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) corrupt(line_no, "expected 'key: value'");
    const std::string key = to_lower_ascii(trim(line.substr(0, colon)));
    const std::string_view value = trim(line.substr(colon + 1));
    if (key == "catalog-version") {
      if (have_version || pending) corrupt(line_no, "'catalog-version' must appear once, before any record");
      catalog.version = parse_number<int>(value, line_no, key);
      if (catalog.version != 1) corrupt(line_no, "unsupported catalogue version " + std::string(value));
      have_version = true;
      continue;
    }
    if (!pending) corrupt(line_no, "field '" + key + "' outside a [dataset] block");
    assign(*pending, key, value, line_no);
  }
  if (pending) catalog.records.push_back(finish(*pending));
  if (!have_version) corrupt(line_no, "missing 'catalog-version'");

  std::sort(catalog.records.begin(), catalog.records.end(),
            [](const DatasetRecord& a, const DatasetRecord& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < catalog.records.size(); ++i) {
    if (catalog.records[i].id == catalog.records[i - 1].id) {
      throw Error(ErrorKind::catalog_corrupt, "duplicate dataset id " + std::to_string(catalog.records[i].id));
    }
  }
  const auto ml_ready = static_cast<std::size_t>(std::count_if(
      catalog.records.begin(), catalog.records.end(), [](const DatasetRecord& r) { return r.ml_ready(); }));
  if (limits.records && catalog.records.size() != *limits.records) {
    throw Error(ErrorKind::catalog_corrupt, "catalogue has " + std::to_string(catalog.records.size()) +
                                                " records, expected " + std::to_string(*limits.records));
  }
  if (limits.ml_ready && ml_ready != *limits.ml_ready) {
    throw Error(ErrorKind::catalog_corrupt, "catalogue has " + std::to_string(ml_ready) +
                                                " records with statistics, expected " +
                                                std::to_string(*limits.ml_ready));
  }
  return catalog;
}

Catalog load_catalog_file(const std::filesystem::path& path, const CatalogLimits& limits) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open catalogue '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_catalog(buffer.str(), limits);
}

const Catalog& embedded_catalog() {
  static const Catalog catalog = load_catalog(embedded_catalog_text());
  return catalog;
}

std::vector<DatasetRecord> query_datasets(const Catalog& catalog, const DatasetFilter& filter) {
  std::optional<std::size_t> attack;
  if (filter.attack) {
    attack = find_attack(*filter.attack);
    if (!attack) {
      std::vector<std::string> names;
      for (const auto& a : kAttacks) names.emplace_back(a.name);
      throw Error(ErrorKind::unknown_attack, "unknown attack '" + *filter.attack + "'").with_details(names);
    }
  }
  const std::string scenario = filter.scenario ? to_lower_ascii(*filter.scenario) : std::string();
  std::vector<DatasetRecord> out;
  for (const auto& r : catalog.records) {
    if (attack && !r.has_attack(*attack)) continue;
    if (filter.step && !r.has_step(*filter.step)) continue;
    if (filter.year_from && r.year < *filter.year_from) continue;
    if (filter.year_to && r.year > *filter.year_to) continue;
    if (filter.scenario && to_lower_ascii(r.scenario).find(scenario) == std::string::npos) continue;
    if (filter.ml_ready_only && !r.ml_ready()) continue;
    out.push_back(r);
  }
  return out;
}

const DatasetRecord* find_dataset(const Catalog& catalog, std::string_view query) {
  const std::string_view q = trim(query);
  int id = 0;
  const auto [ptr, ec] = std::from_chars(q.data(), q.data() + q.size(), id);
  if (ec == std::errc() && ptr == q.data() + q.size()) {
    for (const auto& r : catalog.records) {
      if (r.id == id) return &r;
    }
    return nullptr;
  }
  for (const auto& r : catalog.records) {
    if (r.name == q) return &r;
  }
  const std::string key = fold(q, false);
  for (const auto& r : catalog.records) {
    if (fold(r.name, false) == key) return &r;
  }
  return nullptr;
}

std::vector<std::string> suggest_datasets(const Catalog& catalog, std::string_view query, std::size_t limit) {
  const std::string key = fold(query, false);
  std::vector<std::pair<std::size_t, const DatasetRecord*>> scored;
  for (const auto& r : catalog.records) {
    const std::string name = fold(r.name, false);
    std::size_t d = edit_distance(key, name);
    // a query that is a fragment of a long name should still rank that name first
    if (!key.empty() && name.find(key) != std::string::npos) d = std::min(d, name.size() - key.size()) / 4;
    scored.emplace_back(d, &r);
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < scored.size() && i < limit; ++i) out.push_back(scored[i].second->name);
  return out;
}

std::size_t cs_histogram_bin(double cs) {
  if (cs > 0.5) return 5;
  // the small offset keeps values such as 0.3 (stored as 0.29999...) in their decimal bin
  const auto bin = static_cast<std::size_t>(std::max(0.0, cs * 10.0 + 1e-9));
  return std::min<std::size_t>(bin, 4);
}

std::size_t count_ir_above(const Catalog& catalog, double threshold) {
  return static_cast<std::size_t>(std::count_if(catalog.records.begin(), catalog.records.end(), [&](const auto& r) {
    return r.stats && r.stats->ir > threshold;
  }));
}

CatalogSummary summary_stats(const Catalog& catalog) {
  CatalogSummary s;
  s.n_records = catalog.records.size();
  double ir = 0.0;
  double cs = 0.0;
  for (const auto& r : catalog.records) {
    if (!r.stats) continue;
    ++s.n_ml_ready;
    ir += r.stats->ir;
    cs += r.stats->avg_cs;
    ++s.cs_histogram[cs_histogram_bin(r.stats->avg_cs)];
  }
  if (s.n_ml_ready > 0) {
    s.avg_ir = ir / static_cast<double>(s.n_ml_ready);
    s.avg_cs = cs / static_cast<double>(s.n_ml_ready);
  }
  s.ir_above_30 = count_ir_above(catalog, 30.0);
  return s;
}

}  // namespace otdp
