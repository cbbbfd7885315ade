#include <algorithm>
#include <unordered_set>

#include "otdp/error.hpp"
#include "otdp/ingest.hpp"

namespace otdp {

const std::vector<std::string>& default_label_names() {
  static const std::vector<std::string> names{"label", "class", "attack", "category", "type", "result"};
  return names;
}

const std::vector<std::string>& default_benign_aliases() {
  static const std::vector<std::string> aliases{"benign", "normal", "0", "false", "good", "natural"};
  return aliases;
}

bool LabelSpec::is_benign(std::string_view cell) const {
  return benign_aliases.count(to_lower_ascii(trim(cell))) > 0;
}

namespace {

std::size_t distinct_non_missing(const RawTable& table, std::size_t col, std::size_t stop_at) {
  std::unordered_set<std::string_view> seen;
  for (std::size_t r = 0; r < table.n_rows() && seen.size() < stop_at; ++r) {
    if (!table.is_missing(r, col)) seen.insert(trim(table.cell(r, col)));
  }
  return seen.size();
}

}  // namespace

Schema infer_schema(const RawTable& table, const SchemaOptions& options) {
  if (table.n_rows() == 0 || table.n_cols() == 0) {
    throw Error(ErrorKind::empty_input, "table is empty");
  }
  if (options.benign_aliases.empty()) {
    throw Error(ErrorKind::invalid_argument, "benign alias list must not be empty");
  }

  Schema schema;
  schema.columns = table.columns();
  for (const auto& alias : options.benign_aliases) {
    schema.label.benign_aliases.insert(to_lower_ascii(trim(alias)));
  }

  if (options.label_hint) {
    const auto index = table.find_column(*options.label_hint);
    if (!index) {
      throw Error(ErrorKind::invalid_argument, "label column '" + *options.label_hint + "' not found");
    }
    schema.label.column_index = *index;
    schema.label.source = LabelSource::hint;
    return schema;
  }

  std::unordered_set<std::string> wanted;
  for (const auto& name : options.label_names) wanted.insert(to_lower_ascii(trim(name)));
  for (std::size_t c = table.n_cols(); c-- > 0;) {
    if (wanted.count(to_lower_ascii(trim(table.column(c).name))) > 0) {
      schema.label.column_index = c;
      schema.label.source = LabelSource::name_match;
      return schema;
    }
  }

  // No name matched: the last column that is not constant.
  for (std::size_t c = table.n_cols(); c-- > 0;) {
    if (distinct_non_missing(table, c, 2) >= 2) {
      schema.label.column_index = c;
      schema.label.source = LabelSource::fallback;
      return schema;
    }
  }
  throw Error(ErrorKind::no_label, "no label column: every column is constant");
}

Readiness check_ml_ready(const RawTable& table, const LabelSpec& label) {
  Readiness verdict;
  const std::size_t lc = label.column_index;
  if (lc >= table.n_cols()) {
    verdict.reasons.emplace_back("no label column");
    return verdict;
  }

  bool any_benign = false;
  bool any_malicious = false;
  std::unordered_set<std::string_view> values;
  for (std::size_t r = 0; r < table.n_rows(); ++r) {
    if (table.is_missing(r, lc)) continue;
    const auto v = trim(table.cell(r, lc));
    values.insert(v);
    (label.is_benign(v) ? any_benign : any_malicious) = true;
  }

  if (label.source == LabelSource::fallback && !any_benign) {
    // A guessed column without a single benign value is not a label at all.
    verdict.reasons.emplace_back("no label column");
  } else {
    if (values.size() < 2) verdict.reasons.emplace_back("single-class labels");
    if (values.size() >= 2 && !any_benign) verdict.reasons.emplace_back("no benign label values");
    if (values.size() >= 2 && !any_malicious) verdict.reasons.emplace_back("no malicious label values");
  }

  const bool has_feature = std::any_of(table.columns().begin(), table.columns().end(), [&](const ColumnMeta& m) {
    return &m != &table.column(lc) && m.kind != ColumnKind::missing_only;
  });
  if (!has_feature) verdict.reasons.emplace_back("no usable feature column");

  verdict.ready = verdict.reasons.empty();
  return verdict;
}

}  // namespace otdp
