#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace otdp {

enum class ErrorKind {
  invalid_argument,
  io,
  parse,
  empty_input,
  unsupported_format,
  too_large,
  no_label,
  not_ml_ready,
  empty_after_clean,
  single_class,
  insufficient_class,
  no_features,
  degenerate,
  too_small,
  catalog_corrupt,
  unknown_attack,
  unknown_dataset,
};

std::string_view to_string(ErrorKind kind);

// Every failure the library reports carries a machine-readable kind so the
// CLI can map it to a stable exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  // Optional detail lines (readiness reasons, name suggestions, ...).
  const std::vector<std::string>& details() const noexcept { return details_; }
  Error& with_details(std::vector<std::string> details) {
    details_ = std::move(details);
    return *this;
  }

 private:
  ErrorKind kind_;
  std::vector<std::string> details_;
};

}  // namespace otdp
