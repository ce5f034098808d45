#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gustcast {

enum class Errc {
  dimension_mismatch,
  invalid_argument,
  non_finite,
  parse_error,
  version_mismatch,
  shape_inconsistency,
  missing_field,
  spacing_violation,
  non_monotone,
  out_of_range,
  coverage_gap,
  degenerate_feature,
  no_convergence,
  insufficient_data,
  divergence,
  config_error,
  io_error,
};

std::string_view to_string(Errc code) noexcept;

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace gustcast
