#pragma once

#include <stdexcept>
#include <string>

namespace sphdesign {

enum class ErrorCode {
  invalid_dimension,
  invalid_point,
  not_normalized,
  parse_error,
  unsupported_dimension,
  invalid_parameter,
  invalid_degree,
  no_zero,
  undefined_metric,
  infinite_energy,
  dimension_mismatch,
  overflow,
  io_error,
};

const char* to_string(ErrorCode code);

// All library failures are reported through this exception type; `code()`
// identifies the failure class so callers (and the CLI exit codes) can branch.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sphdesign
