#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace reactsim {

/// Stable machine-readable failure categories. The string forms returned by
/// reason_code() are part of the HTTP and CLI contracts; do not rename.
enum class ErrorCode {
  parse_error,
  unknown_species,
  duplicate_species,
  duplicate_reaction,
  validation_failed,
  charge_imbalance,
  not_applicable,
  excess_quantity,
  non_termination,
  invalid_argument,
  out_of_range,
  unresolved_mixture,
  unknown_container,
  duplicate_id,
  insufficient_volume,
  invalid_volume,
  unknown_session,
  unknown_trajectory,
  io_error,
  snapshot_mismatch,
};

std::string_view reason_code(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace reactsim
