#include "reactsim/error.hpp"

namespace reactsim {

std::string_view reason_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::parse_error: return "parse_error";
    case ErrorCode::unknown_species: return "unknown_species";
    case ErrorCode::duplicate_species: return "duplicate_species";
    case ErrorCode::duplicate_reaction: return "duplicate_reaction";
    case ErrorCode::validation_failed: return "validation_failed";
    case ErrorCode::charge_imbalance: return "charge_imbalance";
    case ErrorCode::not_applicable: return "not_applicable";
    case ErrorCode::excess_quantity: return "excess_quantity";
    case ErrorCode::non_termination: return "non_termination";
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::out_of_range: return "out_of_range";
    case ErrorCode::unresolved_mixture: return "unresolved_mixture";
    case ErrorCode::unknown_container: return "unknown_container";
    case ErrorCode::duplicate_id: return "duplicate_id";
    case ErrorCode::insufficient_volume: return "insufficient_volume";
    case ErrorCode::invalid_volume: return "invalid_volume";
    case ErrorCode::unknown_session: return "unknown_session";
    case ErrorCode::unknown_trajectory: return "unknown_trajectory";
    case ErrorCode::io_error: return "io_error";
    case ErrorCode::snapshot_mismatch: return "snapshot_mismatch";
  }
  return "unknown";
}

}  // namespace reactsim
