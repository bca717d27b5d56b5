#pragma once

#include <stdexcept>
#include <string>

namespace srrk {

enum class ErrorCode {
  invalid_argument,
  dimension_mismatch,
  zero_initial_vector,
  sketch_too_small,
  not_positive_definite,
  no_convergence,
  singular_divisor,
  singular_matrix,
  singular_projected_matrix,
  domain_error,
  max_iterations,
  ill_conditioned_basis,
  rank_deficient_basis,
  parse_error,
  unsupported_field,
  unsupported_size,
  non_square,
  io_error,
  internal,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::zero_initial_vector: return "zero_initial_vector";
    case ErrorCode::sketch_too_small: return "sketch_too_small";
    case ErrorCode::not_positive_definite: return "not_positive_definite";
    case ErrorCode::no_convergence: return "no_convergence";
    case ErrorCode::singular_divisor: return "singular_divisor";
    case ErrorCode::singular_matrix: return "singular_matrix";
    case ErrorCode::singular_projected_matrix: return "singular_projected_matrix";
    case ErrorCode::domain_error: return "domain_error";
    case ErrorCode::max_iterations: return "max_iterations";
    case ErrorCode::ill_conditioned_basis: return "ill_conditioned_basis";
    case ErrorCode::rank_deficient_basis: return "rank_deficient_basis";
    case ErrorCode::parse_error: return "parse_error";
    case ErrorCode::unsupported_field: return "unsupported_field";
    case ErrorCode::unsupported_size: return "unsupported_size";
    case ErrorCode::non_square: return "non_square";
    case ErrorCode::io_error: return "io_error";
    case ErrorCode::internal: return "internal";
  }
  return "unknown";
}

}  // namespace srrk
