#pragma once

#include <stdexcept>
#include <string>

namespace helm {

// Every failure the library reports deliberately carries one of these codes.
// Tests match on the code, messages are for humans.
enum class ErrorCode {
  out_of_domain,
  non_finite_alpha,
  non_positive_gamma,
  boundary_point,
  order_overflow,
  non_finite_result,
  step_count_too_small,
  verblunsky_out_of_range,
  cosh_zero,
  det_not_one,
  sigma_zero,
  non_step_profile,
  has_jumps,
  index_out_of_range,
  n_too_large_for_explicit,
  winding_nonzero,
  too_close_to_axis,
  non_positive_modulus,
  step_underflow,
  contraction_unachievable,
  invalid_profile,
  parse_error,
  invalid_argument,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace helm
