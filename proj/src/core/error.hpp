#pragma once

#include <stdexcept>
#include <string>

namespace glp {

enum class ErrorCode {
  invalid_argument = 1,
  not_adjacent,
  not_self_avoiding,
  resource_bound,
  infinite_moment,
  empty_conditioning_event,
  degenerate_tail,
  invalid_p,
  truncation_bias_too_large,
  unknown_check,
  parse_error,
  io_error,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

}  // namespace glp
