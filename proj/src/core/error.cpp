#include "error.hpp"

namespace glp {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::not_adjacent: return "NotAdjacent";
    case ErrorCode::not_self_avoiding: return "NotSelfAvoiding";
    case ErrorCode::resource_bound: return "ResourceBound";
    case ErrorCode::infinite_moment: return "InfiniteMoment";
    case ErrorCode::empty_conditioning_event: return "EmptyConditioningEvent";
    case ErrorCode::degenerate_tail: return "DegenerateTail";
    case ErrorCode::invalid_p: return "InvalidP";
    case ErrorCode::truncation_bias_too_large: return "TruncationBiasTooLarge";
    case ErrorCode::unknown_check: return "UnknownCheck";
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::io_error: return "IoError";
  }
  return "Unknown";
}

}  // namespace glp
