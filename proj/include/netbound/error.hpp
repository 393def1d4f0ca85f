#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace netbound {

enum class ErrorCode {
  DimensionMismatch,
  InvalidArgument,
  NoConvergence,
  Infeasible,
  IllConditioned,
  UnsupportedDims,
  UnsupportedKind,
  MissingMeasure,
  TooLarge,
  Parse,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; `code()` tells callers which
/// failure class occurred so the CLI can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace netbound
