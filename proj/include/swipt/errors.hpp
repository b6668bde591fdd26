#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace swipt {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  TargetUnattainable,
  DegenerateReceiver,
  SingularY,
  InfeasibleDual,
  BisectionFailure,
  NoPositiveScale,
  AllStartsDegenerate,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// that callers (the multi-start loop, the CLI) can react by kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

inline void require(bool cond, ErrorCode code, const char* what) {
  if (!cond) fail(code, what);
}

}  // namespace swipt
