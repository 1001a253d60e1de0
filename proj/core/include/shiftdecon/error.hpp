#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace shiftdecon {

/// Failure categories raised by the library. The names are stable: the CLI
/// prints them verbatim as `ERROR <Name>: <detail>`.
enum class ErrorKind {
  InvalidArgument,
  LeadingZeroKernel,
  Divergent,
  KernelShape,
  BadCenter,
  SingularShiftMatrix,
  HalfWidthTooSmall,
  IncompleteResponse,
  BlurWiderThanImage,
  OffAxisMotion,
  RankDeficient,
  EmptyWindow,
  Format,
  Io,
};

std::string_view error_name(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return error_name(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace shiftdecon
