#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kirchhoff {

enum class ErrorKind {
  InvalidArgument,
  GridMismatch,
  NoInteriorMax,
  NoNegativeStart,
  Stagnation,
  LevelBreach,
  EmptyCandidateSet,
  ConfigParse,
  ConfigValidation,
};

std::string_view error_name(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return error_name(kind_); }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool condition, const std::string& what) {
  if (!condition) fail(ErrorKind::InvalidArgument, what);
}

}  // namespace kirchhoff
