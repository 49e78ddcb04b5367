#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wcospec {

enum class ErrorKind {
  DivergentComposition,
  LogAtZero,
  IllConditioned,
  InvalidFixedPoints,
  InvalidMultiplier,
  NotAutomorphism,
  NotHyperbolic,
  SyntaxError,
  ArityError,
  NotInvertible,
  ZeroOnCircle,
  UnsupportedExponent,
  EigSolverFailure,
  SeriesDiverging,
  NoEigenvectorFound,
  ProbeFailed,
  BranchUndefined,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, long position = -1)
      : std::runtime_error(what), kind_(kind), position_(position) {}

  ErrorKind kind() const noexcept { return kind_; }
  // Character offset for SyntaxError, -1 otherwise.
  long position() const noexcept { return position_; }

 private:
  ErrorKind kind_;
  long position_;
};

}  // namespace wcospec
