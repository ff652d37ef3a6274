#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sheardiss {

/// Failure categories raised across the library. Each maps to one named
/// error condition of the public operations.
enum class Errc {
  DegenerateCritical,
  NonPeriodic,
  NoCriticalPoints,
  InvalidArgument,
  Overflow,
  GridTooCoarse,
  ZeroMode,
  AliasingError,
  UnresolvedBump,
  NonFinite,
  EquivalenceViolation,
  StrideTooCoarse,
  NegativePhi,
  NoFeasibleBeta,
  Underflow,
  InsufficientPoints,
  Unbounded,
  MissingData,
  Io,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void raise(Errc code, const std::string& what);

}  // namespace sheardiss
