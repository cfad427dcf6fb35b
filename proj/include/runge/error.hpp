#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace runge {

enum class Errc {
  InvalidArgument,
  ParseError,
  NonInvertibleGenerator,
  ModulusMismatch,
  UnsupportedModulus,
  GroupTooLarge,
  NotDefinedOverQ,
  NotIntegral,
  RankDeficient,
  BoundViolated,
  RungeConditionFailed,
  SigmaNotProper,
  PrecisionExhausted,
  NotInPlusRegion,
  Indeterminate,
  HypothesisFailed,
  DegenerateJ,
};

std::string_view to_string(Errc code) noexcept;

// All library failures are reported through this type; code() identifies the
// contract that was violated.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace runge
