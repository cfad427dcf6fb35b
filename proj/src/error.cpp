#include "runge/error.hpp"

namespace runge {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ParseError: return "ParseError";
    case Errc::NonInvertibleGenerator: return "NonInvertibleGenerator";
    case Errc::ModulusMismatch: return "ModulusMismatch";
    case Errc::UnsupportedModulus: return "UnsupportedModulus";
    case Errc::GroupTooLarge: return "GroupTooLarge";
    case Errc::NotDefinedOverQ: return "NotDefinedOverQ";
    case Errc::NotIntegral: return "NotIntegral";
    case Errc::RankDeficient: return "RankDeficient";
    case Errc::BoundViolated: return "BoundViolated";
    case Errc::RungeConditionFailed: return "RungeConditionFailed";
    case Errc::SigmaNotProper: return "SigmaNotProper";
    case Errc::PrecisionExhausted: return "PrecisionExhausted";
    case Errc::NotInPlusRegion: return "NotInPlusRegion";
    case Errc::Indeterminate: return "Indeterminate";
    case Errc::HypothesisFailed: return "HypothesisFailed";
    case Errc::DegenerateJ: return "DegenerateJ";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace runge
