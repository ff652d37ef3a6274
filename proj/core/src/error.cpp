#include "sheardiss/error.hpp"

namespace sheardiss {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::DegenerateCritical: return "DegenerateCritical";
    case Errc::NonPeriodic: return "NonPeriodic";
    case Errc::NoCriticalPoints: return "NoCriticalPoints";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::Overflow: return "Overflow";
    case Errc::GridTooCoarse: return "GridTooCoarse";
    case Errc::ZeroMode: return "ZeroMode";
    case Errc::AliasingError: return "AliasingError";
    case Errc::UnresolvedBump: return "UnresolvedBump";
    case Errc::NonFinite: return "NonFinite";
    case Errc::EquivalenceViolation: return "EquivalenceViolation";
    case Errc::StrideTooCoarse: return "StrideTooCoarse";
    case Errc::NegativePhi: return "NegativePhi";
    case Errc::NoFeasibleBeta: return "NoFeasibleBeta";
    case Errc::Underflow: return "Underflow";
    case Errc::InsufficientPoints: return "InsufficientPoints";
    case Errc::Unbounded: return "Unbounded";
    case Errc::MissingData: return "MissingData";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void raise(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace sheardiss
