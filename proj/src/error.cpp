#include "wcospec/error.hpp"

namespace wcospec {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DivergentComposition: return "DivergentComposition";
    case ErrorKind::LogAtZero: return "LogAtZero";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::InvalidFixedPoints: return "InvalidFixedPoints";
    case ErrorKind::InvalidMultiplier: return "InvalidMultiplier";
    case ErrorKind::NotAutomorphism: return "NotAutomorphism";
    case ErrorKind::NotHyperbolic: return "NotHyperbolic";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::ArityError: return "ArityError";
    case ErrorKind::NotInvertible: return "NotInvertible";
    case ErrorKind::ZeroOnCircle: return "ZeroOnCircle";
    case ErrorKind::UnsupportedExponent: return "UnsupportedExponent";
    case ErrorKind::EigSolverFailure: return "EigSolverFailure";
    case ErrorKind::SeriesDiverging: return "SeriesDiverging";
    case ErrorKind::NoEigenvectorFound: return "NoEigenvectorFound";
    case ErrorKind::ProbeFailed: return "ProbeFailed";
    case ErrorKind::BranchUndefined: return "BranchUndefined";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace wcospec
