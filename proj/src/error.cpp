#include "hilmod/error.hpp"

namespace hilmod {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPositive: return "NotPositive";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::ZeroElement: return "ZeroElement";
    case ErrorKind::NotLinear: return "NotLinear";
    case ErrorKind::NotFull: return "NotFull";
    case ErrorKind::NotSesquilinear: return "NotSesquilinear";
    case ErrorKind::NotPositiveOperator: return "NotPositiveOperator";
    case ErrorKind::SingularOperator: return "SingularOperator";
    case ErrorKind::ResidualTooLarge: return "ResidualTooLarge";
    case ErrorKind::NotNested: return "NotNested";
    case ErrorKind::LevelCertificateFailed: return "LevelCertificateFailed";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

}  // namespace hilmod
