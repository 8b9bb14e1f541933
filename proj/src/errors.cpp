#include "qdiff/errors.hpp"

namespace qd {

const char* kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::ZeroScalar: return "ZeroScalar";
        case ErrorKind::ZeroDivisor: return "ZeroDivisor";
        case ErrorKind::ZeroOperator: return "ZeroOperator";
        case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
        case ErrorKind::NonMonic: return "NonMonic";
        case ErrorKind::SingularConstantTerm: return "SingularConstantTerm";
        case ErrorKind::SingularGauge: return "SingularGauge";
        case ErrorKind::NotRegularSingular: return "NotRegularSingular";
        case ErrorKind::EigenvalueNotInField: return "EigenvalueNotInField";
        case ErrorKind::ResonanceUnresolved: return "ResonanceUnresolved";
        case ErrorKind::UnsupportedShape: return "UnsupportedShape";
        case ErrorKind::WindowTooSmall: return "WindowTooSmall";
        case ErrorKind::NonIntegralDimension: return "NonIntegralDimension";
        case ErrorKind::DomainViolation: return "DomainViolation";
        case ErrorKind::SyntaxError: return "SyntaxError";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

}  // namespace qd
