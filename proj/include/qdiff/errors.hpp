#pragma once

#include <stdexcept>
#include <string>

namespace qd {

enum class ErrorKind {
    ZeroScalar,
    ZeroDivisor,
    ZeroOperator,
    PrecisionExhausted,
    NonMonic,
    SingularConstantTerm,
    SingularGauge,
    NotRegularSingular,
    EigenvalueNotInField,
    ResonanceUnresolved,
    UnsupportedShape,
    WindowTooSmall,
    NonIntegralDimension,
    DomainViolation,
    SyntaxError,
    InvalidArgument,
};

const char* kind_name(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

class SyntaxError : public Error {
public:
    SyntaxError(const std::string& what, std::size_t pos)
        : Error(ErrorKind::SyntaxError, what + " at position " + std::to_string(pos)), pos_(pos) {}
    std::size_t position() const { return pos_; }

private:
    std::size_t pos_;
};

[[noreturn]] inline void fail(ErrorKind k, const std::string& msg) { throw Error(k, msg); }

}  // namespace qd
