#pragma once

#include "qdiff/galois.hpp"

#include <string>

namespace qd {

// Left-hand side (c_1 z^-l_1 PHI - 1)^m_1 ... = rhs * z^mu.
struct EquationSpec {
    std::vector<BFactor> factors;
    CoeffScalar rhs = CoeffScalar(1);
    Rat mu;
};

enum class ParsedKind { Scalar, Series, Operator, Module, Equation };
std::string to_string(ParsedKind k);

struct Parsed {
    ParsedKind kind = ParsedKind::Scalar;
    CoeffScalar scalar;
    PuiseuxSeries series;
    SkewOperator op;
    DiffModule module;
    EquationSpec eq;
};

// Throws SyntaxError (with a byte offset) on malformed text and the usual
// library errors when an operation in the text is not defined, e.g. division
// by a non-monomial series.
Parsed parse(const std::string& text, const Rat& T = Rat(kDefaultPrecision));
std::string format(const Parsed& p);
bool operator==(const Parsed& a, const Parsed& b);
inline bool operator!=(const Parsed& a, const Parsed& b) { return !(a == b); }

// Promotions used by the commands: scalars and series become degree-0
// operators, an operator becomes its companion module.
SkewOperator as_operator(const Parsed& p);
DiffModule as_module(const Parsed& p, const Rat& T = Rat(kDefaultPrecision));

std::string format(const EquationSpec& e);

}  // namespace qd
