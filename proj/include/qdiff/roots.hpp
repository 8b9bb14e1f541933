#pragma once

#include "qdiff/scalar.hpp"

#include <vector>

namespace qd {

// Polynomial in Y over the coefficient field, ascending coefficients.
using FPoly = std::vector<CoeffScalar>;

void trim(FPoly& p);
long long degree(const FPoly& p);
CoeffScalar eval(const FPoly& p, const CoeffScalar& y);
FPoly derivative(const FPoly& p);
FPoly operator*(const FPoly& a, const FPoly& b);
void divrem(const FPoly& a, const FPoly& b, FPoly& quo, FPoly& rem);
FPoly gcd(const FPoly& a, const FPoly& b);  // monic
// p(Y + r).
FPoly taylor_shift(const FPoly& p, const CoeffScalar& r);

struct Root {
    CoeffScalar value;
    int mult;
};

// All roots with multiplicity; throws EigenvalueNotInField when some root is
// not found in Q(zeta_M)(q^(1/N)) for any of the tried enlargements. Hints are
// tested first.
std::vector<Root> roots(const FPoly& p, const std::vector<CoeffScalar>& hints = {});

// Roots of u^l = a inside cyclotomic extensions; empty if a is not a root of
// unity times a rational l-th power.
std::vector<Cyclo> binomial_roots(long long l, const Cyclo& a);

}  // namespace qd
