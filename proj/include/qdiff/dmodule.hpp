#pragma once

#include "qdiff/matrix.hpp"
#include "qdiff/skew.hpp"

#include <optional>

namespace qd {

constexpr long long kDefaultPrecision = 32;

// Difference module with basis e. B is the Phi-matrix, Phi e_j = sum_i B_ij e_i.
// A is the equation matrix of Y = A phi(Y), tied to B by B = (A^T)^-1, so the
// rank-one module Phi e = c e has A = (1/c). A is kept when known and computed
// on demand (to precision T) otherwise.
struct DiffModule {
    SMat B;
    std::optional<SMat> A_known;
    Rat T = Rat(kDefaultPrecision);

    size_t dim() const { return B.rows(); }
    SMat A() const;
    static DiffModule from_A(const SMat& A, const Rat& T = Rat(kDefaultPrecision));
    static DiffModule from_B(const SMat& B, const Rat& T = Rat(kDefaultPrecision));
};

// Companion module of a monic L = PHI^m + sum_{i<m} a_i PHI^i with a_0 != 0.
DiffModule companion(const SkewOperator& L, const Rat& T = Rat(kDefaultPrecision));

struct CyclicResult {
    SkewOperator op;  // monic, degree dim
    SMat vector;      // cyclic vector, column in the basis e
    SMat basis;       // columns Phi^i of the vector
};
CyclicResult cyclic_vector(const DiffModule& M, const Rat& T = Rat(kDefaultPrecision));

enum class ConstructKind { DSum, Tensor, Hom, Dual };
DiffModule construct(ConstructKind kind, const DiffModule& M, const DiffModule& N);

// Y = U Y': A -> U^-1 A phi(U).
DiffModule gauge_transform(const DiffModule& M, const SMat& U, const Rat& T = Rat(kDefaultPrecision));
// New basis f = e P: B -> P^-1 B phi(P).
DiffModule gauge_phi(const DiffModule& M, const SMat& P, const Rat& T = Rat(kDefaultPrecision));

// Divides by the leading coefficient and shifts so that the lowest PHI-degree is 0.
SkewOperator monic_normalize(const SkewOperator& L, const Rat& T);

}  // namespace qd
