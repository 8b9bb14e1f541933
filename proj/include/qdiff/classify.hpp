#pragma once

#include "qdiff/dmodule.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qd {

// Slope filtration of a nonzero operator: L = lead * PHI^shift * normalized and
// normalized = factors[0] * factors[1] * ... with strictly increasing pure slopes.
struct Filtration {
    SkewOperator normalized;
    PuiseuxSeries lead;
    long long shift = 0;
    std::vector<SkewOperator> factors;
    std::vector<Rat> slopes;
    // normalized - product of factors, known to vanish below residual_precision
    // (nullopt: exactly)
    SkewOperator residual;
    std::optional<Rat> residual_precision;
};

Filtration slope_filtration(const SkewOperator& L, const Rat& T = Rat(kDefaultPrecision));

// Regular singular normal form: a constant Phi-matrix W whose eigenvalues have
// 0 <= w < 1/r (r the z-ramification), and a gauge P with P^-1 B phi(P) = W.
struct RSNormalForm {
    CMat W;
    std::optional<SMat> gauge;  // computed on request
    SMat sheared;               // B after the shearing steps, constant part W
};

RSNormalForm rs_normalize(const DiffModule& M, const Rat& T = Rat(kDefaultPrecision), bool want_gauge = false);

// Eigenvalues with Jordan block sizes (descending) of a constant matrix.
struct JordanData {
    CoeffScalar eigenvalue;
    std::vector<long long> blocks;
};
std::vector<JordanData> jordan_structure(const CMat& W, const std::vector<CoeffScalar>& hints = {});

// Formal type E(c z^(t/n)) (x) U_m: slope t/n, the class of c^n normalized to
// 0 <= w < 1, and the unipotent size m.
struct PureType {
    Rat slope;
    CoeffScalar cls;
    long long m = 1;
};

struct TypeMult {
    PureType type;
    long long mult = 1;
};

// Canonically sorted list of types with multiplicities.
std::vector<TypeMult> formal_decompose(const DiffModule& M, const Rat& T = Rat(kDefaultPrecision));
std::vector<TypeMult> formal_decompose(const SkewOperator& L, const Rat& T = Rat(kDefaultPrecision));

bool same_type(const PureType& a, const PureType& b);
std::string to_string(const PureType& t);

// Module of the normal form E(c z^(t/n)) (x) U_m with Phi-matrix in companion shape.
DiffModule pure_module(const PureType& t);

enum class LatticeCase { RegularSingular, Pure, TwoSlopes };

struct GlobalLattice {
    LatticeCase kind;
    DiffModule normal_form;  // entries in C[z, 1/z]
    std::vector<Rat> slopes;
};

// Global normal form over the punctured plane for the supported shapes;
// more than two slopes raises UnsupportedShape.
GlobalLattice global_lattice(const DiffModule& M, const Rat& T = Rat(kDefaultPrecision));

}  // namespace qd
