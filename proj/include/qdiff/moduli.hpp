#pragma once

#include "qdiff/classify.hpp"

#include <string>
#include <vector>

namespace qd {

// One pure piece of the graded module: its slope and K-dimension.
struct GradedBlock {
    Rat slope;
    long long dim = 0;
};

// Groups a type list by slope (ascending).
std::vector<GradedBlock> graded_blocks(const std::vector<TypeMult>& types);

// N = sum_{i<j} (slope_j - slope_i) dim_i dim_j. The slopes must increase
// strictly; a non-integral value raises NonIntegralDimension.
Rat moduli_dimension_value(const std::vector<GradedBlock>& blocks);
long long moduli_dimension(const std::vector<GradedBlock>& blocks);

// Matrix unit z^exp E_(row,col) of an extension block.
struct MonomialUnit {
    size_t row = 0, col = 0;
    Rat exp;
};

// X reduced modulo the twisted coboundaries B1 phi(Y) - Y B2.
struct ExtensionReduction {
    SMat X;                            // supported on the window
    std::vector<MonomialUnit> window;  // the cokernel basis, lexicographic
    std::vector<CoeffScalar> coords;   // coefficients of X on the window
};

// B1, B2 pure blocks with slope(B1) < slope(B2); all three matrices exact.
ExtensionReduction reduce_extension(const SMat& B1, const SMat& B2, const SMat& X, long long N);

struct ModuliPoint {
    std::vector<GradedBlock> graded;
    std::vector<TypeMult> sub_types, quotient_types;
    long long N = 0;
    size_t split = 0;  // dimension of the sub-block
    std::vector<MonomialUnit> window;
    std::vector<CoeffScalar> coords;
    DiffModule normal_form;
};

// M must be presented in filtered form [[B1, X], [0, B2]] with exact entries,
// B1 and B2 pure of slopes s1 < s2.
ModuliPoint moduli_point(const DiffModule& M, const Rat& T = Rat(kDefaultPrecision));

// B -> P^-1 B phi(P) for P = [[1, Y], [0, 1]] with Y of size split x (n - split).
// Exact when B and Y are.
DiffModule extension_gauge(const DiffModule& M, size_t split, const SMat& Y);

// PHI e1 = e1, PHI e2 = (-z)^t e2 + (x_0 + ... + x_{t-1} z^{t-1}) e1.
struct UniversalFamily {
    long long t = 1;
    std::vector<std::string> parameters() const;
    std::string text() const;
    DiffModule instantiate(const std::vector<CoeffScalar>& x) const;
};

UniversalFamily universal_family(long long t);

}  // namespace qd
