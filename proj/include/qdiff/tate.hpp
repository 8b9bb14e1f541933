#pragma once

#include "qdiff/classify.hpp"

#include <vector>

namespace qd {

// Dimensions of kernel and cokernel of PHI - 1 on holomorphic sections over C*.
struct CohomologyReport {
    long long h0 = 0, h1 = 0;
    // h0 vectors, one GlobalSeries per basis component
    std::vector<std::vector<GlobalSeries>> kernel;
    long long window = 0;
};

// B must be an exact Laurent-polynomial Phi-matrix with integral exponents. The
// answer is computed at window and window + 4; disagreement raises WindowTooSmall.
CohomologyReport cohomology(const DiffModule& M, long long window = 20);

struct BundleInvariants {
    long long rank = 0, degree = 0;
};

BundleInvariants bundle_invariants(const std::vector<TypeMult>& types);

}  // namespace qd
