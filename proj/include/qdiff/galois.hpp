#pragma once

#include "qdiff/classify.hpp"

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace qd {

// Abstract finitely generated abelian group Z^free_rank x prod Z/torsion[i],
// torsion in divisibility order.
struct AbelianGroup {
    long long free_rank = 0;
    std::vector<long long> torsion;
};

bool operator==(const AbelianGroup& a, const AbelianGroup& b);
std::string to_string(const AbelianGroup& g);

// Subgroup of C*/q^Z generated by the given nonzero classes. Multiplicative
// relations are found exactly: q-power part modulo Z, root-of-unity part, and
// a coprime base of the remaining rational and q-polynomial factors.
AbelianGroup class_group(const std::vector<CoeffScalar>& classes);
// Same, for the pairs (class, slope) inside (C*/q^Z) x Q.
AbelianGroup class_slope_group(const std::vector<std::pair<CoeffScalar, Rat>>& gens);

enum class GaloisShape { RegularSingular, IrreducibleE, IndecomposablePure, SplitCombination, GeneralSkeleton };
std::string to_string(GaloisShape s);

struct GroupDescriptor {
    GaloisShape shape = GaloisShape::RegularSingular;
    long long torus_rank = 0;
    std::vector<long long> finite_invariants;
    bool has_Ga = false;
    std::optional<long long> unipotent_dim;  // nullopt: unknown
    // irreducible_E and indecomposable_pure data; quotient is the component group
    long long n = 1;
    bool nonabelian = false;
    std::vector<long long> quotient_invariants;
    std::vector<TypeMult> types;
    std::optional<AbelianGroup> L;
    std::vector<GroupDescriptor> constituents;
};

// Descriptor computed from the classification. An exact Phi-matrix with several
// slopes is tested for being split; a truncated one is treated as a module over
// the formal field, which is always split.
GroupDescriptor galois_group(const DiffModule& M, const Rat& T = Rat(kDefaultPrecision));
GroupDescriptor galois_group(const std::vector<TypeMult>& types);

// Element of the universal Picard-Vessiot ring: a finite sum of
// coeff * e(u) * e(z^lambda) * ell^k with w(u) = 0.
class PVExpr {
public:
    struct Term {
        CoeffScalar unit;
        Rat lambda;
        long long ell = 0;
        PuiseuxSeries coeff;
    };

    PVExpr() = default;
    PVExpr(const PuiseuxSeries& f);  // NOLINT: series embed as constants
    PVExpr(long long c) : PVExpr(PuiseuxSeries(c)) {}  // NOLINT
    // e(c) = z^(-w(c)) e(c q^(-w(c)))
    static PVExpr e(const CoeffScalar& c);
    static PVExpr ez(const Rat& lambda);
    static PVExpr ell(long long k = 1);
    // Polynomial sum p[k] ell^k.
    static PVExpr ell_poly(const std::vector<mpq_class>& p);
    // Binomial C(ell + s, k) as a polynomial in ell.
    static PVExpr binom_ell(long long k, long long s = 0);

    bool is_zero() const;
    std::vector<Term> terms() const;
    PVExpr phi() const;

    friend PVExpr operator+(const PVExpr& a, const PVExpr& b);
    friend PVExpr operator*(const PVExpr& a, const PVExpr& b);
    friend bool operator==(const PVExpr& a, const PVExpr& b);

private:
    using Key = std::tuple<std::string, Rat, long long>;
    std::map<Key, Term> t_;
    void add(const Term& x);
};

PVExpr operator-(const PVExpr& a);
PVExpr operator-(const PVExpr& a, const PVExpr& b);
inline PVExpr& operator+=(PVExpr& a, const PVExpr& b) { return a = a + b; }
inline bool operator!=(const PVExpr& a, const PVExpr& b) { return !(a == b); }
std::string to_string(const PVExpr& x);

using PVMat = Mat<PVExpr>;
PVMat operator*(const SMat& a, const PVMat& b);
PVMat phi(const PVMat& a);
std::string to_string(const PVMat& a);

struct FundamentalMatrix {
    PVMat U;
    // interpretations of the symbols that occur (display only)
    std::vector<std::string> notes;
};

// Solution matrix with U = B phi(U) for a Phi-matrix that is block diagonal
// (up to a permutation of the basis) with blocks kappa z^t companion (x) U_m.
FundamentalMatrix fundamental_matrix(const DiffModule& M);
// U - B phi(U), every entry normalized.
PVMat fundamental_residual(const DiffModule& M, const PVMat& U);

// Unique formal solution of (c^-1 z^-mu PHI - 1)^m y = 1, to precision T.
// Needs mu > 0 and 0 <= w(c) < mu.
PuiseuxSeries f_series(long long m, const CoeffScalar& c, const Rat& mu, const Rat& T = Rat(kDefaultPrecision));

struct BFactor {
    CoeffScalar c;
    Rat lambda;
    long long m = 1;
};

// Solution of (c_1 z^-l_1 PHI - 1)^m_1 ... (c_r z^-l_r PHI - 1)^m_r f = z^mu.
PuiseuxSeries solve_b(const std::vector<BFactor>& factors, const Rat& mu, const Rat& T = Rat(kDefaultPrecision));
// Applies the left-hand operator of solve_b to f.
PuiseuxSeries apply_b(const std::vector<BFactor>& factors, const PuiseuxSeries& f);

// Residual phi(D f_m) - c z^mu (D f_m + D f_(m-1)) for the derivation with
// D(f_k) = (a_0 C(ell, k-1) + ... + a_(k-1) C(ell, 0)) e(c^-1) e(z^-mu).
PVExpr derivation_check(const std::vector<CoeffScalar>& a, const CoeffScalar& c, const Rat& mu, long long m);

}  // namespace qd
