#pragma once

#include "qdiff/poly.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace qd {

// Power basis data for Q(zeta_M): pow[k] holds x^k mod Phi_M for 0 <= k < M.
struct CycloTable {
    int M = 1;
    int deg = 1;
    std::vector<mpz_class> phi;  // Phi_M, ascending, monic
    std::vector<std::vector<mpz_class>> pow;
};

const CycloTable& cyclo_table(int M);
int euler_phi(int M);

// Element of Q(zeta_M) in the power basis 1, zeta, ..., zeta^(deg-1).
class Cyclo {
public:
    Cyclo() : M_(1), a_(1, mpq_class(0)) {}
    Cyclo(int M, std::vector<mpq_class> a);
    static Cyclo rational(const mpq_class& r, int M = 1);
    static Cyclo zeta(int M, long long k);

    int M() const { return M_; }
    const std::vector<mpq_class>& coeffs() const { return a_; }
    bool is_zero() const;
    bool is_one() const;
    bool is_rational() const;
    mpq_class rational_part() const { return a_[0]; }
    // Shrinks M when every non-constant basis coefficient vanishes.
    Cyclo reduced() const;

private:
    int M_;
    std::vector<mpq_class> a_;
};

Cyclo embed(const Cyclo& c, int M2);
Cyclo operator+(const Cyclo& a, const Cyclo& b);
Cyclo operator-(const Cyclo& a, const Cyclo& b);
Cyclo operator-(const Cyclo& a);
Cyclo operator*(const Cyclo& a, const Cyclo& b);
Cyclo inverse(const Cyclo& a);
Cyclo pow(const Cyclo& a, long long e);
bool operator==(const Cyclo& a, const Cyclo& b);
inline bool operator!=(const Cyclo& a, const Cyclo& b) { return !(a == b); }
// Multiplicative order if a is a root of unity, else 0.
long long root_of_unity_order(const Cyclo& a);
mpq_class norm_to_q(const Cyclo& a);
// Rewrites a in the basis of Q(zeta_d) when it lies in that subfield (d | M).
std::optional<Cyclo> restrict_to(const Cyclo& a, int d);
std::string to_string(const Cyclo& a);

// Polynomial in s over Q(zeta_M), stored as deg(M) rational polynomials,
// one per power-basis element.
struct CPoly {
    int M = 1;
    std::vector<QPoly> comp;

    CPoly() : M(1), comp(1) {}
    explicit CPoly(int m);
    static CPoly constant(const Cyclo& c);
    static CPoly monomial(const Cyclo& c, long long k);

    bool zero() const;
    long long degree() const;
    long long low_order() const;  // -1 for zero
    Cyclo coeff(long long i) const;
    bool is_one() const;
    bool is_constant() const { return degree() <= 0; }
    size_t term_count() const;
};

bool operator==(const CPoly& a, const CPoly& b);
CPoly operator+(const CPoly& a, const CPoly& b);
CPoly operator-(const CPoly& a, const CPoly& b);
CPoly operator-(const CPoly& a);
CPoly operator*(const CPoly& a, const CPoly& b);
CPoly scale(const CPoly& a, const Cyclo& c);
CPoly scale(const CPoly& a, const mpq_class& c);
CPoly shift_up(const CPoly& a, long long k);
CPoly shift_down(const CPoly& a, long long k);  // exact division by s^k
CPoly spread(const CPoly& a, long long r);
CPoly embed(const CPoly& a, int M2);
void divrem(const CPoly& a, const CPoly& b, CPoly& q, CPoly& r);
// gcd normalized to constant term 1; requires nonzero constant terms.
CPoly gcd_unit_const(const CPoly& a, const CPoly& b);
CPoly divexact(const CPoly& a, const CPoly& b);

}  // namespace qd
