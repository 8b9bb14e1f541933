#pragma once

#include "qdiff/cyclo.hpp"
#include "qdiff/rational.hpp"

#include <optional>
#include <string>
#include <utility>

namespace qd {

// Element of Q(zeta_M)(q^(1/N)). With s = q^(1/N) the value is
// s^k * num(s) / den(s), where num(0) != 0, den(0) = 1 and gcd(num, den) = 1.
// That form is unique, so equality is structural after lifting to common M, N.
class CoeffScalar {
public:
    CoeffScalar() : num_(1), den_(CPoly::constant(Cyclo::rational(1))) {}
    CoeffScalar(long long n);  // NOLINT: integers convert implicitly
    explicit CoeffScalar(const mpq_class& r);
    explicit CoeffScalar(const Cyclo& c);
    static CoeffScalar qpow(const Rat& e);
    static CoeffScalar zeta(int M, long long k);
    // Builds and reduces s^k num/den with s = q^(1/N).
    static CoeffScalar make(int N, long long k, CPoly num, CPoly den);

    bool is_zero() const { return num_.zero(); }
    bool is_one() const;
    int N() const { return N_; }
    int M() const { return num_.M; }
    long long k() const { return k_; }
    const CPoly& num() const { return num_; }
    const CPoly& den() const { return den_; }
    bool den_one() const { return den_one_; }

    // q-order valuation; throws ZeroScalar on zero.
    Rat w() const;
    // Coefficient of the lowest q-power (a nonzero cyclotomic number).
    Cyclo lead() const;
    // True when the value is a single term rho * q^e.
    bool is_monomial() const;
    bool is_constant() const;  // element of Q(zeta_M)

    CoeffScalar lift(int N2, int M2) const;
    // Smallest N and M able to hold the value.
    CoeffScalar canonical() const;
    CoeffScalar mul_qpow(const Rat& e) const;
    // Reinterprets a q-scalar as a Q-scalar where q = Q^(1/n).
    CoeffScalar relabel(long long n) const;
    // Inverse of relabel: a Q-scalar with Q = q^n rewritten in q.
    CoeffScalar unrelabel(long long n) const;

private:
    int N_ = 1;
    long long k_ = 0;
    CPoly num_, den_;
    bool den_one_ = true;
    void reduce();
};

CoeffScalar operator+(const CoeffScalar& a, const CoeffScalar& b);
CoeffScalar operator-(const CoeffScalar& a, const CoeffScalar& b);
CoeffScalar operator-(const CoeffScalar& a);
CoeffScalar operator*(const CoeffScalar& a, const CoeffScalar& b);
inline CoeffScalar operator*(long long a, const CoeffScalar& b) { return CoeffScalar(a) * b; }
CoeffScalar operator/(const CoeffScalar& a, const CoeffScalar& b);
CoeffScalar inv(const CoeffScalar& a);
CoeffScalar pow(const CoeffScalar& a, long long e);
bool operator==(const CoeffScalar& a, const CoeffScalar& b);
inline bool operator!=(const CoeffScalar& a, const CoeffScalar& b) { return !(a == b); }
inline CoeffScalar& operator+=(CoeffScalar& a, const CoeffScalar& b) { return a = a + b; }
inline CoeffScalar& operator-=(CoeffScalar& a, const CoeffScalar& b) { return a = a - b; }
inline CoeffScalar& operator*=(CoeffScalar& a, const CoeffScalar& b) { return a = a * b; }

// Exact string in the input grammar, e.g. "1+q-2*q^3", "zeta_3*q^(1/2)".
std::string to_string(const CoeffScalar& c);

// c = q^k * u with w(u) = 0.
std::pair<Rat, CoeffScalar> normalize_scalar(const CoeffScalar& c);
// k with c = q^(k/n) exactly.
std::optional<long long> q_power_class(const CoeffScalar& c, long long n);
// Order of c in C*/q^Z, empty when infinite.
std::optional<long long> torsion_order(const CoeffScalar& c);
// Representative of c modulo q^Z with 0 <= w < 1.
CoeffScalar fundamental_rep(const CoeffScalar& c);

}  // namespace qd
