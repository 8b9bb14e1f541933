#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace qd {

// Dense integer polynomial, c[i] is the coefficient of x^i. Always trimmed.
struct ZPoly {
    std::vector<mpz_class> c;

    ZPoly() = default;
    explicit ZPoly(std::vector<mpz_class> v) : c(std::move(v)) { trim(); }
    static ZPoly constant(const mpz_class& a);

    bool zero() const { return c.empty(); }
    long long degree() const { return static_cast<long long>(c.size()) - 1; }
    void trim();
};

bool operator==(const ZPoly& a, const ZPoly& b);
ZPoly operator+(const ZPoly& a, const ZPoly& b);
ZPoly operator-(const ZPoly& a, const ZPoly& b);
ZPoly operator-(const ZPoly& a);
ZPoly operator*(const ZPoly& a, const ZPoly& b);
ZPoly scale(const ZPoly& a, const mpz_class& k);
// Multiplies by x^k (k >= 0).
ZPoly shift_up(const ZPoly& a, long long k);
// Replaces x by x^r.
ZPoly spread(const ZPoly& a, long long r);
mpz_class content(const ZPoly& a);
void divexact_inplace(ZPoly& a, const mpz_class& k);

// Rational polynomial stored as num/den with den > 0 and gcd(content(num), den) = 1.
struct QPoly {
    ZPoly num;
    mpz_class den = 1;

    QPoly() = default;
    QPoly(ZPoly n, mpz_class d) : num(std::move(n)), den(std::move(d)) { normalize(); }
    static QPoly constant(const mpq_class& a);

    bool zero() const { return num.zero(); }
    long long degree() const { return num.degree(); }
    mpq_class coeff(long long i) const;
    void normalize();
};

bool operator==(const QPoly& a, const QPoly& b);
QPoly operator+(const QPoly& a, const QPoly& b);
QPoly operator-(const QPoly& a, const QPoly& b);
QPoly operator-(const QPoly& a);
QPoly operator*(const QPoly& a, const QPoly& b);
QPoly scale(const QPoly& a, const mpq_class& k);
QPoly shift_up(const QPoly& a, long long k);
QPoly spread(const QPoly& a, long long r);

}  // namespace qd
