#pragma once

#include "qdiff/scalar.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qd {

// Truncated Puiseux series sum c_i z^((lo+i)/n). When inexact, every exponent
// >= prec/n is unknown. Leading and trailing zero coefficients are trimmed.
class PuiseuxSeries {
public:
    PuiseuxSeries() = default;
    PuiseuxSeries(const CoeffScalar& c);  // NOLINT: constants convert implicitly
    PuiseuxSeries(long long c) : PuiseuxSeries(CoeffScalar(c)) {}  // NOLINT
    static PuiseuxSeries monomial(const CoeffScalar& c, const Rat& e);
    static PuiseuxSeries z(const Rat& e = Rat(1)) { return monomial(CoeffScalar(1), e); }
    // Zero with precision O(z^p).
    static PuiseuxSeries big_o(const Rat& p);
    // Build from raw data; trims and applies the precision cut.
    static PuiseuxSeries from_terms(long long n, long long lo, std::vector<CoeffScalar> c, bool exact,
                                    long long prec);

    long long ram() const { return n_; }
    long long lo() const { return lo_; }
    const std::vector<CoeffScalar>& coeffs() const { return c_; }
    bool exact() const { return exact_; }
    long long prec_index() const { return prec_; }
    // Absolute precision; nullopt for exact series.
    std::optional<Rat> prec() const;

    bool is_zero() const { return c_.empty(); }
    bool is_exact_zero() const { return c_.empty() && exact_; }
    // Valuation; throws ZeroDivisor for a series with no known nonzero term.
    Rat val() const;
    // Valuation, or the precision for a truncated zero (never call on exact zero).
    Rat val_or_prec() const;
    CoeffScalar coeff(const Rat& e) const;
    CoeffScalar lead() const;
    bool is_monomial() const { return exact_ && c_.size() == 1; }
    bool is_constant() const;
    bool is_laurent_polynomial() const { return exact_; }
    int scalar_N() const;
    int scalar_M() const;

    PuiseuxSeries ramify(long long n2) const;
    // Drops terms at exponents >= p and marks the series inexact there.
    PuiseuxSeries truncate(const Rat& p) const;
    PuiseuxSeries shift(const Rat& e) const;  // multiply by z^e

private:
    long long n_ = 1;
    long long lo_ = 0;
    std::vector<CoeffScalar> c_;
    bool exact_ = true;
    long long prec_ = 0;
    void normalize();
    friend PuiseuxSeries operator+(const PuiseuxSeries&, const PuiseuxSeries&);
    friend PuiseuxSeries operator*(const PuiseuxSeries&, const PuiseuxSeries&);
};

PuiseuxSeries operator+(const PuiseuxSeries& a, const PuiseuxSeries& b);
PuiseuxSeries operator-(const PuiseuxSeries& a, const PuiseuxSeries& b);
PuiseuxSeries operator-(const PuiseuxSeries& a);
PuiseuxSeries operator*(const PuiseuxSeries& a, const PuiseuxSeries& b);
PuiseuxSeries operator*(const CoeffScalar& c, const PuiseuxSeries& a);
inline PuiseuxSeries operator*(long long c, const PuiseuxSeries& a) { return CoeffScalar(c) * a; }
inline PuiseuxSeries& operator+=(PuiseuxSeries& a, const PuiseuxSeries& b) { return a = a + b; }
inline PuiseuxSeries& operator-=(PuiseuxSeries& a, const PuiseuxSeries& b) { return a = a - b; }
// Structural equality: same known terms and same precision state.
bool operator==(const PuiseuxSeries& a, const PuiseuxSeries& b);
inline bool operator!=(const PuiseuxSeries& a, const PuiseuxSeries& b) { return !(a == b); }
// a and b agree on every exponent below both precisions.
bool agree(const PuiseuxSeries& a, const PuiseuxSeries& b);

// Inverse. Exact non-monomial input needs an absolute truncation point.
PuiseuxSeries inv(const PuiseuxSeries& f, std::optional<Rat> trunc = std::nullopt);
PuiseuxSeries div(const PuiseuxSeries& a, const PuiseuxSeries& b, std::optional<Rat> trunc = std::nullopt);
PuiseuxSeries pow(const PuiseuxSeries& f, long long e, std::optional<Rat> trunc = std::nullopt);
// phi^p: the coefficient at exponent e gets multiplied by q^(p e).
PuiseuxSeries phi_apply(const PuiseuxSeries& f, long long p);
// Same action for p a rational (used after ramifying q).
PuiseuxSeries phi_apply_rat(const PuiseuxSeries& f, const Rat& p);
// Coefficientwise relabelling q -> Q^(1/n) and back.
PuiseuxSeries relabel(const PuiseuxSeries& f, long long n);
PuiseuxSeries unrelabel(const PuiseuxSeries& f, long long n);

std::string to_string(const PuiseuxSeries& f);

// Coefficient window of an element of O (holomorphic on C*), exponents in [-B, B].
class GlobalSeries {
public:
    explicit GlobalSeries(long long B) : B_(B), c_(static_cast<size_t>(2 * B + 1)) {}
    long long bound() const { return B_; }
    const CoeffScalar& at(long long e) const { return c_[static_cast<size_t>(e + B_)]; }
    void set(long long e, const CoeffScalar& v) { c_[static_cast<size_t>(e + B_)] = v; }

private:
    long long B_;
    std::vector<CoeffScalar> c_;
};

GlobalSeries phi_apply(const GlobalSeries& f, long long p);
// Multiplies by c z^k, keeping only exponents that stay inside the window.
GlobalSeries mul_monomial(const GlobalSeries& f, const CoeffScalar& c, long long k);
GlobalSeries theta(long long B);

}  // namespace qd
