#pragma once

#include "qdiff/series.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qd {

enum class Side { Left, Right };

// Element sum a_i PHI^i of the skew Laurent ring with PHI f = phi(f) PHI.
// Coefficients with no known nonzero term are not stored.
class SkewOperator {
public:
    SkewOperator() = default;
    SkewOperator(const PuiseuxSeries& a);  // NOLINT: degree-0 operator
    static SkewOperator phi_pow(long long k);
    static SkewOperator term(const PuiseuxSeries& a, long long k);

    bool is_zero() const { return c_.empty(); }
    long long deg_lo() const;
    long long deg_hi() const;
    long long span() const { return deg_hi() - deg_lo(); }
    PuiseuxSeries coeff(long long i) const;
    const std::map<long long, PuiseuxSeries>& terms() const { return c_; }
    void set(long long i, const PuiseuxSeries& a);
    // Smallest coefficient precision; nullopt when every coefficient is exact.
    std::optional<Rat> precision() const;
    bool exact() const { return !precision().has_value(); }
    // lcm of coefficient ramifications.
    long long ram() const;

private:
    std::map<long long, PuiseuxSeries> c_;
};

SkewOperator operator+(const SkewOperator& a, const SkewOperator& b);
SkewOperator operator-(const SkewOperator& a, const SkewOperator& b);
SkewOperator operator-(const SkewOperator& a);
SkewOperator operator*(const SkewOperator& a, const SkewOperator& b);
// Left multiplication by a series.
SkewOperator operator*(const PuiseuxSeries& f, const SkewOperator& a);
bool operator==(const SkewOperator& a, const SkewOperator& b);
inline bool operator!=(const SkewOperator& a, const SkewOperator& b) { return !(a == b); }
// Coefficients agree below the tracked precisions.
bool agree(const SkewOperator& a, const SkewOperator& b);
// PHI^k L PHI^-k, i.e. phi^k applied to every coefficient.
SkewOperator conjugate_phi(const SkewOperator& L, long long k);
// Truncates every coefficient at z-exponent p.
SkewOperator truncate(const SkewOperator& L, const Rat& p);

struct DivResult {
    SkewOperator quotient, remainder;
};
// side = Right: L = Q R + Rem; side = Left: L = R Q + Rem. span(Rem) < span(R).
// trunc bounds the precision of divisions by exact non-monomial coefficients.
DivResult divmod(const SkewOperator& L, const SkewOperator& R, Side side, std::optional<Rat> trunc = std::nullopt);

struct PolygonSegment {
    Rat slope;  // module slope = minus the geometric slope
    long long length;
    long long left, right;  // PHI-degrees of the end vertices
};

struct NewtonPolygon {
    std::vector<std::pair<long long, Rat>> vertices;  // left to right
    std::vector<PolygonSegment> segments;             // increasing module slope
    // Slope multiset, each slope repeated length times.
    std::vector<Rat> slope_multiset() const;
};

NewtonPolygon newton_polygon(const SkewOperator& L);

std::string to_string(const SkewOperator& L);

}  // namespace qd
