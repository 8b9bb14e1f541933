#include "qdiff/moduli.hpp"

#include "qdiff/errors.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <tuple>

namespace qd {

std::vector<GradedBlock> graded_blocks(const std::vector<TypeMult>& types) {
    std::map<Rat, long long> dims;
    for (const auto& tm : types) dims[tm.type.slope] += tm.type.slope.denominator() * tm.type.m * tm.mult;
    std::vector<GradedBlock> out;
    for (const auto& [s, d] : dims) out.push_back({s, d});
    return out;
}

Rat moduli_dimension_value(const std::vector<GradedBlock>& blocks) {
    for (size_t i = 1; i < blocks.size(); ++i)
        if (!(blocks[i - 1].slope < blocks[i].slope))
            fail(ErrorKind::InvalidArgument, "graded blocks must have strictly increasing slopes");
    Rat N(0);
    for (size_t i = 0; i < blocks.size(); ++i)
        for (size_t j = i + 1; j < blocks.size(); ++j)
            N += (blocks[j].slope - blocks[i].slope) * Rat(blocks[i].dim * blocks[j].dim);
    return N;
}

long long moduli_dimension(const std::vector<GradedBlock>& blocks) {
    Rat N = moduli_dimension_value(blocks);
    if (!is_integer(N)) fail(ErrorKind::NonIntegralDimension, "moduli dimension " + rat_str(N) + " is not an integer");
    return N.numerator();
}

namespace {

using Term = std::pair<long long, CoeffScalar>;  // exponent index K (z^(K/r)), coefficient

std::vector<Term> terms(const PuiseuxSeries& f, long long r) {
    std::vector<Term> out;
    const long long step = r / f.ram();
    for (size_t i = 0; i < f.coeffs().size(); ++i)
        if (!f.coeffs()[i].is_zero())
            out.emplace_back((f.lo() + static_cast<long long>(i)) * step, f.coeffs()[i]);
    return out;
}

// Order on positions: far from the center first, ties to the larger exponent.
struct Key {
    long long dist;
    long long negK;
    size_t a, b;
    bool operator<(const Key& o) const { return std::tie(o.dist, negK, a, b) < std::tie(dist, o.negK, o.a, o.b); }
    bool operator==(const Key& o) const { return dist == o.dist && negK == o.negK && a == o.a && b == o.b; }
};

using Vec = std::map<Key, CoeffScalar>;

struct Reducer {
    long long r, center4;  // 4 r c
    std::map<Key, Vec> pivots;

    Key key(size_t a, size_t b, long long K) const {
        long long d = 4 * K - center4;
        return Key{d < 0 ? -d : d, -K, a, b};
    }

    void axpy(Vec& v, const CoeffScalar& f, const Vec& w) const {
        for (const auto& [k, x] : w) {
            auto it = v.find(k);
            if (it == v.end()) {
                v.emplace(k, -(f * x));
            } else {
                it->second -= f * x;
                if (it->second.is_zero()) v.erase(it);
            }
        }
    }

    void reduce(Vec& v) const {
        auto it = v.begin();
        while (it != v.end()) {
            auto p = pivots.find(it->first);
            if (p == pivots.end()) {
                ++it;
                continue;
            }
            const Key k = it->first;
            const CoeffScalar f = it->second / p->second.begin()->second;
            axpy(v, f, p->second);
            it = v.upper_bound(k);
        }
    }

    void insert(Vec v) {
        reduce(v);
        if (v.empty()) return;
        Key lead = v.begin()->first;
        pivots.emplace(lead, std::move(v));
    }
};

struct Exps {
    long long lo = 0, hi = 0;
    bool any = false;
    void add(long long K) {
        if (!any) lo = hi = K;
        lo = std::min(lo, K);
        hi = std::max(hi, K);
        any = true;
    }
};

Exps exponent_range(const SMat& m, long long r) {
    Exps e;
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j)
            for (const auto& t : terms(m(i, j), r)) e.add(t.first);
    if (!e.any) e.add(0);
    return e;
}

struct Attempt {
    std::vector<Key> window;  // closest to the center first
    Vec remainder;
};

// Non-pivot positions farther than `inner` from both ends of the range form the window.
Attempt attempt(const SMat& B1, const SMat& B2, const Vec& x, const Reducer& base, long long Elo, long long Ehi,
                long long inner) {
    Reducer red = base;
    std::vector<std::vector<std::vector<Term>>> t1(B1.rows()), t2(B2.rows());
    for (size_t i = 0; i < B1.rows(); ++i)
        for (size_t j = 0; j < B1.cols(); ++j) t1[i].push_back(terms(B1(i, j), red.r));
    for (size_t i = 0; i < B2.rows(); ++i)
        for (size_t j = 0; j < B2.cols(); ++j) t2[i].push_back(terms(B2(i, j), red.r));
    const size_t k = B1.rows(), l = B2.rows();
    std::map<Key, bool> seen;
    for (long long K = Ehi; K >= Elo; --K) {
        const CoeffScalar qK = CoeffScalar::qpow(Rat(K, red.r));
        for (size_t a = 0; a < k; ++a)
            for (size_t b = 0; b < l; ++b) {
                // image of z^(K/r) E_ab under Y -> B1 phi(Y) - Y B2
                Vec v;
                auto add = [&](size_t i, size_t j, long long e, const CoeffScalar& c) {
                    Key kk = red.key(i, j, e);
                    seen[kk] = true;
                    auto it = v.find(kk);
                    if (it == v.end()) {
                        v.emplace(kk, c);
                    } else {
                        it->second += c;
                        if (it->second.is_zero()) v.erase(it);
                    }
                };
                for (size_t i = 0; i < k; ++i)
                    for (const auto& [f, c] : t1[i][a]) add(i, b, K + f, c * qK);
                for (size_t j = 0; j < l; ++j)
                    for (const auto& [f, c] : t2[b][j]) add(a, j, K + f, -c);
                red.insert(std::move(v));
            }
    }
    Attempt out;
    for (auto it = seen.rbegin(); it != seen.rend(); ++it) {
        const long long K = -it->first.negK;
        if (K >= Elo + inner && K <= Ehi - inner && !red.pivots.count(it->first)) out.window.push_back(it->first);
    }
    out.remainder = x;
    red.reduce(out.remainder);
    return out;
}

}  // namespace

ExtensionReduction reduce_extension(const SMat& B1, const SMat& B2, const SMat& X, long long N) {
    if (!exact(B1) || !exact(B2) || !exact(X))
        fail(ErrorKind::PrecisionExhausted, "extension reduction needs exact Laurent-polynomial blocks");
    long long r = lcm_ll(lcm_ll(ram(B1), ram(B2)), ram(X));
    Exps e1 = exponent_range(B1, r), e2 = exponent_range(B2, r), ex = exponent_range(X, r);
    Reducer base;
    base.r = r;
    base.center4 = e2.lo + e2.hi - e1.lo - e1.hi - 2;
    const long long c = base.center4 / 4;

    Vec x;
    for (size_t i = 0; i < X.rows(); ++i)
        for (size_t j = 0; j < X.cols(); ++j)
            for (const auto& [K, v] : terms(X(i, j), r)) x.emplace(base.key(i, j, K), v);

    const long long spread = std::max({std::abs(e1.lo), std::abs(e1.hi), std::abs(e2.lo), std::abs(e2.hi), r});
    long long W = 4 * spread + 4 * r + 8;
    for (int tries = 0; tries < 4; ++tries, W *= 2) {
        const long long Elo = std::min(ex.lo, c) - W, Ehi = std::max(ex.hi, c) + W;
        Attempt a = attempt(B1, B2, x, base, Elo, Ehi, W / 2);
        Attempt b = attempt(B1, B2, Vec{}, base, Elo - 4 * r - 4, Ehi + 4 * r + 4, W / 2 + 4 * r + 4);
        if (a.window.size() != static_cast<size_t>(N) || !(a.window == b.window)) continue;
        bool inside = true;
        for (const auto& [k, v] : a.remainder)
            if (std::find(a.window.begin(), a.window.end(), k) == a.window.end()) inside = false;
        if (!inside) continue;

        ExtensionReduction out;
        std::vector<std::tuple<size_t, size_t, long long>> units;
        for (const auto& k : a.window) units.emplace_back(k.a, k.b, -k.negK);
        std::sort(units.begin(), units.end());
        out.X = SMat(X.rows(), X.cols());
        for (const auto& [i, j, K] : units) {
            out.window.push_back({i, j, Rat(K, r)});
            auto it = a.remainder.find(base.key(i, j, K));
            CoeffScalar v = it == a.remainder.end() ? CoeffScalar(0) : it->second;
            out.coords.push_back(v);
            if (!v.is_zero()) out.X(i, j) += PuiseuxSeries::monomial(v, Rat(K, r));
        }
        return out;
    }
    fail(ErrorKind::PrecisionExhausted, "extension reduction did not stabilize");
}

ModuliPoint moduli_point(const DiffModule& M, const Rat& T) {
    const SMat& B = M.B;
    const size_t n = M.dim();
    if (!exact(B)) fail(ErrorKind::PrecisionExhausted, "moduli coordinates need an exact Phi-matrix");
    for (size_t k = 1; k < n; ++k) {
        bool lower_zero = true;
        for (size_t i = k; i < n && lower_zero; ++i)
            for (size_t j = 0; j < k; ++j)
                if (!B(i, j).is_exact_zero()) {
                    lower_zero = false;
                    break;
                }
        if (!lower_zero) continue;
        SMat B1 = submatrix(B, 0, 0, k, k), B2 = submatrix(B, k, k, n - k, n - k);
        auto pure_slope = [&](const std::vector<TypeMult>& ts) -> std::optional<Rat> {
            for (const auto& t : ts)
                if (t.type.slope != ts.front().type.slope) return std::nullopt;
            return ts.front().type.slope;
        };
        auto t1 = formal_decompose(DiffModule::from_B(B1, T), T);
        auto s1 = pure_slope(t1);
        if (!s1) continue;
        auto t2 = formal_decompose(DiffModule::from_B(B2, T), T);
        auto s2 = pure_slope(t2);
        if (!s2 || !(*s1 < *s2)) continue;

        ModuliPoint P;
        P.graded = {{*s1, static_cast<long long>(k)}, {*s2, static_cast<long long>(n - k)}};
        P.sub_types = t1;
        P.quotient_types = t2;
        P.N = moduli_dimension(P.graded);
        P.split = k;
        ExtensionReduction red = reduce_extension(B1, B2, submatrix(B, 0, k, k, n - k), P.N);
        P.window = red.window;
        P.coords = red.coords;
        SMat NB = B;
        for (size_t i = 0; i < k; ++i)
            for (size_t j = k; j < n; ++j) NB(i, j) = red.X(i, j - k);
        P.normal_form = DiffModule::from_B(NB, T);
        return P;
    }
    fail(ErrorKind::UnsupportedShape, "module is not an extension of two pure blocks of increasing slope");
}

DiffModule extension_gauge(const DiffModule& M, size_t split, const SMat& Y) {
    const size_t n = M.dim();
    SMat P = SMat::identity(n), Pinv = SMat::identity(n);
    for (size_t i = 0; i < split; ++i)
        for (size_t j = split; j < n; ++j) {
            P(i, j) = Y(i, j - split);
            Pinv(i, j) = -Y(i, j - split);
        }
    return DiffModule::from_B(Pinv * M.B * phi_apply(P, 1), M.T);
}

std::vector<std::string> UniversalFamily::parameters() const {
    std::vector<std::string> out;
    for (long long k = 0; k < t; ++k) out.push_back("x" + std::to_string(k));
    return out;
}

std::string UniversalFamily::text() const {
    std::string x;
    for (long long k = 0; k < t; ++k) {
        if (k) x += " + ";
        x += "x" + std::to_string(k);
        if (k == 1) x += "*z";
        if (k > 1) x += "*z^" + std::to_string(k);
    }
    return "PHI e1 = e1, PHI e2 = (-z)^" + std::to_string(t) + "*e2 + (" + x + ")*e1";
}

DiffModule UniversalFamily::instantiate(const std::vector<CoeffScalar>& x) const {
    if (static_cast<long long>(x.size()) != t)
        fail(ErrorKind::InvalidArgument, "universal family of t=" + std::to_string(t) + " needs " +
                                             std::to_string(t) + " coordinates");
    SMat B(2, 2);
    B(0, 0) = PuiseuxSeries(1);
    B(1, 1) = PuiseuxSeries::monomial(CoeffScalar(t % 2 == 0 ? 1 : -1), Rat(t));
    for (long long k = 0; k < t; ++k)
        if (!x[static_cast<size_t>(k)].is_zero()) B(0, 1) += PuiseuxSeries::monomial(x[static_cast<size_t>(k)], Rat(k));
    return DiffModule::from_B(B);
}

UniversalFamily universal_family(long long t) {
    if (t < 1) fail(ErrorKind::InvalidArgument, "universal family needs t >= 1");
    UniversalFamily f;
    f.t = t;
    return f;
}

}  // namespace qd
