#include "qdiff/roots.hpp"

#include "qdiff/errors.hpp"
#include "qdiff/matrix.hpp"

#include <algorithm>
#include <numeric>

namespace qd {

void trim(FPoly& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

long long degree(const FPoly& p) {
    for (size_t i = p.size(); i-- > 0;)
        if (!p[i].is_zero()) return static_cast<long long>(i);
    return -1;
}

CoeffScalar eval(const FPoly& p, const CoeffScalar& y) {
    CoeffScalar r(0);
    for (size_t i = p.size(); i-- > 0;) r = r * y + p[i];
    return r;
}

FPoly derivative(const FPoly& p) {
    FPoly d;
    for (size_t i = 1; i < p.size(); ++i) d.push_back(static_cast<long long>(i) * p[i]);
    trim(d);
    return d;
}

FPoly operator*(const FPoly& a, const FPoly& b) {
    if (a.empty() || b.empty()) return {};
    FPoly r(a.size() + b.size() - 1, CoeffScalar(0));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    trim(r);
    return r;
}

void divrem(const FPoly& a, const FPoly& b, FPoly& quo, FPoly& rem) {
    FPoly bb = b;
    trim(bb);
    if (bb.empty()) fail(ErrorKind::ZeroDivisor, "polynomial division by zero");
    rem = a;
    trim(rem);
    const size_t db = bb.size() - 1;
    quo.assign(rem.size() > db ? rem.size() - db : 0, CoeffScalar(0));
    CoeffScalar li = inv(bb.back());
    while (rem.size() > db) {
        size_t s = rem.size() - 1 - db;
        CoeffScalar f = rem.back() * li;
        quo[s] = f;
        for (size_t j = 0; j <= db; ++j) rem[s + j] -= f * bb[j];
        rem.pop_back();
        trim(rem);
    }
    trim(quo);
}

FPoly gcd(const FPoly& a, const FPoly& b) {
    FPoly x = a, y = b;
    trim(x);
    trim(y);
    while (!y.empty()) {
        FPoly q, r;
        divrem(x, y, q, r);
        x = std::move(y);
        y = std::move(r);
    }
    if (x.empty()) return x;
    CoeffScalar li = inv(x.back());
    for (auto& c : x) c = c * li;
    return x;
}

FPoly taylor_shift(const FPoly& p, const CoeffScalar& r) {
    FPoly out;
    for (size_t i = p.size(); i-- > 0;) {
        // out = out * (Y + r) + p[i]
        FPoly next(out.size() + 1, CoeffScalar(0));
        for (size_t j = 0; j < out.size(); ++j) {
            next[j + 1] += out[j];
            next[j] += out[j] * r;
        }
        next[0] += p[i];
        out = std::move(next);
    }
    trim(out);
    return out;
}

namespace {

mpz_class exact_root(const mpz_class& a, unsigned long l, bool& ok) {
    mpz_class r;
    ok = mpz_root(r.get_mpz_t(), a.get_mpz_t(), l) != 0;
    return r;
}

std::vector<mpz_class> divisors(mpz_class n) {
    if (n < 0) n = -n;
    std::vector<mpz_class> out;
    if (n == 0 || n > mpz_class("1000000000000")) return out;
    for (mpz_class d = 1; d * d <= n; ++d)
        if (n % d == 0) {
            out.push_back(d);
            if (d * d != n) out.push_back(n / d);
        }
    return out;
}

using CPolyU = std::vector<Cyclo>;  // polynomial in u over Q(zeta)

Cyclo ceval(const CPolyU& p, const Cyclo& u) {
    int M = u.M();
    for (const auto& c : p) M = std::lcm(M, c.M());
    Cyclo r = Cyclo::rational(0, M), uu = embed(u, M);
    for (size_t i = p.size(); i-- > 0;) r = r * uu + embed(p[i], M);
    return r;
}

// Divides by (u - r), assuming r is a root.
CPolyU cdeflate(const CPolyU& p, const Cyclo& r) {
    CPolyU q(p.size() - 1);
    Cyclo carry = Cyclo::rational(0);
    for (size_t i = p.size(); i-- > 1;) {
        carry = carry * r + p[i];
        q[i - 1] = carry;
    }
    return q;
}

void add_root(std::vector<Cyclo>& out, const Cyclo& r) {
    Cyclo rr = r.reduced();
    for (const auto& x : out)
        if (x == rr) return;
    out.push_back(rr);
}

// Distinct roots in cyclotomic fields of a polynomial with E(0) != 0.
std::vector<Cyclo> edge_roots(CPolyU E) {
    std::vector<Cyclo> out;
    while (!E.empty() && E.back().is_zero()) E.pop_back();
    if (E.size() <= 1) return out;
    if (E.size() == 2) {
        add_root(out, -(E[0] * inverse(E[1])));
        return out;
    }
    // polynomial in u^g
    long long g = 0;
    for (size_t i = 1; i < E.size(); ++i)
        if (!E[i].is_zero()) g = std::gcd(g, static_cast<long long>(i));
    if (g > 1) {
        CPolyU R;
        for (size_t i = 0; i < E.size(); i += static_cast<size_t>(g)) R.push_back(E[i]);
        for (const auto& v : edge_roots(R))
            for (const auto& u : binomial_roots(g, v)) add_root(out, u);
        return out;
    }
    // candidates eps * r: rational r from divisor ratios, eps a root of unity
    int M = 1;
    for (const auto& c : E) M = std::lcm(M, c.M());
    mpq_class n0 = norm_to_q(E.front()), nd = norm_to_q(E.back());
    std::vector<mpq_class> rats;
    for (const auto& p : divisors(n0.get_num() * nd.get_den()))
        for (const auto& q : divisors(nd.get_num() * n0.get_den())) rats.push_back(mpq_class(p, q));
    std::vector<int> orders = {std::lcm(2, M)};
    for (int extra : {3, 4, 5, 8, 12}) {
        int L = std::lcm(std::lcm(2, M), extra);
        if (std::find(orders.begin(), orders.end(), L) == orders.end()) orders.push_back(L);
    }
    CPolyU cur = E;
    for (int L : orders) {
        for (long long k = 0; k < L && cur.size() > 1; ++k) {
            Cyclo eps = Cyclo::zeta(L, k);
            if (root_of_unity_order(eps) != L / std::gcd<long long>(L, k)) continue;
            for (const auto& r : rats) {
                if (cur.size() <= 1) break;
                Cyclo cand = eps * Cyclo::rational(r, L);
                while (cur.size() > 1 && ceval(cur, cand).is_zero()) {
                    add_root(out, cand);
                    cur = cdeflate(cur, Cyclo::rational(0, L) + cand);
                }
            }
        }
        if (cur.size() <= 1) break;
        if (cur.size() == 2) {
            add_root(out, -(cur[0] * inverse(cur[1])));
            break;
        }
    }
    return out;
}

struct Finder {
    FPoly original;          // squarefree
    std::vector<CoeffScalar> found;
    int max_depth = 48;

    void record(const CoeffScalar& r) {
        for (const auto& x : found)
            if (x == r) return;
        found.push_back(r);
    }

    // Rational reconstruction of the partial expansion sum rho_j q^(sigma_j).
    std::optional<CoeffScalar> pade(const std::vector<std::pair<Cyclo, Rat>>& terms) {
        long long N = 1;
        int M = 1;
        for (const auto& [c, e] : terms) {
            N = lcm_ll(N, e.denominator());
            M = std::lcm(M, c.M());
        }
        const long long e0 = (terms.front().second * Rat(N)).numerator();
        const long long K = (terms.back().second * Rat(N)).numerator() - e0;
        std::vector<CoeffScalar> c(static_cast<size_t>(K + 1), CoeffScalar(0));
        for (const auto& [cc, e] : terms) c[static_cast<size_t>((e * Rat(N)).numerator() - e0)] = CoeffScalar(cc);
        for (long long m = 1; 2 * m <= K; ++m) {
            CMat A(static_cast<size_t>(m), static_cast<size_t>(m)), rhs(static_cast<size_t>(m), 1);
            for (long long k = m + 1; k <= 2 * m; ++k) {
                for (long long j = 1; j <= m; ++j) A(static_cast<size_t>(k - m - 1), static_cast<size_t>(j - 1)) = c[static_cast<size_t>(k - j)];
                rhs(static_cast<size_t>(k - m - 1), 0) = -c[static_cast<size_t>(k)];
            }
            if (rank(A) < static_cast<size_t>(m)) continue;
            CMat b = inverse(A) * rhs;
            std::vector<CoeffScalar> bb(static_cast<size_t>(m + 1));
            bb[0] = CoeffScalar(1);
            for (long long j = 1; j <= m; ++j) bb[static_cast<size_t>(j)] = b(static_cast<size_t>(j - 1), 0);
            bool consistent = true;
            for (long long k = 2 * m + 1; k <= K && consistent; ++k) {
                CoeffScalar s(0);
                for (long long j = 0; j <= m; ++j) s += bb[static_cast<size_t>(j)] * c[static_cast<size_t>(k - j)];
                consistent = s.is_zero();
            }
            if (!consistent) continue;
            CPoly num(M), den(M);
            for (long long k = 0; k <= m; ++k) {
                CoeffScalar s(0);
                for (long long j = 0; j <= k; ++j) s += bb[static_cast<size_t>(j)] * c[static_cast<size_t>(k - j)];
                if (!s.is_zero()) num = num + CPoly::monomial(s.lead(), k);
                if (!bb[static_cast<size_t>(k)].is_zero()) den = den + CPoly::monomial(bb[static_cast<size_t>(k)].lead(), k);
            }
            if (num.zero()) continue;
            CoeffScalar cand = CoeffScalar::make(static_cast<int>(N), e0, num, den).canonical();
            if (eval(original, cand).is_zero()) return cand;
        }
        return std::nullopt;
    }

    // Roots S + y of the original polynomial, where y runs over roots of Q with w(y) > bound.
    void search(FPoly Q, const CoeffScalar& S, std::optional<Rat> bound, std::vector<std::pair<Cyclo, Rat>> terms,
                int depth) {
        trim(Q);
        if (Q.size() <= 1) return;
        if (Q[0].is_zero()) {
            record(S);
            Q.erase(Q.begin());
            trim(Q);
            if (Q.size() <= 1) return;
        }
        if (depth >= max_depth) return;
        if (!terms.empty() && depth % 6 == 5) {
            if (auto c = pade(terms)) {
                record(*c);
                return;
            }
        }
        if (Q.size() == 2) {
            CoeffScalar y = -(Q[0] / Q[1]);
            if (!bound || y.w() > *bound) record(S + y);
            return;
        }
        // lower convex hull of (i, w(Q_i))
        std::vector<std::pair<long long, Rat>> pts;
        for (size_t i = 0; i < Q.size(); ++i)
            if (!Q[i].is_zero()) pts.push_back({static_cast<long long>(i), Q[i].w()});
        std::vector<std::pair<long long, Rat>> hull;
        for (const auto& p : pts) {
            while (hull.size() >= 2) {
                const auto& a = hull[hull.size() - 2];
                const auto& b = hull.back();
                // drop b when it lies on or above segment a-p
                if ((b.second - a.second) * Rat(p.first - a.first) >= (p.second - a.second) * Rat(b.first - a.first))
                    hull.pop_back();
                else
                    break;
            }
            hull.push_back(p);
        }
        for (size_t s = 0; s + 1 < hull.size(); ++s) {
            const auto [i0, w0] = hull[s];
            const auto [i1, w1] = hull[s + 1];
            const Rat slope = (w1 - w0) / Rat(i1 - i0);
            const Rat sigma = -slope;
            if (bound && sigma <= *bound) continue;
            CPolyU E(static_cast<size_t>(i1 - i0 + 1), Cyclo::rational(0));
            for (long long i = i0; i <= i1; ++i) {
                const auto& c = Q[static_cast<size_t>(i)];
                if (c.is_zero()) continue;
                if (c.w() == w0 + slope * Rat(i - i0)) E[static_cast<size_t>(i - i0)] = c.lead();
            }
            for (const auto& rho : edge_roots(E)) {
                CoeffScalar term = CoeffScalar(rho) * CoeffScalar::qpow(sigma);
                auto t2 = terms;
                t2.push_back({rho, sigma});
                search(taylor_shift(Q, term), S + term, sigma, t2, depth + 1);
            }
        }
    }
};

}  // namespace

std::vector<Cyclo> binomial_roots(long long l, const Cyclo& a) {
    if (a.is_zero()) return {Cyclo::rational(0)};
    if (l == 1) return {a};
    const int L = std::lcm(2, a.M());
    Cyclo aL = embed(a, L);
    for (long long k = 0; k < L; ++k) {
        Cyclo zk = Cyclo::zeta(L, k);
        Cyclo t = aL * inverse(zk);
        if (!t.is_rational()) continue;
        mpq_class r = t.rational_part();
        long long kk = k;
        if (r < 0) {
            r = -r;
            kk = (k + L / 2) % L;
        }
        bool ok1 = false, ok2 = false;
        mpz_class rn = exact_root(r.get_num(), static_cast<unsigned long>(l), ok1);
        mpz_class rd = exact_root(r.get_den(), static_cast<unsigned long>(l), ok2);
        if (!ok1 || !ok2) return {};
        mpq_class rr(rn, rd);
        std::vector<Cyclo> out;
        const long long big = static_cast<long long>(L) * l;
        for (long long j = 0; j < l; ++j) {
            Cyclo eta = Cyclo::zeta(static_cast<int>(big), kk + L * j).reduced();
            out.push_back((eta * Cyclo::rational(rr, eta.M())).reduced());
        }
        return out;
    }
    return {};
}

std::vector<Root> roots(const FPoly& p0, const std::vector<CoeffScalar>& hints) {
    FPoly p = p0;
    trim(p);
    const long long d = degree(p);
    if (d < 0) fail(ErrorKind::InvalidArgument, "roots of the zero polynomial");
    std::vector<Root> out;
    auto count_out = [&](const CoeffScalar& r) {
        int m = 0;
        for (;;) {
            FPoly q, rem;
            divrem(p, {-r, CoeffScalar(1)}, q, rem);
            if (!rem.empty()) break;
            p = q;
            ++m;
        }
        if (m > 0) out.push_back({r.canonical(), m});
    };
    for (const auto& h : hints)
        if (degree(p) > 0 && eval(p, h).is_zero()) count_out(h);
    if (degree(p) > 0) {
        FPoly g = gcd(p, derivative(p));
        FPoly sf, rem;
        divrem(p, g, sf, rem);
        Finder f;
        f.original = sf;
        f.search(sf, CoeffScalar(0), std::nullopt, {}, 0);
        for (const auto& r : f.found) count_out(r);
    }
    if (degree(p) > 0)
        fail(ErrorKind::EigenvalueNotInField, "polynomial has roots outside the coefficient field");
    return out;
}

}  // namespace qd
