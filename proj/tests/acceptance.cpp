// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include "corpus.hpp"
#include "qdiff/moduli.hpp"
#include "qdiff/report.hpp"
#include "qdiff/tate.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <thread>

using namespace qd;

namespace {

CoeffScalar q(const Rat& e) { return CoeffScalar::qpow(e); }
SkewOperator PHI(long long k = 1) { return SkewOperator::phi_pow(k); }

struct Verdict {
    bool ok = true;
    std::string detail;
    void require(bool c, const std::string& what) {
        if (!c && ok) {
            ok = false;
            detail = what;
        }
    }
};

std::vector<Rat> sorted(std::vector<Rat> v) {
    std::sort(v.begin(), v.end());
    return v;
}

PuiseuxSeries random_poly(std::mt19937_64& rng, int lo, int hi) {
    std::uniform_int_distribution<int> coef(-2, 2), ex(lo, hi), qe(0, 2);
    PuiseuxSeries f;
    for (int i = 0; i < 3; ++i) f += PuiseuxSeries::monomial(CoeffScalar(coef(rng)) * q(Rat(qe(rng))), Rat(ex(rng)));
    return f;
}

SkewOperator random_op(std::mt19937_64& rng, int deg) {
    SkewOperator L;
    for (int i = 0; i <= deg; ++i) L = L + SkewOperator::term(random_poly(rng, -2, 3), i);
    if (L.is_zero()) L = PHI(deg);
    return L;
}

// Monic pure operator of the given slope and degree denominator(slope) * k,
// every other coefficient strictly above the segment.
SkewOperator random_pure(std::mt19937_64& rng, const Rat& slope, long long k) {
    const long long n = slope.denominator(), t = slope.numerator(), d = n * k;
    std::uniform_int_distribution<int> coef(-3, 3);
    int c0 = coef(rng);
    if (c0 == 0) c0 = 2;
    SkewOperator L = PHI(d) + SkewOperator::term(PuiseuxSeries::monomial(CoeffScalar(c0) * q(Rat(coef(rng))), Rat(t * k)), 0);
    for (long long i = 1; i < d; ++i) {
        const int c = coef(rng);
        if (c == 0) continue;
        const Rat v = slope * Rat(d - i);
        long long e = ceil_rat(v);
        if (Rat(e) == v) ++e;
        L = L + SkewOperator::term(PuiseuxSeries::monomial(CoeffScalar(c), Rat(e)), i);
    }
    return L;
}

DiffModule rank1(const CoeffScalar& c, long long t = 0) {
    SMat B(1, 1);
    B(0, 0) = PuiseuxSeries::monomial(c, Rat(t));
    return DiffModule::from_B(B);
}

Verdict theta_equation() {
    Verdict v;
    const long long B = 20;
    const GlobalSeries th = theta(B);
    // coefficient of z^n in (-z) Theta(qz) is -q^(n-1) Theta_(n-1)
    for (long long n = -B + 1; n <= B; ++n) {
        const CoeffScalar lhs = -(CoeffScalar::qpow(Rat(n - 1)) * th.at(n - 1));
        v.require(lhs == th.at(n), "mismatch at z^" + std::to_string(n));
    }
    if (v.ok) v.detail = "overlap [-19, 20]";
    return v;
}

Verdict f111() {
    Verdict v;
    const PuiseuxSeries f = f_series(1, CoeffScalar(1), Rat(1), Rat(32));
    v.require(f.coeff(Rat(0)).is_zero(), "nonzero constant term");
    for (long long n = 1; n <= 30; ++n)
        v.require(f.coeff(Rat(n)) == q(Rat(-n * (n + 1) / 2)), "coefficient of z^" + std::to_string(n));
    if (v.ok) v.detail = "n = 1..30";
    return v;
}

Verdict slope_filtrations() {
    Verdict v;
    std::mt19937_64 rng(20260);
    const std::vector<Rat> pool = {Rat(0), Rat(1), Rat(-1), Rat(2), Rat(-2), Rat(1, 2), Rat(3, 2)};
    std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
    std::uniform_int_distribution<int> cnt(2, 3);
    struct Case {
        std::vector<Rat> slopes;
        SkewOperator L;
    };
    std::vector<Case> cases;
    for (int it = 0; it < 50; ++it) {
        std::vector<Rat> sl;
        const int n = cnt(rng);
        while (static_cast<int>(sl.size()) < n) {
            const Rat s = pool[pick(rng)];
            if (std::find(sl.begin(), sl.end(), s) == sl.end()) sl.push_back(s);
        }
        std::sort(sl.rbegin(), sl.rend());
        SkewOperator L(PuiseuxSeries(1));
        for (const auto& s : sl) L = L * random_pure(rng, s, 1);
        cases.push_back({sl, L});
    }
    std::vector<std::string> errs(cases.size());
    std::atomic<size_t> next{0};
    auto work = [&] {
        for (size_t k; (k = next++) < cases.size();) {
            try {
                const Filtration F = slope_filtration(cases[k].L, Rat(32));
                std::vector<Rat> expect = cases[k].slopes;
                std::sort(expect.begin(), expect.end());
                if (F.slopes != expect) errs[k] = "slopes";
                for (size_t i = 1; i < F.slopes.size(); ++i)
                    if (!(F.slopes[i - 1] < F.slopes[i])) errs[k] = "not increasing";
                if (!F.residual.is_zero() || (F.residual_precision && *F.residual_precision < Rat(32)))
                    errs[k] = "residual";
                SkewOperator prod(PuiseuxSeries(1));
                for (const auto& f : F.factors) prod = prod * f;
                if (!agree(truncate(prod, Rat(32)), truncate(F.normalized, Rat(32)))) errs[k] = "product";
            } catch (const std::exception& e) {
                errs[k] = e.what();
            }
        }
    };
    std::vector<std::thread> pool_t;
    const unsigned nt = std::max(2u, std::thread::hardware_concurrency());
    for (unsigned t = 0; t < nt; ++t) pool_t.emplace_back(work);
    for (auto& t : pool_t) t.join();
    for (size_t k = 0; k < cases.size(); ++k) v.require(errs[k].empty(), "product " + std::to_string(k) + ": " + errs[k]);
    if (v.ok) v.detail = "50 products";
    return v;
}

Verdict polygon_products() {
    Verdict v;
    std::mt19937_64 rng(404);
    std::uniform_int_distribution<int> deg(1, 3);
    for (int it = 0; it < 100; ++it) {
        const SkewOperator a = random_op(rng, deg(rng)), b = random_op(rng, deg(rng));
        auto u = newton_polygon(a).slope_multiset();
        const auto w = newton_polygon(b).slope_multiset();
        u.insert(u.end(), w.begin(), w.end());
        v.require(sorted(newton_polygon(a * b).slope_multiset()) == sorted(u), "pair " + std::to_string(it));
    }
    if (v.ok) v.detail = "100 pairs";
    return v;
}

Verdict euclid() {
    Verdict v;
    std::mt19937_64 rng(808);
    std::uniform_int_distribution<int> ex(-2, 2), sgn(0, 1);
    for (int it = 0; it < 100; ++it) {
        const SkewOperator L = random_op(rng, 3);
        const int d = 1 + it % 2;
        const PuiseuxSeries lead = PuiseuxSeries::monomial(CoeffScalar(sgn(rng) ? 1 : -1) * q(Rat(ex(rng))), Rat(ex(rng)));
        const SkewOperator R = random_op(rng, d - 1) + SkewOperator::term(lead, d);
        const DivResult r = divmod(L, R, Side::Right), l = divmod(L, R, Side::Left);
        v.require(r.quotient * R + r.remainder == L, "right division " + std::to_string(it));
        v.require(R * l.quotient + l.remainder == L, "left division " + std::to_string(it));
        v.require(r.remainder.is_zero() || r.remainder.span() < R.span(), "right remainder degree");
        v.require(l.remainder.is_zero() || l.remainder.span() < R.span(), "left remainder degree");
    }
    if (v.ok) v.detail = "100 pairs, both sides";
    return v;
}

Verdict cohomology_table() {
    Verdict v;
    const long long expect[][3] = {{-2, 0, 2}, {-1, 0, 1}, {0, 1, 1}, {1, 1, 0}, {2, 2, 0}, {3, 3, 0}};
    for (const auto& row : expect) {
        const DiffModule M = rank1(CoeffScalar(row[0] % 2 == 0 ? 1 : -1), row[0]);
        const CohomologyReport a = cohomology(M, 20), b = cohomology(M, 24);
        const std::string t = "t=" + std::to_string(row[0]);
        v.require(a.h0 == row[1] && a.h1 == row[2], t + " at B=20");
        v.require(b.h0 == a.h0 && b.h1 == a.h1, t + " differs at B=24");
        v.require(a.h0 - a.h1 == row[0], t + " Riemann-Roch");
    }
    if (v.ok) v.detail = "t = -2..3";
    return v;
}

Verdict bundles() {
    Verdict v;
    int cells = 0;
    for (long long n = 1; n <= 4; ++n)
        for (long long t = -5; t <= 5; ++t) {
            if (std::gcd(t, n) != 1) continue;
            for (long long m = 1; m <= 3; ++m) {
                const PureType ty{Rat(t, n), CoeffScalar(1), m};
                const BundleInvariants b = bundle_invariants({{ty, 1}});
                const std::string c = "(" + std::to_string(t) + "/" + std::to_string(n) + ", m=" + std::to_string(m) + ")";
                v.require(b.rank == n * m, "rank " + c);
                v.require(b.degree == t * m, "degree " + c);
                v.require(static_cast<long long>(pure_module(ty).dim()) == b.rank, "module dimension " + c);
                ++cells;
            }
        }
    if (v.ok) v.detail = std::to_string(cells) + " grid cells";
    return v;
}

Verdict moduli() {
    Verdict v;
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> c(-3, 3), qe(0, 2);
    auto laurent = [&](long long lo, long long hi) {
        PuiseuxSeries f;
        for (long long e = lo; e <= hi; ++e)
            if (int k = c(rng)) f += PuiseuxSeries::monomial(CoeffScalar(k) * q(Rat(qe(rng))), Rat(e));
        return f;
    };
    for (long long t = 1; t <= 5; ++t) {
        v.require(moduli_dimension({{Rat(0), 1}, {Rat(t), 1}}) == t, "dimension for t=" + std::to_string(t));
        const UniversalFamily fam = universal_family(t);
        v.require(static_cast<long long>(fam.parameters().size()) == t, "family parameters");
        for (int trial = 0; trial < 4; ++trial) {
            std::vector<CoeffScalar> x;
            for (long long k = 0; k < t; ++k) x.push_back(CoeffScalar(c(rng)) * q(Rat(qe(rng), 2)));
            const ModuliPoint P = moduli_point(fam.instantiate(x));
            v.require(P.N == t && P.coords == x, "round trip t=" + std::to_string(t));
        }
    }
    const std::vector<CoeffScalar> x = {CoeffScalar(1), CoeffScalar(0), CoeffScalar(2)};
    const DiffModule M = universal_family(3).instantiate(x);
    for (int trial = 0; trial < 20; ++trial) {
        SMat Y(1, 1);
        Y(0, 0) = laurent(-2, 4);
        v.require(moduli_point(extension_gauge(M, 1, Y)).coords == x, "gauge " + std::to_string(trial));
    }
    if (v.ok) v.detail = "t = 1..5, 20 gauges";
    return v;
}

Verdict galois() {
    Verdict v;
    for (long long k = -3; k <= 3; ++k) {
        const GroupDescriptor d = galois_group(rank1(q(Rat(k))));
        v.require(d.torus_rank == 0 && d.finite_invariants.empty() && !d.has_Ga, "q^" + std::to_string(k) + " trivial");
    }
    for (long long n = 2; n <= 6; ++n)
        for (long long k = 1; k < n; ++k) {
            const long long g = std::gcd(k, n);
            const GroupDescriptor d = galois_group(rank1(q(Rat(k, n))));
            v.require(d.torus_rank == 0 && d.finite_invariants == std::vector<long long>{n / g},
                      "q^(" + std::to_string(k) + "/" + std::to_string(n) + ")");
        }
    for (const CoeffScalar& c : {CoeffScalar(2), CoeffScalar(-3) * q(Rat(1, 2)), CoeffScalar(1) + q(Rat(1)),
                                 CoeffScalar(mpq_class(1, 5))}) {
        const GroupDescriptor d = galois_group(rank1(c));
        v.require(d.torus_rank == 1 && d.finite_invariants.empty(), "G_m for " + to_string(c));
    }
    for (long long m = 2; m <= 4; ++m) {
        const GroupDescriptor d = galois_group(pure_module({Rat(0), CoeffScalar(1), m}));
        v.require(d.has_Ga && d.torus_rank == 0, "U_" + std::to_string(m));
    }
    for (long long n = 2; n <= 4; ++n)
        for (long long t : {1LL, -1LL}) {
            const GroupDescriptor d = galois_group(pure_module({Rat(t, n), CoeffScalar(3), 1}));
            v.require(d.nonabelian && d.quotient_invariants == std::vector<long long>{n, n},
                      "E(c z^(" + std::to_string(t) + "/" + std::to_string(n) + "))");
        }
    return v;
}

Verdict derivations() {
    Verdict v;
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> k(-4, 4), e(0, 3);
    int count = 0;
    for (int trial = 0; trial < 12; ++trial)
        for (long long m = 1; m <= 4; ++m) {
            std::vector<CoeffScalar> a;
            for (long long i = 0; i < m; ++i) a.push_back(CoeffScalar(k(rng)) * q(Rat(e(rng), 2)));
            const CoeffScalar c = trial % 3 == 0   ? CoeffScalar::zeta(3, 1)
                                  : trial % 3 == 1 ? CoeffScalar(1) + q(Rat(1))
                                                   : CoeffScalar(2) * q(Rat(1, 2));
            const Rat mu(1 + trial % 3, 1 + trial % 2);
            v.require(derivation_check(a, c, mu, m).is_zero(), "trial " + std::to_string(trial));
            ++count;
        }
    if (v.ok) v.detail = std::to_string(count) + " residuals";
    return v;
}

bool same_types(const std::vector<TypeMult>& a, const std::vector<TypeMult>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (!same_type(a[i].type, b[i].type) || a[i].mult != b[i].mult) return false;
    return true;
}

// E(c z^(t/n)) restricted to K: companion of PHI^n - c^n q^(t(n-1)/2) z^t.
std::vector<TypeMult> decompose_E(const CoeffScalar& c, long long t, long long n) {
    const SkewOperator L =
        PHI(n) - SkewOperator(PuiseuxSeries::monomial(pow(c, n) * q(Rat(t * (n - 1), 2)), Rat(t)));
    return formal_decompose(companion(L));
}

Verdict uniqueness() {
    Verdict v;
    int pairs = 0;
    const std::vector<std::pair<long long, long long>> shapes = {{1, 2}, {-1, 2}, {2, 3}, {1, 3}, {3, 2}};
    for (const auto& [t, n] : shapes) {
        for (const CoeffScalar& c1 : {CoeffScalar(3) * q(Rat(1, 5)), CoeffScalar(2), CoeffScalar(1) + q(Rat(1))}) {
            const auto base = decompose_E(c1, t, n);
            std::vector<std::pair<CoeffScalar, bool>> others;
            for (long long k = 1; k < n; ++k) others.push_back({CoeffScalar::zeta(static_cast<int>(n), k) * c1, true});
            others.push_back({CoeffScalar::zeta(static_cast<int>(2 * n), 1) * c1, false});
            others.push_back({CoeffScalar(2) * c1, false});
            others.push_back({CoeffScalar(-1) * c1, n % 2 == 0});
            for (const auto& [c2, agree_expected] : others) {
                v.require(same_types(base, decompose_E(c2, t, n)) == agree_expected,
                          to_string(c1) + " vs " + to_string(c2) + " at " + std::to_string(t) + "/" + std::to_string(n));
                ++pairs;
            }
        }
    }
    if (v.ok) v.detail = std::to_string(pairs) + " pairs";
    return v;
}

std::string command_for(ParsedKind k) {
    switch (k) {
        case ParsedKind::Module: return "classify";
        case ParsedKind::Equation: return "solve";
        default: return "polygon";
    }
}

Verdict cli() {
    Verdict v;
    std::vector<Request> rs;
    for (const auto& text : parse_corpus()) {
        const Parsed a = parse(text);
        const std::string f = format(a);
        v.require(parse(f) == a && format(parse(f)) == f, "round trip of " + text);
        Request r;
        r.command = command_for(a.kind);
        r.input = text;
        rs.push_back(r);
    }
    const auto one = run_batch(rs, 1), many = run_batch(rs, 8);
    for (size_t k = 0; k < rs.size(); ++k) {
        const std::string d = one[k].report.dump();
        v.require(d == many[k].report.dump() && d == run(rs[k]).report.dump(), "report for " + rs[k].input);
    }
    if (v.ok) v.detail = std::to_string(rs.size()) + " inputs";
    return v;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
        {"theta functional equation", theta_equation},
        {"f_(1,1,1) coefficients", f111},
        {"slope filtration of random products", slope_filtrations},
        {"Newton polygon multiplicativity", polygon_products},
        {"Euclidean division round trips", euclid},
        {"cohomology of (-z)^t line bundles", cohomology_table},
        {"bundle rank and degree", bundles},
        {"moduli coordinates", moduli},
        {"Galois descriptors", galois},
        {"derivation equivariance", derivations},
        {"classification uniqueness", uniqueness},
        {"CLI determinism and round trip", cli},
    };
    int failed = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v.ok = false;
            v.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failed += !v.ok;
        std::printf("%s %zu %s%s%s (%.1f s)\n", v.ok ? "PASS" : "FAIL", i + 1, criteria[i].first,
                    v.detail.empty() ? "" : ": ", v.detail.c_str(), secs);
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
