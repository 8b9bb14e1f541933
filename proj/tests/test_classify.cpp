#include "doctest.h"
#include "printers.hpp"
#include "qdiff/classify.hpp"
#include "qdiff/errors.hpp"

#include <random>

using namespace qd;

namespace {

CoeffScalar q(long long a = 1, long long b = 1) { return CoeffScalar::qpow(Rat(a, b)); }
PuiseuxSeries z(long long a = 1, long long b = 1) { return PuiseuxSeries::z(Rat(a, b)); }
SkewOperator PHI(long long k = 1) { return SkewOperator::phi_pow(k); }

// Random monic pure operator of slope t/n and degree n*k.
SkewOperator random_pure(std::mt19937_64& rng, const Rat& slope, long long k) {
    const long long n = slope.denominator(), t = slope.numerator();
    std::uniform_int_distribution<int> coef(-3, 3);
    const long long d = n * k;
    SkewOperator L = PHI(d);
    int c0 = coef(rng);
    if (c0 == 0) c0 = 2;
    // constant term on the polygon vertex: valuation t*k
    L = L + SkewOperator::term(PuiseuxSeries::monomial(CoeffScalar(c0) * q(coef(rng)), Rat(t * k)), 0);
    for (long long i = 1; i < d; ++i) {
        int c = coef(rng);
        if (c == 0) continue;
        // strictly above the segment
        Rat v = slope * Rat(d - i);
        long long e = ceil_rat(v);
        if (Rat(e) == v) ++e;
        L = L + SkewOperator::term(PuiseuxSeries::monomial(CoeffScalar(c), Rat(e)), i);
    }
    return L;
}

void check_filtration(const SkewOperator& L, size_t nfac) {
    Filtration F = slope_filtration(L, Rat(32));
    REQUIRE(F.factors.size() == nfac);
    for (size_t i = 1; i < F.slopes.size(); ++i) CHECK(F.slopes[i - 1] < F.slopes[i]);
    for (size_t i = 0; i < F.factors.size(); ++i) {
        auto np = newton_polygon(F.factors[i]);
        REQUIRE(np.segments.size() == 1);
        CHECK(np.segments[0].slope == F.slopes[i]);
    }
    CHECK(F.residual.is_zero());
    if (F.residual_precision) CHECK(*F.residual_precision >= Rat(32));
}

}  // namespace

TEST_CASE("two-slope example") {
    SkewOperator L = PHI(2) - (PuiseuxSeries(1) + z()) * PHI() + z();
    Filtration F = slope_filtration(L, Rat(32));
    REQUIRE(F.factors.size() == 2);
    CHECK(F.slopes == std::vector<Rat>{Rat(0), Rat(1)});
    PuiseuxSeries a = F.factors[0].coeff(0), b = F.factors[1].coeff(0);
    CHECK(a.coeff(Rat(0)) == CoeffScalar(-1));
    CHECK(a.coeff(Rat(1)) == q() - CoeffScalar(1));
    CHECK(b.coeff(Rat(1)) == CoeffScalar(-1));
    CHECK(b.coeff(Rat(2)) == CoeffScalar(1) - q());
    CHECK(F.residual.is_zero());
    CHECK(*F.residual_precision >= Rat(32));
}

TEST_CASE("pure input is its own filtration") {
    SkewOperator L = PHI() - PuiseuxSeries::monomial(CoeffScalar(-5), Rat(3));
    Filtration F = slope_filtration(L);
    REQUIRE(F.factors.size() == 1);
    CHECK(F.factors[0] == L);
    CHECK(!F.residual_precision);
}

TEST_CASE("lead and shift are split off") {
    SkewOperator L = (PuiseuxSeries(3) * z(2)) * (PHI(3) - (PuiseuxSeries(1) + z()) * PHI(2) + z() * PHI(1));
    Filtration F = slope_filtration(L);
    CHECK(F.shift == 1);
    CHECK(F.lead == PuiseuxSeries(3) * z(2));
    CHECK(F.factors.size() == 2);
}

TEST_CASE("property: products in decreasing slope order are refactored") {
    std::mt19937_64 rng(5);
    const std::vector<Rat> pool = {Rat(0), Rat(1), Rat(-1), Rat(2), Rat(-2), Rat(1, 2), Rat(3, 2)};
    std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
    std::uniform_int_distribution<int> cnt(2, 3);
    for (int iter = 0; iter < 12; ++iter) {
        std::vector<Rat> sl;
        int n = cnt(rng);
        while (static_cast<int>(sl.size()) < n) {
            Rat s = pool[pick(rng)];
            if (std::find(sl.begin(), sl.end(), s) == sl.end()) sl.push_back(s);
        }
        std::sort(sl.rbegin(), sl.rend());
        SkewOperator L(PuiseuxSeries(1));
        for (const auto& s : sl) L = L * random_pure(rng, s, 1);
        check_filtration(L, sl.size());
    }
}

namespace {

SMat diag(std::vector<PuiseuxSeries> d) {
    SMat m(d.size(), d.size());
    for (size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

std::vector<TypeMult> single(const PureType& t) { return {{t, 1}}; }

bool same_types(const std::vector<TypeMult>& a, const std::vector<TypeMult>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (!same_type(a[i].type, b[i].type) || a[i].mult != b[i].mult) return false;
    return true;
}

}  // namespace

TEST_CASE("regular singular normal form") {
    auto nf = rs_normalize(DiffModule::from_B(diag({PuiseuxSeries(3 * q(2))})));
    CHECK(nf.W(0, 0) == CoeffScalar(3));
    auto nf2 = rs_normalize(DiffModule::from_A(diag({PuiseuxSeries(1), PuiseuxSeries(q())})));
    CHECK(nf2.W(0, 0) == CoeffScalar(1));
    CHECK(nf2.W(1, 1) == CoeffScalar(1));
    SMat B(2, 2);
    B(0, 0) = PuiseuxSeries(2);
    B(0, 1) = PuiseuxSeries(1);
    B(1, 1) = PuiseuxSeries(CoeffScalar::zeta(3, 1));
    auto nf3 = rs_normalize(DiffModule::from_B(B));
    CHECK(nf3.W == constant_part(B));
}

TEST_CASE("normal form gauge certificate") {
    SMat B(2, 2);
    B(0, 0) = PuiseuxSeries(2) + z();
    B(0, 1) = z();
    B(1, 0) = z() - z(3);
    B(1, 1) = PuiseuxSeries(3 * q()) + z(2);
    DiffModule M = DiffModule::from_B(B);
    auto nf = rs_normalize(M, Rat(8), true);
    REQUIRE(nf.gauge);
    // certificate without inverting P: B phi(P) = P W
    SMat lhs = B * phi_apply(*nf.gauge, 1), rhs = *nf.gauge * to_series(nf.W);
    CHECK(agree(lhs, rhs));
    CHECK(precision(lhs - rhs).value_or(Rat(100)) >= Rat(8));
    CHECK(!det(*nf.gauge, Rat(8)).is_zero());
    auto eig = jordan_structure(nf.W);
    CHECK(eig.size() == 2);
}

TEST_CASE("formal types of small modules") {
    CoeffScalar c = CoeffScalar(1) + q();
    CHECK(same_types(formal_decompose(PHI() - PuiseuxSeries(c)), single({Rat(0), c, 1})));
    SkewOperator U2 = (PHI() - PuiseuxSeries(1)) * (PHI() - PuiseuxSeries(1));
    CHECK(same_types(formal_decompose(U2), single({Rat(0), CoeffScalar(1), 2})));
    CHECK(same_types(formal_decompose(companion(U2)), single({Rat(0), CoeffScalar(1), 2})));
    PureType e{Rat(1, 2), 5 * q(1, 3), 1};
    CHECK(same_types(formal_decompose(pure_module(e)), single(e)));
    PureType e2{Rat(3, 2), CoeffScalar(-2), 2};
    CHECK(same_types(formal_decompose(pure_module(e2)), single(e2)));
    PureType e3{Rat(-1, 3), CoeffScalar(7), 1};
    CHECK(same_types(formal_decompose(pure_module(e3)), single(e3)));
}

TEST_CASE("mixed slopes") {
    SkewOperator L = (PHI() - z()) * (PHI() - PuiseuxSeries(2)) * (PHI(2) - PuiseuxSeries::monomial(q(), Rat(-1)));
    auto types = formal_decompose(L);
    long long dim = 0;
    for (const auto& t : types) dim += t.type.slope.denominator() * t.type.m * t.mult;
    CHECK(dim == 4);
    REQUIRE(types.size() == 3);
    CHECK(types[0].type.slope == Rat(-1, 2));
    CHECK(types[1].type.slope == Rat(0));
    CHECK(types[1].type.cls == CoeffScalar(2));
    CHECK(types[2].type.slope == Rat(1));
}

TEST_CASE("E(c1 z^(t/n)) and E(c2 z^(t/n)) agree iff c1^n = c2^n") {
    auto decompose_E = [](const CoeffScalar& c, long long t, long long n) {
        return formal_decompose(pure_module({Rat(t, n), fundamental_rep(pow(c, n)), 1}));
    };
    CoeffScalar c = 3 * q(1, 5);
    CHECK(same_types(decompose_E(c, 1, 2), decompose_E(-c, 1, 2)));
    CHECK(!same_types(decompose_E(c, 1, 2), decompose_E(2 * c, 1, 2)));
    CHECK(same_types(decompose_E(c, 2, 3), decompose_E(CoeffScalar::zeta(3, 1) * c, 2, 3)));
    CHECK(!same_types(decompose_E(c, 2, 3), decompose_E(CoeffScalar::zeta(6, 1) * c, 2, 3)));
}
