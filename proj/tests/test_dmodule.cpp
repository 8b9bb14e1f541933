#include "doctest.h"
#include "printers.hpp"
#include "qdiff/dmodule.hpp"
#include "qdiff/errors.hpp"

#include <algorithm>
#include <random>

using namespace qd;

namespace {

CoeffScalar q(long long a = 1, long long b = 1) { return CoeffScalar::qpow(Rat(a, b)); }
PuiseuxSeries z(long long a = 1, long long b = 1) { return PuiseuxSeries::z(Rat(a, b)); }
SkewOperator PHI(long long k = 1) { return SkewOperator::phi_pow(k); }

SMat diag(std::vector<PuiseuxSeries> d) {
    SMat m(d.size(), d.size());
    for (size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

SMat one(PuiseuxSeries a) { return diag({a}); }

// Product of elementary matrices with monomial entries: determinant 1.
SMat random_gauge(std::mt19937_64& rng, size_t n) {
    std::uniform_int_distribution<int> coef(-2, 2), ex(-1, 2);
    SMat up = SMat::identity(n), lo = SMat::identity(n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
            up(i, j) = PuiseuxSeries::monomial(CoeffScalar(coef(rng)), Rat(ex(rng)));
            lo(j, i) = PuiseuxSeries::monomial(CoeffScalar(coef(rng)) * q(), Rat(ex(rng)));
        }
    return up * lo;
}

std::vector<Rat> slopes(const SkewOperator& L) {
    auto s = newton_polygon(L).slope_multiset();
    std::sort(s.begin(), s.end());
    return s;
}

}  // namespace

TEST_CASE("rank one dictionary") {
    DiffModule M = companion(PHI() - SkewOperator(PuiseuxSeries(CoeffScalar(3))));
    CHECK(M.A() == one(PuiseuxSeries(CoeffScalar(mpq_class(1, 3)))));
    CHECK(M.B == one(PuiseuxSeries(CoeffScalar(3))));
    auto cv = cyclic_vector(DiffModule::from_A(one(PuiseuxSeries(CoeffScalar(mpq_class(1, 3)))))) ;
    CHECK(cv.op == PHI() - SkewOperator(PuiseuxSeries(CoeffScalar(3))));
}

TEST_CASE("companion round trip") {
    SkewOperator L = PHI(2) - SkewOperator::term(1 + z(), 1) + SkewOperator(z());
    DiffModule M = companion(L);
    CHECK(M.B(1, 0) == PuiseuxSeries(1));
    CHECK(M.B(0, 1) == -z());
    CHECK(cyclic_vector(M).op == L);
    SkewOperator U2 = (PHI() - SkewOperator(1)) * (PHI() - SkewOperator(1));
    CHECK(cyclic_vector(companion(U2)).op == U2);
    CHECK_THROWS_AS(companion(SkewOperator::term(2, 1) - SkewOperator(1)), Error);
    CHECK_THROWS_AS(companion(PHI(2) - PHI()), Error);
}

TEST_CASE("diagonal module has slopes 0 and 1") {
    DiffModule M = DiffModule::from_A(diag({1, z(-1)}));
    auto cv = cyclic_vector(M);
    CHECK(cv.op.deg_hi() == 2);
    CHECK(slopes(cv.op) == std::vector<Rat>{Rat(0), Rat(1)});
    // certificate: V^-1 B phi(V) is the companion matrix of the operator
    SMat C = inverse(cv.basis, Rat(40)) * M.B * phi_apply(cv.basis, 1);
    CHECK(agree(C, companion(cv.op).B));
}

TEST_CASE("constructions") {
    DiffModule a = DiffModule::from_B(one(PuiseuxSeries(CoeffScalar(2))));
    DiffModule b = DiffModule::from_B(one(PuiseuxSeries(CoeffScalar(5)) * z()));
    CHECK(construct(ConstructKind::DSum, a, b).B == diag({PuiseuxSeries(CoeffScalar(2)), 5 * z()}));
    CHECK(construct(ConstructKind::Tensor, a, b).B == one(10 * z()));
    DiffModule mz = DiffModule::from_B(one(-z()));
    CHECK(construct(ConstructKind::Dual, mz, mz).B == one(inv(-z())));
    CHECK(construct(ConstructKind::Hom, b, b).B == one(1));
}

TEST_CASE("gauge transforms") {
    DiffModule M = DiffModule::from_A(one(PuiseuxSeries(CoeffScalar(7))));
    DiffModule G = gauge_transform(M, one(z()));
    CHECK(G.A() == one(PuiseuxSeries(CoeffScalar(7) * q())));
    CHECK(gauge_transform(M, SMat::identity(1)).A() == M.A());
    std::mt19937_64 rng(2);
    SkewOperator L = PHI(2) - SkewOperator::term(1 + z(), 1) + SkewOperator(z());
    DiffModule C = companion(L);
    for (int it = 0; it < 10; ++it) {
        SMat U = random_gauge(rng, 2);
        DiffModule X = gauge_transform(C, U);
        CHECK(gauge_transform(X, inverse(U, Rat(40))).A() == C.A());
        CHECK(agree(X.B, inverse(transpose(X.A()), Rat(40))));
        auto cv = cyclic_vector(X);
        CHECK(slopes(cv.op) == std::vector<Rat>{Rat(0), Rat(1)});
    }
}

TEST_CASE("rank and determinant under constructions") {
    DiffModule a = companion(PHI(2) - SkewOperator::term(1 + z(), 1) + SkewOperator(z()));
    DiffModule b = DiffModule::from_B(one(PuiseuxSeries(CoeffScalar(3)) * z(2)));
    Rat T(30);
    DiffModule t = construct(ConstructKind::Tensor, a, b), s = construct(ConstructKind::DSum, a, b);
    CHECK(t.dim() == 2);
    CHECK(s.dim() == 3);
    PuiseuxSeries da = det(a.B, T), db = det(b.B, T);
    CHECK(agree(det(t.B, T), da * db * db));
    CHECK(agree(det(s.B, T), da * db));
}
