#include "doctest.h"
#include "printers.hpp"
#include "qdiff/errors.hpp"
#include "qdiff/roots.hpp"

#include <algorithm>
#include <random>

using namespace qd;

namespace {

CoeffScalar q(long long a = 1, long long b = 1) { return CoeffScalar::qpow(Rat(a, b)); }

FPoly from_roots(const std::vector<CoeffScalar>& rs) {
    FPoly p{CoeffScalar(1)};
    for (const auto& r : rs) p = p * FPoly{-r, CoeffScalar(1)};
    return p;
}

int mult_of(const std::vector<Root>& rs, const CoeffScalar& v) {
    for (const auto& r : rs)
        if (r.value == v) return r.mult;
    return 0;
}

}  // namespace

TEST_CASE("roots of products of linear factors") {
    auto rs = roots(from_roots({CoeffScalar(1), q(), -2 * q(1, 2)}));
    CHECK(rs.size() == 3);
    CHECK(mult_of(rs, CoeffScalar(1)) == 1);
    CHECK(mult_of(rs, q()) == 1);
    CHECK(mult_of(rs, -2 * q(1, 2)) == 1);
}

TEST_CASE("non-monomial roots and multiplicities") {
    CoeffScalar a = CoeffScalar(1) + q();
    CoeffScalar b = inv(CoeffScalar(1) - q());
    CoeffScalar c = CoeffScalar(1) + q(2);
    auto rs = roots(from_roots({a, a, b, c}));
    CHECK(mult_of(rs, a) == 2);
    CHECK(mult_of(rs, b) == 1);
    CHECK(mult_of(rs, c) == 1);
}

TEST_CASE("cyclotomic and ramified roots") {
    auto rs = roots({CoeffScalar(1), CoeffScalar(1), CoeffScalar(1)});
    CHECK(rs.size() == 2);
    CHECK(mult_of(rs, CoeffScalar::zeta(3, 1)) == 1);
    CHECK(mult_of(rs, CoeffScalar::zeta(3, 2)) == 1);
    auto rq = roots({-q(), CoeffScalar(0), CoeffScalar(1)});
    CHECK(mult_of(rq, q(1, 2)) == 1);
    CHECK(mult_of(rq, -q(1, 2)) == 1);
}

TEST_CASE("roots outside the field are reported") {
    CHECK_THROWS_AS(roots({CoeffScalar(-2), CoeffScalar(0), CoeffScalar(1)}), Error);
}

TEST_CASE("binomial roots") {
    auto r = binomial_roots(3, Cyclo::rational(8));
    CHECK(r.size() == 3);
    for (const auto& x : r) CHECK(pow(x, 3) == Cyclo::rational(8, x.M()));
    CHECK(binomial_roots(2, Cyclo::rational(3)).empty());
    auto s = binomial_roots(2, Cyclo::rational(-4));
    CHECK(s.size() == 2);
    for (const auto& x : s) CHECK(pow(x, 2) == Cyclo::rational(-4, x.M()));
}

TEST_CASE("property: random root multisets are recovered") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> coef(-3, 3), ex(-2, 2), kind(0, 3), cnt(1, 4);
    for (int iter = 0; iter < 40; ++iter) {
        std::vector<CoeffScalar> rs;
        int n = cnt(rng);
        for (int i = 0; i < n; ++i) {
            int c = coef(rng);
            if (c == 0) c = 1;
            CoeffScalar r = c * q(ex(rng));
            switch (kind(rng)) {
                case 1: r = r + q(ex(rng) + 3); break;
                case 2: r = r * CoeffScalar::zeta(4, 1); break;
                case 3: if (!rs.empty()) r = rs.back(); break;
                default: break;
            }
            rs.push_back(r);
        }
        auto found = roots(from_roots(rs));
        int total = 0;
        for (const auto& f : found) {
            total += f.mult;
            CHECK(f.mult == std::count(rs.begin(), rs.end(), f.value));
        }
        CHECK(total == n);
    }
}
