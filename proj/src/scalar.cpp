#include "qdiff/scalar.hpp"

#include "qdiff/errors.hpp"

#include <map>
#include <numeric>

namespace qd {

namespace {

CPoly one_poly(int M) { return CPoly::constant(Cyclo::rational(1, M)); }

}  // namespace

CoeffScalar::CoeffScalar(long long n) : CoeffScalar(mpq_class(static_cast<long>(n))) {}

CoeffScalar::CoeffScalar(const mpq_class& r) : num_(CPoly::constant(Cyclo::rational(r))), den_(one_poly(1)) {}

CoeffScalar::CoeffScalar(const Cyclo& c) : num_(CPoly::constant(c)), den_(one_poly(c.M())) {}

CoeffScalar CoeffScalar::qpow(const Rat& e) {
    CoeffScalar r(1);
    r.N_ = static_cast<int>(e.denominator());
    r.k_ = e.numerator();
    return r;
}

CoeffScalar CoeffScalar::zeta(int M, long long k) { return CoeffScalar(Cyclo::zeta(M, k)); }

CoeffScalar CoeffScalar::make(int N, long long k, CPoly num, CPoly den) {
    if (den.zero()) fail(ErrorKind::ZeroDivisor, "scalar with zero denominator");
    CoeffScalar r;
    int M = std::lcm(num.M, den.M);
    r.N_ = N;
    r.k_ = k;
    r.num_ = num.M == M ? std::move(num) : embed(num, M);
    r.den_ = den.M == M ? std::move(den) : embed(den, M);
    r.reduce();
    return r;
}

void CoeffScalar::reduce() {
    if (num_.zero()) {
        N_ = 1;
        k_ = 0;
        num_ = CPoly(1);
        den_ = one_poly(1);
        den_one_ = true;
        return;
    }
    long long ln = num_.low_order(), ld = den_.low_order();
    if (ln > 0) num_ = shift_down(num_, ln);
    if (ld > 0) den_ = shift_down(den_, ld);
    k_ += ln - ld;
    if (den_.degree() > 0) {
        CPoly g = gcd_unit_const(num_, den_);
        if (!g.is_one()) {
            num_ = divexact(num_, g);
            den_ = divexact(den_, g);
        }
    }
    Cyclo d0 = den_.coeff(0);
    if (!d0.is_one()) {
        Cyclo di = inverse(d0);
        num_ = scale(num_, di);
        den_ = scale(den_, di);
    }
    den_one_ = den_.degree() == 0;
}

bool CoeffScalar::is_one() const { return k_ == 0 && den_one_ && num_.is_one(); }

Rat CoeffScalar::w() const {
    if (is_zero()) fail(ErrorKind::ZeroScalar, "valuation of zero scalar");
    return Rat(k_, N_);
}

Cyclo CoeffScalar::lead() const {
    if (is_zero()) fail(ErrorKind::ZeroScalar, "leading coefficient of zero scalar");
    return num_.coeff(0);
}

bool CoeffScalar::is_monomial() const { return !is_zero() && den_one_ && num_.degree() == 0; }

bool CoeffScalar::is_constant() const { return is_zero() || (is_monomial() && k_ == 0); }

CoeffScalar CoeffScalar::lift(int N2, int M2) const {
    if (N2 % N_ != 0 || M2 % M() != 0) fail(ErrorKind::InvalidArgument, "scalar lift must enlarge N and M");
    if (is_zero()) return *this;
    CoeffScalar r = *this;
    long long f = N2 / N_;
    if (f != 1) {
        r.N_ = N2;
        r.k_ = k_ * f;
        r.num_ = spread(num_, f);
        r.den_ = spread(den_, f);
    }
    if (M2 != M()) {
        r.num_ = embed(r.num_, M2);
        r.den_ = embed(r.den_, M2);
    }
    return r;
}

namespace {

// Largest g dividing N and all exponents present.
long long exponent_gcd(const CoeffScalar& c) {
    long long g = std::gcd(static_cast<long long>(c.N()), c.k() < 0 ? -c.k() : c.k());
    for (const CPoly* p : {&c.num(), &c.den()}) {
        for (const auto& comp : p->comp)
            for (size_t i = 0; i < comp.num.c.size(); ++i)
                if (comp.num.c[i] != 0) g = std::gcd(g, static_cast<long long>(i));
    }
    return g == 0 ? c.N() : g;
}

std::optional<CPoly> restrict_poly(const CPoly& p, int d) {
    CPoly r(d);
    long long deg = p.degree();
    for (long long i = 0; i <= deg; ++i) {
        Cyclo c = p.coeff(i);
        if (c.is_zero()) continue;
        auto rc = restrict_to(c, d);
        if (!rc) return std::nullopt;
        r = r + CPoly::monomial(*rc, i);
    }
    return r;
}

CPoly compress(const CPoly& p, long long g) {
    if (g == 1) return p;
    CPoly r(p.M);
    for (size_t j = 0; j < p.comp.size(); ++j) {
        const auto& src = p.comp[j].num.c;
        std::vector<mpz_class> v;
        for (size_t i = 0; i < src.size(); i += static_cast<size_t>(g)) v.push_back(src[i]);
        r.comp[j] = QPoly(ZPoly(v), p.comp[j].den);
    }
    return r;
}

}  // namespace

CoeffScalar CoeffScalar::canonical() const {
    if (is_zero()) return *this;
    CoeffScalar r = *this;
    long long g = exponent_gcd(r);
    if (g > 1) {
        r.N_ = static_cast<int>(N_ / g);
        r.k_ = k_ / g;
        r.num_ = compress(num_, g);
        r.den_ = compress(den_, g);
    }
    int M = r.M();
    if (M > 1) {
        for (int d = 1; d < M; ++d) {
            if (M % d != 0) continue;
            auto n2 = restrict_poly(r.num_, d);
            if (!n2) continue;
            auto d2 = restrict_poly(r.den_, d);
            if (!d2) continue;
            r.num_ = *n2;
            r.den_ = *d2;
            break;
        }
    }
    return r;
}

CoeffScalar CoeffScalar::mul_qpow(const Rat& e) const {
    if (is_zero()) return *this;
    long long N2 = lcm_ll(N_, e.denominator());
    CoeffScalar r = lift(static_cast<int>(N2), M());
    r.k_ += e.numerator() * (N2 / e.denominator());
    return r;
}

CoeffScalar CoeffScalar::relabel(long long n) const {
    if (is_zero()) return *this;
    CoeffScalar r = *this;
    r.N_ = static_cast<int>(N_ * n);
    return r;
}

CoeffScalar CoeffScalar::unrelabel(long long n) const {
    if (is_zero()) return *this;
    long long g = std::gcd(n, static_cast<long long>(N_));
    long long f = n / g;
    CoeffScalar r = *this;
    r.N_ = static_cast<int>(N_ / g);
    r.k_ = k_ * f;
    r.num_ = spread(num_, f);
    r.den_ = spread(den_, f);
    return r;
}

namespace {

void align(const CoeffScalar& a, const CoeffScalar& b, CoeffScalar& x, CoeffScalar& y) {
    int N = std::lcm(a.N(), b.N());
    int M = std::lcm(a.M(), b.M());
    x = a.lift(N, M);
    y = b.lift(N, M);
}

}  // namespace

namespace {

CoeffScalar add_aligned(const CoeffScalar& a, const CoeffScalar& b) {
    long long k = std::min(a.k(), b.k());
    if (a.den_one() && b.den_one()) {
        if (a.k() == b.k()) return CoeffScalar::make(a.N(), k, a.num() + b.num(), one_poly(a.M()));
        if (a.k() == k) return CoeffScalar::make(a.N(), k, a.num() + shift_up(b.num(), b.k() - k), one_poly(a.M()));
        return CoeffScalar::make(a.N(), k, shift_up(a.num(), a.k() - k) + b.num(), one_poly(a.M()));
    }
    CPoly na = shift_up(a.num(), a.k() - k), nb = shift_up(b.num(), b.k() - k);
    if (a.den() == b.den()) return CoeffScalar::make(a.N(), k, na + nb, a.den());
    return CoeffScalar::make(a.N(), k, na * b.den() + nb * a.den(), a.den() * b.den());
}

}  // namespace

CoeffScalar operator+(const CoeffScalar& a0, const CoeffScalar& b0) {
    if (a0.is_zero()) return b0;
    if (b0.is_zero()) return a0;
    if (a0.N() == b0.N() && a0.M() == b0.M()) return add_aligned(a0, b0);
    CoeffScalar a, b;
    align(a0, b0, a, b);
    return add_aligned(a, b);
}

CoeffScalar operator-(const CoeffScalar& a) {
    if (a.is_zero()) return a;
    return CoeffScalar::make(a.N(), a.k(), -a.num(), a.den());
}

CoeffScalar operator-(const CoeffScalar& a, const CoeffScalar& b) { return a + (-b); }

CoeffScalar operator*(const CoeffScalar& a0, const CoeffScalar& b0) {
    if (a0.is_zero() || b0.is_zero()) return CoeffScalar();
    if (a0.N() == b0.N() && a0.M() == b0.M() && a0.den_one() && b0.den_one())
        return CoeffScalar::make(a0.N(), a0.k() + b0.k(), a0.num() * b0.num(), one_poly(a0.M()));
    CoeffScalar a, b;
    align(a0, b0, a, b);
    if (a.den_one() && b.den_one())
        return CoeffScalar::make(a.N(), a.k() + b.k(), a.num() * b.num(), one_poly(a.M()));
    // cross cancellation keeps the operands small
    CPoly na = a.num(), da = a.den(), nb = b.num(), db = b.den();
    if (db.degree() > 0 && na.degree() > 0) {
        CPoly g = gcd_unit_const(na, db);
        if (!g.is_one()) {
            na = divexact(na, g);
            db = divexact(db, g);
        }
    }
    if (da.degree() > 0 && nb.degree() > 0) {
        CPoly g = gcd_unit_const(nb, da);
        if (!g.is_one()) {
            nb = divexact(nb, g);
            da = divexact(da, g);
        }
    }
    return CoeffScalar::make(a.N(), a.k() + b.k(), na * nb, da * db);
}

CoeffScalar inv(const CoeffScalar& a) {
    if (a.is_zero()) fail(ErrorKind::ZeroDivisor, "inverse of zero scalar");
    return CoeffScalar::make(a.N(), -a.k(), a.den(), a.num());
}

CoeffScalar operator/(const CoeffScalar& a, const CoeffScalar& b) {
    if (b.is_zero()) fail(ErrorKind::ZeroDivisor, "division by zero scalar");
    if (b.is_monomial()) {
        // cheap path: divide by rho*q^e
        CoeffScalar bi = CoeffScalar(inverse(b.lead())).mul_qpow(-b.w());
        return a * bi;
    }
    return a * inv(b);
}

CoeffScalar pow(const CoeffScalar& a, long long e) {
    if (e < 0) return pow(inv(a), -e);
    CoeffScalar r(1), b = a;
    while (e) {
        if (e & 1) r = r * b;
        e >>= 1;
        if (e) b = b * b;
    }
    return r;
}

bool operator==(const CoeffScalar& a0, const CoeffScalar& b0) {
    if (a0.is_zero() || b0.is_zero()) return a0.is_zero() && b0.is_zero();
    CoeffScalar a, b;
    align(a0, b0, a, b);
    return a.k() == b.k() && a.num() == b.num() && a.den() == b.den();
}

namespace {

bool needs_parens(const std::string& s) {
    for (size_t i = 1; i < s.size(); ++i)
        if (s[i] == '+' || s[i] == '-') return true;
    return false;
}

std::string qpow_str(const Rat& e) {
    if (e == Rat(1)) return "q";
    if (is_integer(e)) return "q^" + std::to_string(e.numerator());
    return "q^(" + rat_str(e) + ")";
}

// Sum of coefficient*q^((k+i)/N) terms.
std::string poly_str(const CPoly& p, long long k, int N) {
    std::string out;
    long long deg = p.degree();
    for (long long i = 0; i <= deg; ++i) {
        Cyclo c = p.coeff(i);
        if (c.is_zero()) continue;
        Rat e(k + i, N);
        std::string cs = to_string(c);
        std::string term;
        if (e == Rat(0)) {
            term = cs;
        } else if (cs == "1") {
            term = qpow_str(e);
        } else if (cs == "-1") {
            term = "-" + qpow_str(e);
        } else if (needs_parens(cs)) {
            term = "(" + cs + ")*" + qpow_str(e);
        } else {
            term = cs + "*" + qpow_str(e);
        }
        if (out.empty())
            out = term;
        else if (term[0] == '-')
            out += term;
        else
            out += "+" + term;
    }
    return out.empty() ? "0" : out;
}

}  // namespace

std::string to_string(const CoeffScalar& c0) {
    if (c0.is_zero()) return "0";
    CoeffScalar c = c0.canonical();
    if (c.den_one()) {
        // den is the constant 1 after reduction
        return poly_str(c.num(), c.k(), c.N());
    }
    long long kn = std::max(c.k(), 0LL), kd = std::max(-c.k(), 0LL);
    std::string n = poly_str(c.num(), kn, c.N());
    std::string d = poly_str(c.den(), kd, c.N());
    if (needs_parens(n)) n = "(" + n + ")";
    return n + "/(" + d + ")";
}

std::pair<Rat, CoeffScalar> normalize_scalar(const CoeffScalar& c) {
    if (c.is_zero()) fail(ErrorKind::ZeroScalar, "normalize_scalar of zero");
    Rat k = c.w();
    return {k, c.mul_qpow(-k)};
}

std::optional<long long> q_power_class(const CoeffScalar& c, long long n) {
    if (c.is_zero()) fail(ErrorKind::ZeroScalar, "q_power_class of zero");
    if (n < 1) fail(ErrorKind::InvalidArgument, "q_power_class needs n >= 1");
    if (!c.is_monomial() || !c.lead().is_one()) return std::nullopt;
    Rat kn = c.w() * Rat(n);
    if (!is_integer(kn)) return std::nullopt;
    return kn.numerator();
}

std::optional<long long> torsion_order(const CoeffScalar& c) {
    if (c.is_zero()) fail(ErrorKind::ZeroScalar, "torsion_order of zero");
    if (!c.is_monomial()) return std::nullopt;
    long long ord = root_of_unity_order(c.lead());
    if (ord == 0) return std::nullopt;
    return lcm_ll(ord, c.w().denominator());
}

CoeffScalar fundamental_rep(const CoeffScalar& c) {
    if (c.is_zero()) fail(ErrorKind::ZeroScalar, "fundamental_rep of zero");
    return c.mul_qpow(Rat(-floor_rat(c.w())));
}

}  // namespace qd
