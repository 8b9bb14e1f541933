#include "qdiff/cyclo.hpp"

#include "qdiff/errors.hpp"

#include <map>
#include <mutex>
#include <numeric>

namespace qd {

int euler_phi(int M) {
    int r = M, m = M;
    for (int p = 2; p * p <= m; ++p) {
        if (m % p) continue;
        while (m % p == 0) m /= p;
        r -= r / p;
    }
    if (m > 1) r -= r / m;
    return r;
}

namespace {

using IVec = std::vector<mpz_class>;

// Exact division of integer polynomials by a monic divisor.
IVec div_monic(IVec a, const IVec& b) {
    size_t db = b.size() - 1;
    IVec q(a.size() - db, mpz_class(0));
    for (size_t i = a.size(); i-- > db;) {
        mpz_class lead = a[i];
        q[i - db] = lead;
        if (lead == 0) continue;
        for (size_t j = 0; j <= db; ++j) a[i - db + j] -= lead * b[j];
    }
    return q;
}

IVec cyclotomic_poly(int M, std::map<int, IVec>& memo) {
    auto it = memo.find(M);
    if (it != memo.end()) return it->second;
    IVec p(static_cast<size_t>(M) + 1, mpz_class(0));
    p[0] = -1;
    p[static_cast<size_t>(M)] = 1;
    for (int d = 1; d < M; ++d)
        if (M % d == 0) p = div_monic(p, cyclotomic_poly(d, memo));
    memo[M] = p;
    return p;
}

std::mutex table_mutex;
std::map<int, std::unique_ptr<CycloTable>> tables;
std::map<int, IVec> phi_memo;

}  // namespace

const CycloTable& cyclo_table(int M) {
    if (M < 1) fail(ErrorKind::InvalidArgument, "cyclotomic order must be positive");
    std::lock_guard<std::mutex> lock(table_mutex);
    auto it = tables.find(M);
    if (it != tables.end()) return *it->second;
    auto t = std::make_unique<CycloTable>();
    t->M = M;
    t->phi = cyclotomic_poly(M, phi_memo);
    t->deg = static_cast<int>(t->phi.size()) - 1;
    const size_t d = static_cast<size_t>(t->deg);
    IVec cur(d, mpz_class(0));
    cur[0] = 1;
    if (d == 1 && M == 1) cur[0] = 1;
    for (int k = 0; k < M; ++k) {
        t->pow.push_back(cur);
        // multiply by x and reduce
        IVec nxt(d, mpz_class(0));
        mpz_class top = cur[d - 1];
        for (size_t j = d - 1; j > 0; --j) nxt[j] = cur[j - 1];
        nxt[0] = 0;
        if (d == 1) nxt[0] = 0;
        if (top != 0)
            for (size_t j = 0; j < d; ++j) nxt[j] -= top * t->phi[j];
        cur = nxt;
    }
    auto& ref = *t;
    tables[M] = std::move(t);
    return ref;
}

// ---------------------------------------------------------------- Cyclo

Cyclo::Cyclo(int M, std::vector<mpq_class> a) : M_(M), a_(std::move(a)) {
    a_.resize(static_cast<size_t>(cyclo_table(M).deg), mpq_class(0));
}

Cyclo Cyclo::rational(const mpq_class& r, int M) {
    std::vector<mpq_class> a(static_cast<size_t>(cyclo_table(M).deg), mpq_class(0));
    a[0] = r;
    return Cyclo(M, a);
}

Cyclo Cyclo::zeta(int M, long long k) {
    const auto& t = cyclo_table(M);
    long long kk = ((k % M) + M) % M;
    std::vector<mpq_class> a(static_cast<size_t>(t.deg));
    for (int j = 0; j < t.deg; ++j) a[static_cast<size_t>(j)] = mpq_class(t.pow[static_cast<size_t>(kk)][static_cast<size_t>(j)]);
    return Cyclo(M, a);
}

bool Cyclo::is_zero() const {
    for (const auto& x : a_)
        if (x != 0) return false;
    return true;
}

bool Cyclo::is_rational() const {
    for (size_t j = 1; j < a_.size(); ++j)
        if (a_[j] != 0) return false;
    return true;
}

bool Cyclo::is_one() const { return is_rational() && a_[0] == 1; }

Cyclo Cyclo::reduced() const {
    if (M_ != 1 && is_rational()) return Cyclo::rational(a_[0], 1);
    return *this;
}

Cyclo embed(const Cyclo& c, int M2) {
    if (c.M() == M2) return c;
    if (M2 % c.M() != 0) fail(ErrorKind::InvalidArgument, "cyclotomic embedding needs M | M2");
    const auto& t2 = cyclo_table(M2);
    int r = M2 / c.M();
    std::vector<mpq_class> a(static_cast<size_t>(t2.deg), mpq_class(0));
    const auto& ca = c.coeffs();
    for (size_t j = 0; j < ca.size(); ++j) {
        if (ca[j] == 0) continue;
        const auto& p = t2.pow[(j * static_cast<size_t>(r)) % static_cast<size_t>(M2)];
        for (size_t i = 0; i < a.size(); ++i)
            if (p[i] != 0) a[i] += ca[j] * p[i];
    }
    return Cyclo(M2, a);
}

namespace {
int common_M(int a, int b) { return std::lcm(a, b); }
}  // namespace

Cyclo operator+(const Cyclo& x, const Cyclo& y) {
    int M = common_M(x.M(), y.M());
    Cyclo a = embed(x, M), b = embed(y, M);
    std::vector<mpq_class> r = a.coeffs();
    for (size_t i = 0; i < r.size(); ++i) r[i] += b.coeffs()[i];
    return Cyclo(M, r);
}

Cyclo operator-(const Cyclo& x) {
    std::vector<mpq_class> r = x.coeffs();
    for (auto& v : r) v = -v;
    return Cyclo(x.M(), r);
}

Cyclo operator-(const Cyclo& x, const Cyclo& y) { return x + (-y); }

Cyclo operator*(const Cyclo& x, const Cyclo& y) {
    int M = common_M(x.M(), y.M());
    Cyclo a = embed(x, M), b = embed(y, M);
    const auto& t = cyclo_table(M);
    size_t d = static_cast<size_t>(t.deg);
    if (d == 1) return Cyclo::rational(a.coeffs()[0] * b.coeffs()[0], M);
    std::vector<mpq_class> conv(2 * d - 1, mpq_class(0));
    for (size_t i = 0; i < d; ++i) {
        if (a.coeffs()[i] == 0) continue;
        for (size_t j = 0; j < d; ++j) conv[i + j] += a.coeffs()[i] * b.coeffs()[j];
    }
    std::vector<mpq_class> r(d, mpq_class(0));
    for (size_t k = 0; k < conv.size(); ++k) {
        if (conv[k] == 0) continue;
        if (k < d) {
            r[k] += conv[k];
            continue;
        }
        const auto& p = t.pow[k % static_cast<size_t>(M)];
        for (size_t i = 0; i < d; ++i)
            if (p[i] != 0) r[i] += conv[k] * p[i];
    }
    return Cyclo(M, r);
}

bool operator==(const Cyclo& x, const Cyclo& y) {
    int M = common_M(x.M(), y.M());
    return embed(x, M).coeffs() == embed(y, M).coeffs();
}

namespace {

using QVec = std::vector<mpq_class>;

void qtrim(QVec& v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
}

QVec qsub_mul(const QVec& a, const QVec& b, const QVec& c) {  // a - b*c
    QVec r = a;
    if (!b.empty() && !c.empty()) {
        r.resize(std::max(a.size(), b.size() + c.size() - 1), mpq_class(0));
        for (size_t i = 0; i < b.size(); ++i)
            for (size_t j = 0; j < c.size(); ++j) r[i + j] -= b[i] * c[j];
    }
    qtrim(r);
    return r;
}

void qdivrem(const QVec& a, const QVec& b, QVec& q, QVec& r) {
    r = a;
    qtrim(r);
    q.assign(r.size() >= b.size() ? r.size() - b.size() + 1 : 0, mpq_class(0));
    while (!r.empty() && r.size() >= b.size()) {
        size_t sh = r.size() - b.size();
        mpq_class f = r.back() / b.back();
        q[sh] = f;
        for (size_t j = 0; j < b.size(); ++j) r[sh + j] -= f * b[j];
        qtrim(r);
    }
}

}  // namespace

Cyclo inverse(const Cyclo& x) {
    if (x.is_zero()) fail(ErrorKind::ZeroDivisor, "inverse of zero cyclotomic number");
    const auto& t = cyclo_table(x.M());
    if (t.deg == 1) return Cyclo::rational(1 / x.coeffs()[0], x.M());
    // extended Euclid: find u with u*x = 1 mod Phi_M
    QVec r0(t.phi.begin(), t.phi.end()), r1 = x.coeffs();
    qtrim(r0);
    qtrim(r1);
    QVec s0, s1{mpq_class(1)};
    while (r1.size() > 1) {
        QVec q, r;
        qdivrem(r0, r1, q, r);
        QVec s2 = qsub_mul(s0, q, s1);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
    }
    mpq_class c = r1[0];
    for (auto& v : s1) v /= c;
    s1.resize(static_cast<size_t>(t.deg), mpq_class(0));
    return Cyclo(x.M(), s1);
}

Cyclo pow(const Cyclo& a, long long e) {
    if (e < 0) return pow(inverse(a), -e);
    Cyclo r = Cyclo::rational(1, a.M()), b = a;
    while (e) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

long long root_of_unity_order(const Cyclo& a) {
    if (a.is_zero()) return 0;
    long long L = std::lcm(2LL, static_cast<long long>(a.M()));
    if (!pow(a, L).is_one()) return 0;
    for (long long d = 1; d <= L; ++d)
        if (L % d == 0 && pow(a, d).is_one()) return d;
    return L;
}

mpq_class norm_to_q(const Cyclo& a) {
    const int M = a.M();
    const auto& t = cyclo_table(M);
    if (t.deg == 1) return a.coeffs()[0];
    Cyclo prod = Cyclo::rational(1, M);
    for (int j = 1; j < M; ++j) {
        if (std::gcd(j, M) != 1) continue;
        std::vector<mpq_class> c(static_cast<size_t>(t.deg), mpq_class(0));
        for (size_t k = 0; k < a.coeffs().size(); ++k) {
            if (a.coeffs()[k] == 0) continue;
            const auto& p = t.pow[(k * static_cast<size_t>(j)) % static_cast<size_t>(M)];
            for (size_t i = 0; i < c.size(); ++i)
                if (p[i] != 0) c[i] += a.coeffs()[k] * p[i];
        }
        prod = prod * Cyclo(M, c);
    }
    return prod.coeffs()[0];
}

std::string to_string(const Cyclo& a) {
    std::string out;
    const auto& c = a.coeffs();
    for (size_t j = 0; j < c.size(); ++j) {
        if (c[j] == 0) continue;
        std::string term;
        if (j == 0) {
            term = c[j].get_str();
        } else {
            std::string z = "zeta_" + std::to_string(a.M());
            if (j > 1) z += "^" + std::to_string(j);
            if (c[j] == 1)
                term = z;
            else if (c[j] == -1)
                term = "-" + z;
            else
                term = c[j].get_str() + "*" + z;
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

// ---------------------------------------------------------------- CPoly

CPoly::CPoly(int m) : M(m), comp(static_cast<size_t>(cyclo_table(m).deg)) {}

CPoly CPoly::constant(const Cyclo& c) { return monomial(c, 0); }

CPoly CPoly::monomial(const Cyclo& c, long long k) {
    CPoly p(c.M());
    for (size_t j = 0; j < p.comp.size(); ++j) {
        const mpq_class& v = c.coeffs()[j];
        if (v == 0) continue;
        p.comp[j] = shift_up(QPoly::constant(v), k);
    }
    return p;
}

bool CPoly::zero() const {
    for (const auto& q : comp)
        if (!q.zero()) return false;
    return true;
}

long long CPoly::degree() const {
    long long d = -1;
    for (const auto& q : comp) d = std::max(d, q.degree());
    return d;
}

long long CPoly::low_order() const {
    long long lo = -1;
    for (const auto& q : comp) {
        for (size_t i = 0; i < q.num.c.size(); ++i) {
            if (q.num.c[i] != 0) {
                long long ii = static_cast<long long>(i);
                if (lo < 0 || ii < lo) lo = ii;
                break;
            }
        }
    }
    return lo;
}

Cyclo CPoly::coeff(long long i) const {
    std::vector<mpq_class> a(comp.size());
    for (size_t j = 0; j < comp.size(); ++j) a[j] = comp[j].coeff(i);
    return Cyclo(M, a);
}

bool CPoly::is_one() const {
    if (comp[0].degree() != 0 || comp[0].coeff(0) != 1) return false;
    for (size_t j = 1; j < comp.size(); ++j)
        if (!comp[j].zero()) return false;
    return true;
}

size_t CPoly::term_count() const {
    long long d = degree();
    size_t n = 0;
    for (long long i = 0; i <= d; ++i)
        if (!coeff(i).is_zero()) ++n;
    return n;
}

bool operator==(const CPoly& a, const CPoly& b) { return a.M == b.M && a.comp == b.comp; }

CPoly operator+(const CPoly& a, const CPoly& b) {
    CPoly r(a.M);
    for (size_t j = 0; j < r.comp.size(); ++j) r.comp[j] = a.comp[j] + b.comp[j];
    return r;
}

CPoly operator-(const CPoly& a) {
    CPoly r(a.M);
    for (size_t j = 0; j < r.comp.size(); ++j) r.comp[j] = -a.comp[j];
    return r;
}

CPoly operator-(const CPoly& a, const CPoly& b) {
    CPoly r(a.M);
    for (size_t j = 0; j < r.comp.size(); ++j) r.comp[j] = a.comp[j] - b.comp[j];
    return r;
}

CPoly operator*(const CPoly& a, const CPoly& b) {
    const auto& t = cyclo_table(a.M);
    size_t d = static_cast<size_t>(t.deg);
    CPoly r(a.M);
    if (d == 1) {
        r.comp[0] = a.comp[0] * b.comp[0];
        return r;
    }
    std::vector<QPoly> conv(2 * d - 1);
    for (size_t i = 0; i < d; ++i) {
        if (a.comp[i].zero()) continue;
        for (size_t j = 0; j < d; ++j) {
            if (b.comp[j].zero()) continue;
            conv[i + j] = conv[i + j] + a.comp[i] * b.comp[j];
        }
    }
    for (size_t k = 0; k < conv.size(); ++k) {
        if (conv[k].zero()) continue;
        if (k < d) {
            r.comp[k] = r.comp[k] + conv[k];
            continue;
        }
        const auto& p = t.pow[k % static_cast<size_t>(a.M)];
        for (size_t i = 0; i < d; ++i)
            if (p[i] != 0) r.comp[i] = r.comp[i] + scale(conv[k], mpq_class(p[i]));
    }
    return r;
}

CPoly scale(const CPoly& a, const Cyclo& c) {
    if (c.is_rational()) return scale(a, c.coeffs()[0]);
    return a * CPoly::constant(embed(c, a.M));
}

CPoly scale(const CPoly& a, const mpq_class& c) {
    CPoly r(a.M);
    for (size_t j = 0; j < r.comp.size(); ++j) r.comp[j] = scale(a.comp[j], c);
    return r;
}

CPoly shift_up(const CPoly& a, long long k) {
    CPoly r(a.M);
    for (size_t j = 0; j < r.comp.size(); ++j) r.comp[j] = shift_up(a.comp[j], k);
    return r;
}

CPoly shift_down(const CPoly& a, long long k) {
    if (k == 0) return a;
    CPoly r(a.M);
    for (size_t j = 0; j < r.comp.size(); ++j) {
        const auto& n = a.comp[j].num.c;
        if (static_cast<long long>(n.size()) <= k) continue;
        std::vector<mpz_class> v(n.begin() + k, n.end());
        r.comp[j] = QPoly(ZPoly(v), a.comp[j].den);
    }
    return r;
}

CPoly spread(const CPoly& a, long long rr) {
    if (rr == 1) return a;
    CPoly r(a.M);
    for (size_t j = 0; j < r.comp.size(); ++j) r.comp[j] = spread(a.comp[j], rr);
    return r;
}

CPoly embed(const CPoly& a, int M2) {
    if (a.M == M2) return a;
    if (M2 % a.M != 0) fail(ErrorKind::InvalidArgument, "cyclotomic embedding needs M | M2");
    const auto& t2 = cyclo_table(M2);
    int rr = M2 / a.M;
    CPoly r(M2);
    for (size_t j = 0; j < a.comp.size(); ++j) {
        if (a.comp[j].zero()) continue;
        const auto& p = t2.pow[(j * static_cast<size_t>(rr)) % static_cast<size_t>(M2)];
        for (size_t i = 0; i < r.comp.size(); ++i)
            if (p[i] != 0) r.comp[i] = r.comp[i] + scale(a.comp[j], mpq_class(p[i]));
    }
    return r;
}

void divrem(const CPoly& a, const CPoly& b, CPoly& q, CPoly& r) {
    if (b.zero()) fail(ErrorKind::ZeroDivisor, "polynomial division by zero");
    long long db = b.degree();
    Cyclo lead_inv = inverse(b.coeff(db));
    q = CPoly(a.M);
    r = a;
    long long dr = r.degree();
    while (!r.zero() && dr >= db) {
        Cyclo f = r.coeff(dr) * lead_inv;
        CPoly t = CPoly::monomial(f, dr - db);
        q = q + t;
        r = r - t * b;
        long long nd = r.degree();
        if (nd >= dr) fail(ErrorKind::InvalidArgument, "polynomial division failed to reduce degree");
        dr = nd;
    }
}

CPoly gcd_unit_const(const CPoly& a0, const CPoly& b0) {
    CPoly a = a0, b = b0;
    while (!b.zero()) {
        CPoly q, r;
        divrem(a, b, q, r);
        a = b;
        b = r;
    }
    if (a.degree() <= 0) return CPoly::constant(Cyclo::rational(1, a0.M));
    Cyclo c0 = a.coeff(0);
    if (c0.is_zero()) fail(ErrorKind::InvalidArgument, "gcd with vanishing constant term");
    return scale(a, inverse(c0));
}

CPoly divexact(const CPoly& a, const CPoly& b) {
    CPoly q, r;
    divrem(a, b, q, r);
    if (!r.zero()) fail(ErrorKind::InvalidArgument, "inexact polynomial division");
    return q;
}

}  // namespace qd

namespace qd {

std::optional<Cyclo> restrict_to(const Cyclo& a, int d) {
    const int M = a.M();
    if (d == M) return a;
    if (M % d != 0) return std::nullopt;
    if (a.is_rational()) return Cyclo::rational(a.coeffs()[0], d);
    const auto& tM = cyclo_table(M);
    const auto& td = cyclo_table(d);
    const size_t rows = static_cast<size_t>(tM.deg), cols = static_cast<size_t>(td.deg);
    const size_t r = static_cast<size_t>(M / d);
    // augmented system: columns are the images of zeta_d^j in the M basis
    std::vector<std::vector<mpq_class>> m(rows, std::vector<mpq_class>(cols + 1));
    for (size_t j = 0; j < cols; ++j) {
        const auto& p = tM.pow[(j * r) % static_cast<size_t>(M)];
        for (size_t i = 0; i < rows; ++i) m[i][j] = p[i];
    }
    for (size_t i = 0; i < rows; ++i) m[i][cols] = a.coeffs()[i];
    size_t row = 0;
    std::vector<size_t> pivcol;
    for (size_t c = 0; c < cols && row < rows; ++c) {
        size_t piv = row;
        while (piv < rows && m[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(m[piv], m[row]);
        for (size_t i = 0; i < rows; ++i) {
            if (i == row || m[i][c] == 0) continue;
            mpq_class f = m[i][c] / m[row][c];
            for (size_t k = c; k <= cols; ++k) m[i][k] -= f * m[row][k];
        }
        pivcol.push_back(c);
        ++row;
    }
    for (size_t i = row; i < rows; ++i)
        if (m[i][cols] != 0) return std::nullopt;
    std::vector<mpq_class> out(cols, mpq_class(0));
    for (size_t i = 0; i < pivcol.size(); ++i) out[pivcol[i]] = m[i][cols] / m[i][pivcol[i]];
    return Cyclo(d, out);
}

}  // namespace qd
