#include "qdiff/poly.hpp"

#include <algorithm>
#include <cstring>

namespace qd {

ZPoly ZPoly::constant(const mpz_class& a) {
    ZPoly p;
    if (a != 0) p.c.push_back(a);
    return p;
}

void ZPoly::trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

bool operator==(const ZPoly& a, const ZPoly& b) { return a.c == b.c; }

ZPoly operator+(const ZPoly& a, const ZPoly& b) {
    ZPoly r;
    const ZPoly& big = a.c.size() >= b.c.size() ? a : b;
    const ZPoly& small = a.c.size() >= b.c.size() ? b : a;
    r.c = big.c;
    for (size_t i = 0; i < small.c.size(); ++i) r.c[i] += small.c[i];
    r.trim();
    return r;
}

ZPoly operator-(const ZPoly& a) {
    ZPoly r = a;
    for (auto& x : r.c) x = -x;
    return r;
}

ZPoly operator-(const ZPoly& a, const ZPoly& b) {
    ZPoly r;
    r.c.resize(std::max(a.c.size(), b.c.size()));
    for (size_t i = 0; i < a.c.size(); ++i) r.c[i] = a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r.c[i] -= b.c[i];
    r.trim();
    return r;
}

namespace {

ZPoly mul_school(const ZPoly& a, const ZPoly& b) {
    ZPoly r;
    r.c.assign(a.c.size() + b.c.size() - 1, mpz_class(0));
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == 0) continue;
        for (size_t j = 0; j < b.c.size(); ++j)
            mpz_addmul(r.c[i + j].get_mpz_t(), a.c[i].get_mpz_t(), b.c[j].get_mpz_t());
    }
    r.trim();
    return r;
}

size_t max_bits(const ZPoly& a) {
    size_t m = 1;
    for (const auto& x : a.c)
        if (x != 0) m = std::max(m, mpz_sizeinbase(x.get_mpz_t(), 2));
    return m;
}

// Packs sum a_i 2^(i*w*GMP_NUMB_BITS) into an integer; negative coefficients
// are packed separately so that each slot is a plain limb copy.
mpz_class pack(const ZPoly& a, size_t w) {
    size_t n = a.c.size() * w;
    std::vector<mp_limb_t> pos(n, 0), neg(n, 0);
    bool any_neg = false;
    for (size_t i = 0; i < a.c.size(); ++i) {
        int s = sgn(a.c[i]);
        if (s == 0) continue;
        const mpz_srcptr z = a.c[i].get_mpz_t();
        size_t sz = mpz_size(z);
        const mp_limb_t* src = mpz_limbs_read(z);
        auto& dst = s > 0 ? pos : neg;
        if (s < 0) any_neg = true;
        std::memcpy(dst.data() + i * w, src, sz * sizeof(mp_limb_t));
    }
    auto to_mpz = [](const std::vector<mp_limb_t>& v) {
        mpz_class r;
        if (v.empty()) return r;
        mp_limb_t* d = mpz_limbs_write(r.get_mpz_t(), static_cast<mp_size_t>(v.size()));
        std::memcpy(d, v.data(), v.size() * sizeof(mp_limb_t));
        mpz_limbs_finish(r.get_mpz_t(), static_cast<mp_size_t>(v.size()));
        return r;
    };
    mpz_class r = to_mpz(pos);
    if (any_neg) r -= to_mpz(neg);
    return r;
}

ZPoly mul_kronecker(const ZPoly& a, const ZPoly& b) {
    size_t bits = max_bits(a) + max_bits(b) + 2;
    size_t m = std::min(a.c.size(), b.c.size());
    while (m > 1) {
        ++bits;
        m = (m + 1) / 2;
    }
    size_t w = (bits + GMP_NUMB_BITS - 1) / GMP_NUMB_BITS;
    mpz_class A = pack(a, w), B = pack(b, w);
    mpz_class C = A * B;
    int sign = sgn(C);
    if (sign < 0) C = -C;
    size_t nc = a.c.size() + b.c.size() - 1;
    const mp_limb_t* limbs = mpz_limbs_read(C.get_mpz_t());
    size_t sz = mpz_size(C.get_mpz_t());
    mpz_class half, full;
    mpz_ui_pow_ui(half.get_mpz_t(), 2, w * GMP_NUMB_BITS - 1);
    full = half * 2;
    ZPoly r;
    r.c.resize(nc);
    int carry = 0;
    std::vector<mp_limb_t> slot(w);
    for (size_t i = 0; i < nc; ++i) {
        for (size_t j = 0; j < w; ++j) {
            size_t idx = i * w + j;
            slot[j] = idx < sz ? limbs[idx] : 0;
        }
        mpz_class v;
        mp_limb_t* d = mpz_limbs_write(v.get_mpz_t(), static_cast<mp_size_t>(w));
        std::memcpy(d, slot.data(), w * sizeof(mp_limb_t));
        mpz_limbs_finish(v.get_mpz_t(), static_cast<mp_size_t>(w));
        if (carry) v += 1;
        if (v >= half) {
            v -= full;
            carry = 1;
        } else {
            carry = 0;
        }
        r.c[i] = sign < 0 ? mpz_class(-v) : v;
    }
    r.trim();
    return r;
}

}  // namespace

ZPoly operator*(const ZPoly& a, const ZPoly& b) {
    if (a.zero() || b.zero()) return ZPoly();
    if (std::min(a.c.size(), b.c.size()) < 12) return mul_school(a, b);
    return mul_kronecker(a, b);
}

ZPoly scale(const ZPoly& a, const mpz_class& k) {
    if (k == 0) return ZPoly();
    ZPoly r = a;
    for (auto& x : r.c) x *= k;
    return r;
}

ZPoly shift_up(const ZPoly& a, long long k) {
    if (a.zero() || k == 0) return a;
    ZPoly r;
    r.c.assign(static_cast<size_t>(k), mpz_class(0));
    r.c.insert(r.c.end(), a.c.begin(), a.c.end());
    return r;
}

ZPoly spread(const ZPoly& a, long long rr) {
    if (rr == 1 || a.zero()) return a;
    ZPoly r;
    r.c.assign(static_cast<size_t>(a.degree() * rr + 1), mpz_class(0));
    for (size_t i = 0; i < a.c.size(); ++i) r.c[i * rr] = a.c[i];
    return r;
}

mpz_class content(const ZPoly& a) {
    mpz_class g = 0;
    for (const auto& x : a.c) {
        if (x == 0) continue;
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
        if (g == 1) break;
    }
    return g;
}

void divexact_inplace(ZPoly& a, const mpz_class& k) {
    for (auto& x : a.c) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), k.get_mpz_t());
}

QPoly QPoly::constant(const mpq_class& a) {
    QPoly p;
    p.num = ZPoly::constant(a.get_num());
    p.den = a.get_den();
    if (p.num.zero()) p.den = 1;
    return p;
}

mpq_class QPoly::coeff(long long i) const {
    if (i < 0 || i > num.degree()) return 0;
    mpq_class r(num.c[static_cast<size_t>(i)], den);
    r.canonicalize();
    return r;
}

void QPoly::normalize() {
    if (num.zero()) {
        den = 1;
        return;
    }
    if (den < 0) {
        den = -den;
        num = -num;
    }
    if (den == 1) return;
    mpz_class g = content(num);
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), den.get_mpz_t());
    if (g != 1) {
        divexact_inplace(num, g);
        mpz_divexact(den.get_mpz_t(), den.get_mpz_t(), g.get_mpz_t());
    }
}

bool operator==(const QPoly& a, const QPoly& b) { return a.den == b.den && a.num == b.num; }

QPoly operator+(const QPoly& a, const QPoly& b) {
    if (a.zero()) return b;
    if (b.zero()) return a;
    if (a.den == b.den) return QPoly(a.num + b.num, a.den);
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.den.get_mpz_t(), b.den.get_mpz_t());
    mpz_class fa = b.den / g, fb = a.den / g;
    return QPoly(scale(a.num, fa) + scale(b.num, fb), a.den * fa);
}

QPoly operator-(const QPoly& a) {
    QPoly r = a;
    r.num = -r.num;
    return r;
}

QPoly operator-(const QPoly& a, const QPoly& b) { return a + (-b); }

QPoly operator*(const QPoly& a, const QPoly& b) {
    if (a.zero() || b.zero()) return QPoly();
    return QPoly(a.num * b.num, a.den * b.den);
}

QPoly scale(const QPoly& a, const mpq_class& k) {
    if (k == 0 || a.zero()) return QPoly();
    return QPoly(scale(a.num, k.get_num()), a.den * k.get_den());
}

QPoly shift_up(const QPoly& a, long long k) {
    if (k == 0) return a;
    QPoly r;
    r.num = shift_up(a.num, k);
    r.den = a.den;
    return r;
}

QPoly spread(const QPoly& a, long long rr) {
    if (rr == 1) return a;
    QPoly r;
    r.num = spread(a.num, rr);
    r.den = a.den;
    return r;
}

}  // namespace qd
