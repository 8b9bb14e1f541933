#include "qdiff/series.hpp"

#include "qdiff/errors.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace qd {

namespace {

constexpr long long kInf = std::numeric_limits<long long>::max() / 4;

long long ceil_div(long long a, long long b) { return -floor_div(-a, b); }

}  // namespace

PuiseuxSeries::PuiseuxSeries(const CoeffScalar& c) {
    if (!c.is_zero()) c_.push_back(c);
}

PuiseuxSeries PuiseuxSeries::monomial(const CoeffScalar& c, const Rat& e) {
    PuiseuxSeries r;
    r.n_ = e.denominator();
    r.lo_ = e.numerator();
    if (!c.is_zero()) r.c_.push_back(c);
    r.normalize();
    return r;
}

PuiseuxSeries PuiseuxSeries::big_o(const Rat& p) {
    PuiseuxSeries r;
    r.n_ = p.denominator();
    r.exact_ = false;
    r.prec_ = p.numerator();
    return r;
}

PuiseuxSeries PuiseuxSeries::from_terms(long long n, long long lo, std::vector<CoeffScalar> c, bool exact,
                                        long long prec) {
    PuiseuxSeries r;
    r.n_ = n;
    r.lo_ = lo;
    r.c_ = std::move(c);
    r.exact_ = exact;
    r.prec_ = prec;
    r.normalize();
    return r;
}

void PuiseuxSeries::normalize() {
    if (!exact_) {
        long long keep = prec_ - lo_;
        if (keep <= 0)
            c_.clear();
        else if (static_cast<long long>(c_.size()) > keep)
            c_.resize(static_cast<size_t>(keep));
    }
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    size_t first = 0;
    while (first < c_.size() && c_[first].is_zero()) ++first;
    if (first > 0) {
        c_.erase(c_.begin(), c_.begin() + static_cast<long>(first));
        lo_ += static_cast<long long>(first);
    }
    if (c_.empty()) lo_ = 0;
}

std::optional<Rat> PuiseuxSeries::prec() const {
    if (exact_) return std::nullopt;
    return Rat(prec_, n_);
}

Rat PuiseuxSeries::val() const {
    if (c_.empty()) fail(ErrorKind::ZeroDivisor, "valuation of a series with no known nonzero term");
    return Rat(lo_, n_);
}

Rat PuiseuxSeries::val_or_prec() const {
    if (!c_.empty()) return Rat(lo_, n_);
    if (exact_) fail(ErrorKind::ZeroDivisor, "valuation of the zero series");
    return Rat(prec_, n_);
}

CoeffScalar PuiseuxSeries::coeff(const Rat& e) const {
    Rat idx = e * Rat(n_);
    if (!is_integer(idx)) return CoeffScalar();
    long long i = idx.numerator() - lo_;
    if (i < 0 || i >= static_cast<long long>(c_.size())) return CoeffScalar();
    return c_[static_cast<size_t>(i)];
}

CoeffScalar PuiseuxSeries::lead() const {
    if (c_.empty()) fail(ErrorKind::ZeroDivisor, "leading coefficient of a zero series");
    return c_.front();
}

bool PuiseuxSeries::is_constant() const { return exact_ && (c_.empty() || (c_.size() == 1 && lo_ == 0)); }

int PuiseuxSeries::scalar_N() const {
    int N = 1;
    for (const auto& c : c_) N = std::lcm(N, c.N());
    return N;
}

int PuiseuxSeries::scalar_M() const {
    int M = 1;
    for (const auto& c : c_) M = std::lcm(M, c.M());
    return M;
}

PuiseuxSeries PuiseuxSeries::ramify(long long n2) const {
    if (n2 == n_) return *this;
    if (n2 % n_ != 0) fail(ErrorKind::InvalidArgument, "ramification must be a multiple");
    long long f = n2 / n_;
    PuiseuxSeries r;
    r.n_ = n2;
    r.exact_ = exact_;
    r.prec_ = prec_ * f;
    r.lo_ = lo_ * f;
    if (!c_.empty()) {
        r.c_.assign((c_.size() - 1) * static_cast<size_t>(f) + 1, CoeffScalar());
        for (size_t i = 0; i < c_.size(); ++i) r.c_[i * static_cast<size_t>(f)] = c_[i];
    }
    return r;
}

PuiseuxSeries PuiseuxSeries::truncate(const Rat& p) const {
    PuiseuxSeries r = *this;
    long long idx = ceil_div(p.numerator() * n_, p.denominator());
    if (r.exact_ || idx < r.prec_) {
        r.exact_ = false;
        r.prec_ = idx;
    }
    r.normalize();
    return r;
}

PuiseuxSeries PuiseuxSeries::shift(const Rat& e) const {
    long long n2 = lcm_ll(n_, e.denominator());
    PuiseuxSeries r = ramify(n2);
    long long d = e.numerator() * (n2 / e.denominator());
    if (!r.c_.empty()) r.lo_ += d;
    r.prec_ += d;
    return r;
}

namespace {

void join(const PuiseuxSeries& a, const PuiseuxSeries& b, PuiseuxSeries& x, PuiseuxSeries& y) {
    long long n = lcm_ll(a.ram(), b.ram());
    x = a.ramify(n);
    y = b.ramify(n);
}

}  // namespace

PuiseuxSeries operator+(const PuiseuxSeries& a0, const PuiseuxSeries& b0) {
    PuiseuxSeries a, b;
    join(a0, b0, a, b);
    PuiseuxSeries r;
    r.n_ = a.n_;
    r.exact_ = a.exact_ && b.exact_;
    long long pa = a.exact_ ? kInf : a.prec_, pb = b.exact_ ? kInf : b.prec_;
    r.prec_ = r.exact_ ? 0 : std::min(pa, pb);
    if (a.c_.empty() && b.c_.empty()) {
        r.normalize();
        return r;
    }
    long long lo = kInf, hi = -kInf;
    for (const PuiseuxSeries* s : {&a, &b}) {
        if (s->c_.empty()) continue;
        lo = std::min(lo, s->lo_);
        hi = std::max(hi, s->lo_ + static_cast<long long>(s->c_.size()));
    }
    if (!r.exact_) hi = std::min(hi, r.prec_);
    if (hi <= lo) {
        r.normalize();
        return r;
    }
    r.lo_ = lo;
    r.c_.assign(static_cast<size_t>(hi - lo), CoeffScalar());
    for (const PuiseuxSeries* s : {&a, &b}) {
        for (size_t i = 0; i < s->c_.size(); ++i) {
            long long idx = s->lo_ + static_cast<long long>(i) - lo;
            if (idx >= hi - lo) break;
            r.c_[static_cast<size_t>(idx)] += s->c_[i];
        }
    }
    r.normalize();
    return r;
}

PuiseuxSeries operator-(const PuiseuxSeries& a) {
    std::vector<CoeffScalar> c = a.coeffs();
    for (auto& x : c) x = -x;
    return PuiseuxSeries::from_terms(a.ram(), a.lo(), std::move(c), a.exact(), a.prec_index());
}

PuiseuxSeries operator-(const PuiseuxSeries& a, const PuiseuxSeries& b) { return a + (-b); }

PuiseuxSeries operator*(const PuiseuxSeries& a0, const PuiseuxSeries& b0) {
    if (a0.is_exact_zero() || b0.is_exact_zero()) return PuiseuxSeries();
    PuiseuxSeries a, b;
    join(a0, b0, a, b);
    PuiseuxSeries r;
    r.n_ = a.n_;
    r.exact_ = a.exact_ && b.exact_;
    long long va = a.c_.empty() ? a.prec_ : a.lo_, vb = b.c_.empty() ? b.prec_ : b.lo_;
    if (!r.exact_) {
        long long pa = a.exact_ ? kInf : a.prec_, pb = b.exact_ ? kInf : b.prec_;
        r.prec_ = std::min(pa == kInf ? kInf : pa + vb, pb == kInf ? kInf : pb + va);
    }
    if (a.c_.empty() || b.c_.empty()) {
        r.normalize();
        return r;
    }
    r.lo_ = a.lo_ + b.lo_;
    long long len = static_cast<long long>(a.c_.size() + b.c_.size()) - 1;
    if (!r.exact_) len = std::min(len, r.prec_ - r.lo_);
    if (len <= 0) {
        r.c_.clear();
        r.normalize();
        return r;
    }
    r.c_.assign(static_cast<size_t>(len), CoeffScalar());
    for (size_t i = 0; i < a.c_.size() && static_cast<long long>(i) < len; ++i) {
        if (a.c_[i].is_zero()) continue;
        for (size_t j = 0; j < b.c_.size() && static_cast<long long>(i + j) < len; ++j) {
            if (b.c_[j].is_zero()) continue;
            r.c_[i + j] += a.c_[i] * b.c_[j];
        }
    }
    r.normalize();
    return r;
}

PuiseuxSeries operator*(const CoeffScalar& c, const PuiseuxSeries& a) {
    if (c.is_zero()) return PuiseuxSeries();
    std::vector<CoeffScalar> v = a.coeffs();
    for (auto& x : v) x = c * x;
    return PuiseuxSeries::from_terms(a.ram(), a.lo(), std::move(v), a.exact(), a.prec_index());
}

bool operator==(const PuiseuxSeries& a0, const PuiseuxSeries& b0) {
    PuiseuxSeries a, b;
    join(a0, b0, a, b);
    if (a.exact() != b.exact()) return false;
    if (!a.exact() && a.prec_index() != b.prec_index()) return false;
    return a.lo() == b.lo() && a.coeffs() == b.coeffs();
}

bool agree(const PuiseuxSeries& a, const PuiseuxSeries& b) { return (a - b).is_zero(); }

PuiseuxSeries inv(const PuiseuxSeries& f, std::optional<Rat> trunc) {
    if (f.is_zero()) fail(ErrorKind::ZeroDivisor, "inverse of a series with no known nonzero term");
    const long long n = f.ram();
    if (f.is_monomial()) return PuiseuxSeries::monomial(inv(f.lead()), -f.val());
    long long start = -f.lo();
    long long target;  // precision index of the result
    if (f.exact()) {
        if (!trunc) fail(ErrorKind::PrecisionExhausted, "inverse of an exact non-monomial needs a truncation");
        target = ceil_div(trunc->numerator() * n, trunc->denominator());
    } else {
        target = start + (f.prec_index() - f.lo());
        if (trunc) target = std::min(target, ceil_div(trunc->numerator() * n, trunc->denominator()));
    }
    long long K = target - start;
    if (K <= 0) return PuiseuxSeries::big_o(Rat(target, n));
    const auto& fc = f.coeffs();
    CoeffScalar f0i = inv(fc[0]);
    std::vector<CoeffScalar> g(static_cast<size_t>(K));
    g[0] = f0i;
    for (long long k = 1; k < K; ++k) {
        CoeffScalar s;
        long long top = std::min<long long>(k, static_cast<long long>(fc.size()) - 1);
        for (long long i = 1; i <= top; ++i) {
            const CoeffScalar& fi = fc[static_cast<size_t>(i)];
            if (fi.is_zero() || g[static_cast<size_t>(k - i)].is_zero()) continue;
            s += fi * g[static_cast<size_t>(k - i)];
        }
        g[static_cast<size_t>(k)] = s.is_zero() ? s : -(f0i * s);
    }
    return PuiseuxSeries::from_terms(n, start, std::move(g), false, target);
}

PuiseuxSeries div(const PuiseuxSeries& a, const PuiseuxSeries& b, std::optional<Rat> trunc) {
    if (a.is_exact_zero()) return PuiseuxSeries();
    if (b.is_monomial()) return a * inv(b);
    std::optional<Rat> t2;
    if (trunc) t2 = *trunc - a.val_or_prec();
    PuiseuxSeries r = a * inv(b, t2);
    if (trunc) r = r.truncate(*trunc);
    return r;
}

PuiseuxSeries pow(const PuiseuxSeries& f, long long e, std::optional<Rat> trunc) {
    if (e < 0) return pow(inv(f, trunc ? std::optional<Rat>(*trunc - Rat(e + 1) * f.val()) : std::nullopt), -e, trunc);
    PuiseuxSeries r(1), b = f;
    while (e) {
        if (e & 1) {
            r = r * b;
            if (trunc) r = r.truncate(*trunc);
        }
        e >>= 1;
        if (e) b = b * b;
    }
    return r;
}

PuiseuxSeries phi_apply(const PuiseuxSeries& f, long long p) { return phi_apply_rat(f, Rat(p)); }

PuiseuxSeries phi_apply_rat(const PuiseuxSeries& f, const Rat& p) {
    if (p == Rat(0) || f.is_zero()) return f;
    std::vector<CoeffScalar> c = f.coeffs();
    for (size_t i = 0; i < c.size(); ++i) {
        if (c[i].is_zero()) continue;
        c[i] = c[i].mul_qpow(p * Rat(f.lo() + static_cast<long long>(i), f.ram()));
    }
    return PuiseuxSeries::from_terms(f.ram(), f.lo(), std::move(c), f.exact(), f.prec_index());
}

PuiseuxSeries relabel(const PuiseuxSeries& f, long long n) {
    std::vector<CoeffScalar> c = f.coeffs();
    for (auto& x : c) x = x.relabel(n);
    return PuiseuxSeries::from_terms(f.ram(), f.lo(), std::move(c), f.exact(), f.prec_index());
}

PuiseuxSeries unrelabel(const PuiseuxSeries& f, long long n) {
    std::vector<CoeffScalar> c = f.coeffs();
    for (auto& x : c) x = x.unrelabel(n);
    return PuiseuxSeries::from_terms(f.ram(), f.lo(), std::move(c), f.exact(), f.prec_index());
}

namespace {

std::string zpow_str(const Rat& e) {
    if (e == Rat(1)) return "z";
    if (is_integer(e)) return "z^" + std::to_string(e.numerator());
    return "z^(" + rat_str(e) + ")";
}

bool compound(const std::string& s) {
    for (size_t i = 1; i < s.size(); ++i)
        if (s[i] == '+' || s[i] == '-') return true;
    return false;
}

}  // namespace

std::string to_string(const PuiseuxSeries& f) {
    std::string out;
    auto append = [&](const std::string& t) {
        if (out.empty())
            out = t;
        else if (t[0] == '-')
            out += t;
        else
            out += "+" + t;
    };
    const auto& c = f.coeffs();
    for (size_t i = 0; i < c.size(); ++i) {
        if (c[i].is_zero()) continue;
        Rat e(f.lo() + static_cast<long long>(i), f.ram());
        std::string cs = to_string(c[i]);
        if (e == Rat(0)) {
            append(cs);
        } else if (cs == "1") {
            append(zpow_str(e));
        } else if (cs == "-1") {
            append("-" + zpow_str(e));
        } else if (compound(cs)) {
            append("(" + cs + ")*" + zpow_str(e));
        } else {
            append(cs + "*" + zpow_str(e));
        }
    }
    if (!f.exact()) {
        Rat p(f.prec_index(), f.ram());
        append("O(" + (p == Rat(1) ? std::string("z") : "z^" + (is_integer(p) ? rat_str(p) : "(" + rat_str(p) + ")")) +
               ")");
    }
    return out.empty() ? "0" : out;
}

GlobalSeries phi_apply(const GlobalSeries& f, long long p) {
    GlobalSeries r(f.bound());
    for (long long e = -f.bound(); e <= f.bound(); ++e)
        if (!f.at(e).is_zero()) r.set(e, f.at(e).mul_qpow(Rat(p * e)));
    return r;
}

GlobalSeries mul_monomial(const GlobalSeries& f, const CoeffScalar& c, long long k) {
    GlobalSeries r(f.bound());
    for (long long e = -f.bound(); e <= f.bound(); ++e) {
        long long t = e + k;
        if (t < -f.bound() || t > f.bound() || f.at(e).is_zero()) continue;
        r.set(t, c * f.at(e));
    }
    return r;
}

GlobalSeries theta(long long B) {
    if (B < 1) fail(ErrorKind::InvalidArgument, "theta window must be at least 1");
    GlobalSeries r(B);
    for (long long n = -B; n <= B; ++n) {
        CoeffScalar c = CoeffScalar::qpow(Rat(n * (n - 1) / 2));
        r.set(n, (n % 2 == 0) ? c : -c);
    }
    return r;
}

}  // namespace qd
