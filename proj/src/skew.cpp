#include "qdiff/skew.hpp"

#include "qdiff/errors.hpp"

#include <algorithm>

namespace qd {

SkewOperator::SkewOperator(const PuiseuxSeries& a) { set(0, a); }

SkewOperator SkewOperator::phi_pow(long long k) { return term(PuiseuxSeries(1), k); }

SkewOperator SkewOperator::term(const PuiseuxSeries& a, long long k) {
    SkewOperator r;
    r.set(k, a);
    return r;
}

long long SkewOperator::deg_lo() const {
    if (c_.empty()) fail(ErrorKind::ZeroOperator, "degree of the zero operator");
    return c_.begin()->first;
}

long long SkewOperator::deg_hi() const {
    if (c_.empty()) fail(ErrorKind::ZeroOperator, "degree of the zero operator");
    return c_.rbegin()->first;
}

PuiseuxSeries SkewOperator::coeff(long long i) const {
    auto it = c_.find(i);
    return it == c_.end() ? PuiseuxSeries() : it->second;
}

void SkewOperator::set(long long i, const PuiseuxSeries& a) {
    if (a.is_zero())
        c_.erase(i);
    else
        c_[i] = a;
}

std::optional<Rat> SkewOperator::precision() const {
    std::optional<Rat> p;
    for (const auto& [i, a] : c_) {
        auto pa = a.prec();
        if (pa && (!p || *pa < *p)) p = pa;
    }
    return p;
}

long long SkewOperator::ram() const {
    long long n = 1;
    for (const auto& [i, a] : c_) n = lcm_ll(n, a.ram());
    return n;
}

SkewOperator operator+(const SkewOperator& a, const SkewOperator& b) {
    SkewOperator r = a;
    for (const auto& [i, c] : b.terms()) r.set(i, r.coeff(i) + c);
    return r;
}

SkewOperator operator-(const SkewOperator& a) {
    SkewOperator r;
    for (const auto& [i, c] : a.terms()) r.set(i, -c);
    return r;
}

SkewOperator operator-(const SkewOperator& a, const SkewOperator& b) {
    SkewOperator r = a;
    for (const auto& [i, c] : b.terms()) r.set(i, r.coeff(i) - c);
    return r;
}

SkewOperator operator*(const SkewOperator& a, const SkewOperator& b) {
    std::map<long long, PuiseuxSeries> acc;
    for (const auto& [i, ai] : a.terms()) {
        for (const auto& [j, bj] : b.terms()) {
            PuiseuxSeries t = ai * phi_apply(bj, i);
            auto it = acc.find(i + j);
            if (it == acc.end())
                acc.emplace(i + j, t);
            else
                it->second += t;
        }
    }
    SkewOperator r;
    for (const auto& [k, c] : acc) r.set(k, c);
    return r;
}

SkewOperator operator*(const PuiseuxSeries& f, const SkewOperator& a) {
    SkewOperator r;
    for (const auto& [i, c] : a.terms()) r.set(i, f * c);
    return r;
}

bool operator==(const SkewOperator& a, const SkewOperator& b) { return a.terms() == b.terms(); }

bool agree(const SkewOperator& a, const SkewOperator& b) { return (a - b).is_zero(); }

SkewOperator conjugate_phi(const SkewOperator& L, long long k) {
    SkewOperator r;
    for (const auto& [i, c] : L.terms()) r.set(i, phi_apply(c, k));
    return r;
}

SkewOperator truncate(const SkewOperator& L, const Rat& p) {
    SkewOperator r;
    for (const auto& [i, c] : L.terms()) r.set(i, c.truncate(p));
    return r;
}

DivResult divmod(const SkewOperator& L, const SkewOperator& R, Side side, std::optional<Rat> trunc) {
    if (R.is_zero()) fail(ErrorKind::ZeroDivisor, "division by the zero operator");
    const long long r1 = R.deg_hi();
    const long long sR = R.span();
    const PuiseuxSeries& b = R.coeff(r1);
    DivResult out;
    SkewOperator cur = L;
    long long guard = 0;
    while (!cur.is_zero() && cur.span() >= sR) {
        const long long h = cur.deg_hi();
        const long long k = h - r1;
        PuiseuxSeries a = cur.coeff(h);
        PuiseuxSeries c;
        SkewOperator t;
        if (side == Side::Right) {
            c = div(a, phi_apply(b, k), trunc);
            t = SkewOperator::term(c, k);
            cur = cur - t * R;
        } else {
            c = phi_apply(div(a, b, trunc), -r1);
            t = SkewOperator::term(c, k);
            cur = cur - R * t;
        }
        out.quotient = out.quotient + t;
        if (!cur.is_zero() && cur.deg_hi() >= h)
            fail(ErrorKind::PrecisionExhausted, "leading coefficient vanishes to working precision");
        if (++guard > 100000) fail(ErrorKind::PrecisionExhausted, "division does not terminate");
    }
    out.remainder = cur;
    return out;
}

std::vector<Rat> NewtonPolygon::slope_multiset() const {
    std::vector<Rat> r;
    for (const auto& s : segments)
        for (long long i = 0; i < s.length; ++i) r.push_back(s.slope);
    return r;
}

NewtonPolygon newton_polygon(const SkewOperator& L) {
    if (L.is_zero()) fail(ErrorKind::ZeroOperator, "Newton polygon of the zero operator");
    std::vector<std::pair<long long, Rat>> pts;
    for (const auto& [i, a] : L.terms()) pts.emplace_back(i, a.val());
    // lower hull by monotone chain; points are already sorted by degree
    std::vector<std::pair<long long, Rat>> hull;
    auto cross = [](const std::pair<long long, Rat>& o, const std::pair<long long, Rat>& a,
                    const std::pair<long long, Rat>& b) {
        return Rat(a.first - o.first) * (b.second - o.second) - (a.second - o.second) * Rat(b.first - o.first);
    };
    for (const auto& p : pts) {
        while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) <= Rat(0)) hull.pop_back();
        hull.push_back(p);
    }
    NewtonPolygon np;
    np.vertices = hull;
    for (size_t s = hull.size(); s-- > 1;) {
        const auto& l = hull[s - 1];
        const auto& r = hull[s];
        long long len = r.first - l.first;
        Rat geo = (r.second - l.second) / Rat(len);
        np.segments.push_back({-geo, len, l.first, r.first});
    }
    return np;
}

namespace {

bool compound(const std::string& s) {
    for (size_t i = 1; i < s.size(); ++i)
        if (s[i] == '+' || s[i] == '-') return true;
    return false;
}

}  // namespace

std::string to_string(const SkewOperator& L) {
    if (L.is_zero()) return "0";
    std::string out;
    for (auto it = L.terms().rbegin(); it != L.terms().rend(); ++it) {
        long long i = it->first;
        std::string cs = to_string(it->second);
        std::string ph = i == 1 ? "PHI" : "PHI^" + std::to_string(i);
        std::string t;
        if (i == 0)
            t = compound(cs) && !out.empty() ? "(" + cs + ")" : cs;
        else if (cs == "1")
            t = ph;
        else if (cs == "-1")
            t = "-" + ph;
        else if (compound(cs))
            t = "(" + cs + ")*" + ph;
        else
            t = cs + "*" + ph;
        if (out.empty())
            out = t;
        else if (t[0] == '-')
            out += t;
        else
            out += "+" + t;
    }
    return out;
}

}  // namespace qd
