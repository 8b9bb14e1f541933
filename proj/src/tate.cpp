#include "qdiff/tate.hpp"

#include "qdiff/errors.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>

namespace qd {

namespace {

using Row = std::map<long long, CoeffScalar>;  // unknown id -> coefficient

struct Window {
    long long h0 = 0;
    std::vector<std::vector<GlobalSeries>> kernel;
};

// Entries of a Laurent-polynomial matrix as lists of (exponent, coefficient).
struct Terms {
    std::vector<std::vector<std::vector<std::pair<long long, CoeffScalar>>>> t;
    long long fmin = 0, fmax = 0;
};

Terms terms_of(const SMat& B) {
    Terms out;
    out.t.resize(B.rows());
    bool any = false;
    for (size_t i = 0; i < B.rows(); ++i)
        for (size_t j = 0; j < B.cols(); ++j) {
            std::vector<std::pair<long long, CoeffScalar>> ts;
            const PuiseuxSeries& e = B(i, j);
            for (size_t k = 0; k < e.coeffs().size(); ++k)
                if (!e.coeffs()[k].is_zero()) {
                    long long f = e.lo() + static_cast<long long>(k);
                    ts.emplace_back(f, e.coeffs()[k]);
                    out.fmin = any ? std::min(out.fmin, f) : f;
                    out.fmax = any ? std::max(out.fmax, f) : f;
                    any = true;
                }
            out.t[i].push_back(std::move(ts));
        }
    return out;
}

PuiseuxSeries laplace_det(const SMat& a) {
    const size_t n = a.rows();
    if (n == 1) return a(0, 0);
    PuiseuxSeries d;
    for (size_t j = 0; j < n; ++j) {
        if (a(0, j).is_exact_zero()) continue;
        SMat m(n - 1, n - 1);
        for (size_t r = 1; r < n; ++r)
            for (size_t c = 0, cc = 0; c < n; ++c)
                if (c != j) m(r - 1, cc++) = a(r, c);
        PuiseuxSeries t = a(0, j) * laplace_det(m);
        d = j % 2 == 0 ? d + t : d - t;
    }
    return d;
}

// Exact inverse of a matrix in GL(C[z, 1/z]), i.e. with monomial determinant.
SMat laurent_inverse(const SMat& B) {
    const size_t n = B.rows();
    PuiseuxSeries d = laplace_det(B);
    if (!d.is_monomial())
        fail(ErrorKind::UnsupportedShape, "Phi-matrix is not invertible over Laurent polynomials");
    const PuiseuxSeries dinv = PuiseuxSeries::monomial(inv(d.lead()), -d.val());
    SMat out(n, n);
    if (n == 1) {
        out(0, 0) = dinv;
        return out;
    }
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            SMat m(n - 1, n - 1);
            for (size_t r = 0, rr = 0; r < n; ++r) {
                if (r == i) continue;
                for (size_t c = 0, cc = 0; c < n; ++c)
                    if (c != j) m(rr, cc++) = B(r, c);
                ++rr;
            }
            PuiseuxSeries cof = laplace_det(m) * dinv;
            out(j, i) = (i + j) % 2 == 0 ? cof : -cof;
        }
    return out;
}

// Sections v = sum_j v_j e_j with v_j = sum_m v_(j,m) z^m, unknowns for
// m in [-W, W]. Two equivalent forms of PHI v = v are used:
//   top:    z^n coefficient of B phi(v) - v, dominated by -v_n for n >> 0;
//   bottom: z^m coefficient of phi(v) - B^-1 v, dominated by q^m v_m for m << 0.
// Every equation lying inside the window is kept, top equations with n >= 0
// drop the terms beyond W and bottom equations with m < 0 drop the terms below
// -W. For a convergent solution the dropped terms are negligible against the
// dominant one, so this removes exactly the seeds of divergent solutions. The
// choice is made per index block, hence commutes with constant gauges.
Window solve_window(const SMat& B, const SMat& Binv, long long W) {
    const size_t d = B.rows();
    const long long width = 2 * W + 1;
    const Terms tb = terms_of(B), ti = terms_of(Binv);
    auto uid = [&](size_t j, long long m) { return static_cast<long long>(j) * width + (m + W); };
    auto in = [&](long long m) { return m >= -W && m <= W; };

    std::vector<std::pair<long long, Row>> rows;  // (|index|, row)
    auto emit = [&](long long idx, const std::map<std::pair<size_t, long long>, CoeffScalar>& full) {
        Row r;
        for (const auto& [pos, c] : full)
            if (!c.is_zero() && in(pos.second)) r[uid(pos.first, pos.second)] = c;
        rows.emplace_back(std::abs(idx), std::move(r));
    };
    for (long long n = -W - std::abs(tb.fmax) - 1; n <= W + std::abs(tb.fmin) + 1; ++n) {
        const long long lo = std::min(n, n - tb.fmax), hi = std::max(n, n - tb.fmin);
        if (lo < -W || !(hi <= W || (n >= 0 && n <= W))) continue;
        for (size_t i = 0; i < d; ++i) {
            std::map<std::pair<size_t, long long>, CoeffScalar> full;
            full[{i, n}] = CoeffScalar(-1);
            for (size_t j = 0; j < d; ++j)
                for (const auto& [f, c] : tb.t[i][j]) full[{j, n - f}] += c * CoeffScalar::qpow(Rat(n - f));
            emit(n, full);
        }
    }
    for (long long m = -W - std::abs(ti.fmax) - 1; m <= W + std::abs(ti.fmin) + 1; ++m) {
        const long long lo = std::min(m, m - ti.fmax), hi = std::max(m, m - ti.fmin);
        if (hi > W || !(lo >= -W || (m < 0 && m >= -W))) continue;
        for (size_t i = 0; i < d; ++i) {
            std::map<std::pair<size_t, long long>, CoeffScalar> full;
            full[{i, m}] = CoeffScalar::qpow(Rat(m));
            for (size_t j = 0; j < d; ++j)
                for (const auto& [g, c] : ti.t[i][j]) full[{j, m - g}] -= c;
            emit(m, full);
        }
    }
    // Outermost equations first: they define the outer unknowns from inner ones,
    // which keeps the elimination banded.
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    auto dominant = [&](const Row& r) {
        long long col = r.begin()->first;
        Rat best = r.begin()->second.w();
        long long best_m = std::abs(col % width - W);
        for (const auto& [c, v] : r) {
            Rat w = v.w();
            long long m = std::abs(c % width - W);
            if (w < best || (w == best && m > best_m)) {
                best = w;
                best_m = m;
                col = c;
            }
        }
        return col;
    };

    // Elimination; pivot rows are reduced against all earlier pivots only.
    std::vector<std::pair<long long, Row>> piv;  // (pivot column, row) in insertion order
    std::map<long long, size_t> col_of;          // column -> index in piv
    for (auto& [key, r] : rows) {
        for (;;) {
            size_t best = piv.size();
            for (const auto& [c, v] : r) {
                auto it = col_of.find(c);
                if (it != col_of.end()) best = std::min(best, it->second);
            }
            if (best == piv.size()) break;
            const auto& [pc, pr] = piv[best];
            const CoeffScalar f = r.at(pc) / pr.at(pc);
            for (const auto& [c, v] : pr) {
                CoeffScalar x = r[c] - f * v;
                if (x.is_zero())
                    r.erase(c);
                else
                    r[c] = x;
            }
        }
        if (r.empty()) continue;
        const long long c = dominant(r);
        col_of[c] = piv.size();
        piv.emplace_back(c, std::move(r));
    }

    Window out;
    const long long unknowns = static_cast<long long>(d) * width;
    out.h0 = unknowns - static_cast<long long>(piv.size());
    for (long long fcol = 0; fcol < unknowns; ++fcol) {
        if (col_of.count(fcol)) continue;
        std::vector<CoeffScalar> x(static_cast<size_t>(unknowns));
        x[static_cast<size_t>(fcol)] = CoeffScalar(1);
        for (size_t k = piv.size(); k-- > 0;) {
            const auto& [pc, pr] = piv[k];
            CoeffScalar s;
            for (const auto& [c, v] : pr)
                if (c != pc && !x[static_cast<size_t>(c)].is_zero()) s += v * x[static_cast<size_t>(c)];
            if (!s.is_zero()) x[static_cast<size_t>(pc)] = -(s / pr.at(pc));
        }
        std::vector<GlobalSeries> vec;
        for (size_t j = 0; j < d; ++j) {
            GlobalSeries g(W);
            for (long long m = -W; m <= W; ++m) g.set(m, x[static_cast<size_t>(uid(j, m))]);
            vec.push_back(std::move(g));
        }
        out.kernel.push_back(std::move(vec));
    }
    return out;
}

}  // namespace

CohomologyReport cohomology(const DiffModule& M, long long window) {
    if (window < 1) fail(ErrorKind::InvalidArgument, "cohomology window must be positive");
    const SMat& B = M.B;
    if (!exact(B)) fail(ErrorKind::PrecisionExhausted, "cohomology needs a Laurent-polynomial Phi-matrix");
    if (ram(B) != 1) fail(ErrorKind::UnsupportedShape, "cohomology needs integral exponents of z");
    const SMat Binv = laurent_inverse(B);
    const SMat Bdual = transpose(Binv);  // Phi-matrix of the dual, whose inverse is B^T
    // H^1 is dual to H^0 of the dual bundle (the canonical bundle of E_q is trivial)
    Window a = solve_window(B, Binv, window), b = solve_window(B, Binv, window + 4);
    Window da = solve_window(Bdual, transpose(B), window), db = solve_window(Bdual, transpose(B), window + 4);
    if (a.h0 != b.h0 || da.h0 != db.h0)
        fail(ErrorKind::WindowTooSmall, "cohomology changes between windows " + std::to_string(window) + " and " +
                                            std::to_string(window + 4));
    const Rat degree = laplace_det(B).val();
    if (Rat(a.h0 - da.h0) != degree)
        fail(ErrorKind::WindowTooSmall, "window " + std::to_string(window) + " too small for the degree " +
                                            rat_str(degree) + " bundle");
    CohomologyReport r;
    r.h0 = a.h0;
    r.h1 = da.h0;
    r.kernel = std::move(a.kernel);
    r.window = window;
    return r;
}

BundleInvariants bundle_invariants(const std::vector<TypeMult>& types) {
    BundleInvariants b;
    for (const auto& tm : types) {
        b.rank += tm.type.slope.denominator() * tm.type.m * tm.mult;
        b.degree += tm.type.slope.numerator() * tm.type.m * tm.mult;
    }
    return b;
}

}  // namespace qd
