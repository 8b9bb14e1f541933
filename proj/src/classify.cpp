#include "qdiff/classify.hpp"

#include "qdiff/errors.hpp"
#include "qdiff/roots.hpp"

#include <algorithm>
#include <functional>

namespace qd {

namespace {

// Dense operator a_0 + a_1 PHI + ..., keeping truncated zeros (SkewOperator drops them).
using Dense = std::vector<PuiseuxSeries>;

Dense to_dense(const SkewOperator& L) {
    Dense d(static_cast<size_t>(L.deg_hi() + 1), PuiseuxSeries());
    for (const auto& [i, c] : L.terms()) d[static_cast<size_t>(i)] = c;
    return d;
}

SkewOperator from_dense(const Dense& d) {
    SkewOperator L;
    for (size_t i = 0; i < d.size(); ++i) L.set(static_cast<long long>(i), d[i]);
    return L;
}

Dense dense_mul(const Dense& a, const Dense& b) {
    if (a.empty() || b.empty()) return {};
    Dense r(a.size() + b.size() - 1, PuiseuxSeries());
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_exact_zero()) continue;
        for (size_t j = 0; j < b.size(); ++j) {
            if (b[j].is_exact_zero()) continue;
            r[i + j] += a[i] * phi_apply(b[j], static_cast<long long>(i));
        }
    }
    return r;
}

// Smallest precision over the coefficients; nullopt if all exact.
std::optional<Rat> dense_precision(const Dense& d) {
    std::optional<Rat> p;
    for (const auto& c : d)
        if (!c.exact()) p = p ? std::min(*p, *c.prec()) : *c.prec();
    return p;
}

struct Split {
    Dense left, right;
};

// L monic of degree d with L(0) != 0, lowest slope lam over the last m1 degrees.
// Finds L = L1 * R with L1 pure of slope lam (degree m1) and R monic of degree
// d - m1 whose initial part for the lam-weight is PHI^(d-m1). Lifting is by
// weight level: the weight of z^a PHI^i is a + lam*i and is additive under
// the twisted product.
Split split_lowest(const Dense& L, const Rat& lam, long long m1, const Rat& P) {
    const long long d = static_cast<long long>(L.size()) - 1;
    const long long m2 = d - m1;
    long long ram = 1;
    for (const auto& c : L) ram = lcm_ll(ram, c.ram());
    const long long D = lcm_ll(ram, lam.denominator());
    const Rat omega = lam * Rat(d), omega1 = lam * Rat(m1), omega2 = lam * Rat(m2);
    const Rat step(1, D);

    const Rat kmax = lam >= Rat(0) ? lam * Rat(d) : Rat(0);
    long long lend = ceil_rat((P - omega + kmax) * Rat(D)) - 1;
    if (auto pL = dense_precision(L)) {
        const Rat top = lam >= Rat(0) ? omega : Rat(0);
        long long avail = ceil_rat((*pL - top) * Rat(D)) - 1;
        lend = std::min(lend, avail);
    }
    if (lend < 0) fail(ErrorKind::PrecisionExhausted, "operator precision too low to separate slopes");
    const size_t S = static_cast<size_t>(lend + 1);

    auto expo = [&](const Rat& base, long long deg, long long lev) { return base + Rat(lev) * step - lam * Rat(deg); };
    // x[i][l]: L1 coefficient of PHI^i at level l; y[j][l]: same for R
    std::vector<std::vector<CoeffScalar>> x(static_cast<size_t>(m1 + 1), std::vector<CoeffScalar>(S));
    std::vector<std::vector<CoeffScalar>> y(static_cast<size_t>(m2 + 1), std::vector<CoeffScalar>(S));
    for (long long i = 0; i <= m1; ++i) x[static_cast<size_t>(i)][0] = L[static_cast<size_t>(i + m2)].coeff(expo(omega, i + m2, 0));
    y[static_cast<size_t>(m2)][0] = CoeffScalar(1);
    const CoeffScalar& b0 = x[0][0];
    if (b0.is_zero()) fail(ErrorKind::InvalidArgument, "segment start vertex missing");
    const CoeffScalar b0i = inv(b0);

    for (long long l = 1; l <= lend; ++l) {
        std::vector<CoeffScalar> C(static_cast<size_t>(d), CoeffScalar(0));
        for (long long k = 0; k < d; ++k) C[static_cast<size_t>(k)] = L[static_cast<size_t>(k)].coeff(expo(omega, k, l));
        for (long long l1 = 1; l1 < l; ++l1) {
            const long long l2 = l - l1;
            for (long long i = 0; i < m1; ++i) {
                const CoeffScalar& xv = x[static_cast<size_t>(i)][static_cast<size_t>(l1)];
                if (xv.is_zero()) continue;
                for (long long j = 0; j < m2; ++j) {
                    const CoeffScalar& yv = y[static_cast<size_t>(j)][static_cast<size_t>(l2)];
                    if (yv.is_zero()) continue;
                    C[static_cast<size_t>(i + j)] -= (xv * yv).mul_qpow(Rat(i) * expo(omega2, j, l2));
                }
            }
        }
        // in(L1) * R_l contributes to degrees j + i; solve R_l from the bottom
        auto inR = [&](long long k) {
            CoeffScalar s(0);
            for (long long i = 1; i <= m1; ++i) {
                const long long j = k - i;
                if (j < 0 || j >= m2) continue;
                const CoeffScalar& yv = y[static_cast<size_t>(j)][static_cast<size_t>(l)];
                const CoeffScalar& bv = x[static_cast<size_t>(i)][0];
                if (yv.is_zero() || bv.is_zero()) continue;
                s += (bv * yv).mul_qpow(Rat(i) * expo(omega2, j, l));
            }
            return s;
        };
        for (long long j = 0; j < m2; ++j)
            y[static_cast<size_t>(j)][static_cast<size_t>(l)] = (C[static_cast<size_t>(j)] - inR(j)) * b0i;
        for (long long k = m2; k < d; ++k) {
            x[static_cast<size_t>(k - m2)][static_cast<size_t>(l)] = C[static_cast<size_t>(k)] - inR(k);
        }
    }

    auto build = [&](const std::vector<std::vector<CoeffScalar>>& tab, const Rat& base, long long deg) {
        Dense out(static_cast<size_t>(deg + 1));
        for (long long i = 0; i < deg; ++i) {
            const long long lo = (expo(base, i, 0) * Rat(D)).numerator();
            // the factors live over the exponent lattice of L; levels off that lattice vanish
            const long long lo_r = ceil_rat(Rat(lo, D) * Rat(ram));
            const long long pr_r = ceil_rat(Rat(lo + lend + 1, D) * Rat(ram));
            std::vector<CoeffScalar> c;
            for (long long e = lo_r; e < pr_r; ++e) {
                const Rat lev = (Rat(e, ram) - Rat(lo, D)) * Rat(D);
                c.push_back(tab[static_cast<size_t>(i)][static_cast<size_t>(lev.numerator())]);
            }
            out[static_cast<size_t>(i)] = PuiseuxSeries::from_terms(ram, lo_r, std::move(c), false, pr_r);
        }
        out[static_cast<size_t>(deg)] = PuiseuxSeries(1);
        return out;
    };
    return {build(x, omega1, m1), build(y, omega2, m2)};
}

}  // namespace

Filtration slope_filtration(const SkewOperator& L, const Rat& T) {
    if (L.is_zero()) fail(ErrorKind::ZeroOperator, "slope filtration of the zero operator");
    Filtration F;
    F.lead = L.coeff(L.deg_hi());
    F.shift = L.deg_lo();
    NewtonPolygon np0 = newton_polygon(L);
    Rat width(0);
    for (const auto& s : np0.segments) width += (s.slope < Rat(0) ? -s.slope : s.slope) * Rat(s.length);
    const Rat margin = Rat(ceil_rat(width)) + Rat(2 * static_cast<long long>(np0.segments.size()) + 4);

    F.normalized = monic_normalize(L, T + margin + Rat(40));
    const Dense Ln = to_dense(F.normalized);
    NewtonPolygon np = newton_polygon(F.normalized);
    for (const auto& s : np.segments) F.slopes.push_back(s.slope);
    if (np.segments.size() <= 1) {
        // a unit (degree 0) has no slopes and the empty product
        if (!np.segments.empty()) F.factors = {F.normalized};
        F.residual = SkewOperator();
        F.residual_precision = dense_precision(Ln);
        return F;
    }

    for (int attempt = 0; attempt <= 4; ++attempt) {
        const Rat P = T + margin + Rat(8 * attempt);
        std::vector<Dense> fac;
        Dense rest = Ln;
        bool failed = false;
        for (size_t s = 0; s + 1 < np.segments.size(); ++s) {
            const auto& seg = np.segments[s];
            try {
                Split sp = split_lowest(rest, seg.slope, seg.length, P);
                fac.push_back(std::move(sp.left));
                rest = std::move(sp.right);
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::PrecisionExhausted) throw;
                failed = true;
                break;
            }
        }
        if (failed) continue;
        fac.push_back(rest);
        Dense prod = fac[0];
        for (size_t i = 1; i < fac.size(); ++i) prod = dense_mul(prod, fac[i]);
        Dense res(std::max(prod.size(), Ln.size()));
        for (size_t k = 0; k < res.size(); ++k) {
            PuiseuxSeries a = k < Ln.size() ? Ln[k] : PuiseuxSeries();
            PuiseuxSeries b = k < prod.size() ? prod[k] : PuiseuxSeries();
            res[k] = a - b;
        }
        bool zero = true;
        for (const auto& c : res) zero = zero && c.is_zero();
        std::optional<Rat> rp = dense_precision(res);
        if (!zero) fail(ErrorKind::PrecisionExhausted, "slope lift produced a nonzero residual");
        if (rp && *rp < T) continue;
        F.factors.clear();
        for (const auto& f : fac) F.factors.push_back(from_dense(f));
        F.residual = from_dense(res);
        F.residual_precision = rp;
        return F;
    }
    fail(ErrorKind::PrecisionExhausted, "slope filtration needs more input precision");
}

namespace {

SMat map_entries(const SMat& a, const std::function<PuiseuxSeries(const PuiseuxSeries&)>& f) {
    SMat r(a.rows(), a.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) r(i, j) = f(a(i, j));
    return r;
}

// Entries in O and an invertible constant term.
bool in_GL_O(const SMat& B) {
    for (size_t i = 0; i < B.rows(); ++i)
        for (size_t j = 0; j < B.cols(); ++j) {
            const auto& e = B(i, j);
            if (e.is_zero()) {
                if (!e.exact() && *e.prec() <= Rat(0)) return false;
                continue;
            }
            if (e.val() < Rat(0)) return false;
        }
    return !det(constant_part(B)).is_zero();
}

// Gauge D = diag(z^k_i) with D^-1 B phi(D) in GL(O), when one exists. The
// entry (i, j) becomes q^k_j z^(k_j - k_i) B_ij, so the k_i are potentials for
// the constraints k_i <= k_j + v(B_ij).
std::optional<SMat> diagonal_lattice(const SMat& B) {
    const size_t n = B.rows();
    std::vector<Rat> k(n, Rat(0));
    bool changed = true;
    for (size_t round = 0; round <= n && changed; ++round) {
        changed = false;
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                const auto& e = B(i, j);
                if (e.is_exact_zero()) continue;
                const Rat bound = k[j] + e.val_or_prec();
                if (bound < k[i]) {
                    k[i] = bound;
                    changed = true;
                }
            }
    }
    if (changed) return std::nullopt;
    SMat D(n, n);
    for (size_t i = 0; i < n; ++i) D(i, i) = PuiseuxSeries::z(k[i]);
    return D;
}

std::vector<CoeffScalar> diagonal_hints(const CMat& W) {
    std::vector<CoeffScalar> h;
    for (size_t i = 0; i < W.rows(); ++i)
        if (!W(i, i).is_zero()) h.push_back(W(i, i));
    return h;
}

CMat power(const CMat& a, long long e) {
    CMat r = CMat::identity(a.rows());
    for (long long i = 0; i < e; ++i) r = r * a;
    return r;
}

CMat minus_scalar(const CMat& a, const CoeffScalar& mu) {
    CMat r = a;
    for (size_t i = 0; i < a.rows(); ++i) r(i, i) = r(i, i) - mu;
    return r;
}

bool upper_triangular(const CMat& W) {
    for (size_t i = 0; i < W.rows(); ++i)
        for (size_t j = 0; j < i; ++j)
            if (!W(i, j).is_zero()) return false;
    return true;
}

// Solves q^e W X - X W = R for upper triangular W by back substitution.
CMat sylvester(const CMat& W, const CoeffScalar& qe, const CMat& R) {
    const size_t n = W.rows();
    CMat X(n, n);
    for (size_t i = n; i-- > 0;)
        for (size_t j = 0; j < n; ++j) {
            CoeffScalar s = R(i, j);
            for (size_t k = i + 1; k < n; ++k)
                if (!W(i, k).is_zero() && !X(k, j).is_zero()) s -= qe * W(i, k) * X(k, j);
            for (size_t k = 0; k < j; ++k)
                if (!W(k, j).is_zero() && !X(i, k).is_zero()) s += X(i, k) * W(k, j);
            X(i, j) = s / (qe * W(i, i) - W(j, j));
        }
    return X;
}

// Basis in which W is upper triangular: per eigenvalue, a flag of kernels of (W - mu)^k.
CMat triangular_basis(const CMat& W) {
    const size_t n = W.rows();
    CMat out(n, n);
    size_t col = 0;
    for (const auto& r : roots(charpoly(W), diagonal_hints(W))) {
        CMat N = minus_scalar(W, r.value);
        std::vector<std::vector<CoeffScalar>> chosen;
        for (int k = 1; k <= r.mult; ++k) {
            CMat ker = kernel(power(N, k));
            for (size_t j = 0; j < ker.cols(); ++j) {
                // keep ker columns independent of what is already chosen
                CMat test(n, chosen.size() + 1);
                for (size_t c = 0; c < chosen.size(); ++c)
                    for (size_t i = 0; i < n; ++i) test(i, c) = chosen[c][i];
                for (size_t i = 0; i < n; ++i) test(i, chosen.size()) = ker(i, j);
                if (rank(test) == chosen.size() + 1) {
                    std::vector<CoeffScalar> v(n);
                    for (size_t i = 0; i < n; ++i) v[i] = ker(i, j);
                    chosen.push_back(v);
                }
            }
        }
        for (const auto& v : chosen) {
            for (size_t i = 0; i < n; ++i) out(i, col) = v[i];
            ++col;
        }
    }
    if (col != n) fail(ErrorKind::ResonanceUnresolved, "generalized eigenspaces do not span");
    return out;
}

}  // namespace

std::vector<JordanData> jordan_structure(const CMat& W, const std::vector<CoeffScalar>& hints) {
    const size_t n = W.rows();
    std::vector<CoeffScalar> h = hints;
    for (const auto& d : diagonal_hints(W)) h.push_back(d);
    std::vector<JordanData> out;
    for (const auto& r : roots(charpoly(W), h)) {
        CMat N = minus_scalar(W, r.value);
        std::vector<long long> rk{static_cast<long long>(n)};
        CMat P = CMat::identity(n);
        for (int k = 1; k <= r.mult + 1; ++k) {
            P = P * N;
            rk.push_back(static_cast<long long>(rank(P)));
        }
        std::vector<long long> blocks;
        for (int k = 1; k <= r.mult; ++k) {
            long long atleast = rk[static_cast<size_t>(k - 1)] - rk[static_cast<size_t>(k)];
            long long next = rk[static_cast<size_t>(k)] - rk[static_cast<size_t>(k + 1)];
            for (long long c = 0; c < atleast - next; ++c) blocks.push_back(k);
        }
        std::sort(blocks.rbegin(), blocks.rend());
        out.push_back({r.value, blocks});
    }
    return out;
}

RSNormalForm rs_normalize(const DiffModule& M, const Rat& T, bool want_gauge) {
    const size_t n = M.dim();
    SMat B = M.B;
    SMat P = SMat::identity(n);
    if (!in_GL_O(B)) {
        if (auto D = diagonal_lattice(B)) {
            SMat Bd(n, n);
            for (size_t i = 0; i < n; ++i)
                for (size_t j = 0; j < n; ++j) {
                    const Rat ki = (*D)(i, i).val(), kj = (*D)(j, j).val();
                    Bd(i, j) = CoeffScalar::qpow(kj) * B(i, j).shift(kj - ki);
                }
            if (in_GL_O(Bd)) {
                B = Bd;
                P = *D;
            }
        }
    }
    if (!in_GL_O(B)) {
        CyclicResult cyc = cyclic_vector(M, T + Rat(8));
        for (const auto& s : newton_polygon(cyc.op).segments)
            if (s.slope != Rat(0)) fail(ErrorKind::NotRegularSingular, "module has a nonzero slope");
        B = companion(cyc.op, T + Rat(8)).B;
        P = cyc.basis;
        if (!in_GL_O(B)) fail(ErrorKind::NotRegularSingular, "no lattice with invertible constant term found");
    }
    const long long r = std::max<long long>(1, ram(B));
    const Rat step(1, r);
    const long long bound = static_cast<long long>(n) * (T.numerator() / T.denominator() + 8) * r;
    for (long long it = 0;; ++it) {
        if (it > bound) fail(ErrorKind::ResonanceUnresolved, "shearing did not settle the eigenvalues");
        CMat B0 = constant_part(B);
        auto eig = roots(charpoly(B0), diagonal_hints(B0));
        std::vector<Root> low, high, keep;
        for (const auto& e : eig) {
            Rat w = e.value.w();
            if (w < Rat(0))
                low.push_back(e);
            else if (w >= step)
                high.push_back(e);
            else
                keep.push_back(e);
        }
        if (low.empty() && high.empty()) break;
        const bool up = !low.empty();
        std::vector<Root> moved = up ? low : high, rest;
        for (const auto& e : eig) {
            bool m = false;
            for (const auto& x : moved) m = m || x.value == e.value;
            if (!m) rest.push_back(e);
        }
        // columns: generalized eigenvectors, moved block first
        CMat Cm(n, n);
        size_t col = 0;
        size_t k1 = 0;
        for (const auto* grp : {&moved, &rest})
            for (const auto& e : *grp) {
                CMat ker = kernel(power(minus_scalar(B0, e.value), e.mult));
                for (size_t j = 0; j < ker.cols(); ++j, ++col)
                    for (size_t i = 0; i < n; ++i) Cm(i, col) = ker(i, j);
                if (grp == &moved) k1 = col;
            }
        if (col != n) fail(ErrorKind::ResonanceUnresolved, "generalized eigenspaces do not span");
        SMat Cs = to_series(Cm);
        B = to_series(inverse(Cm)) * B * Cs;
        const Rat a = up ? step : -step;
        const CoeffScalar qa = CoeffScalar::qpow(a);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                const bool i1 = i < k1, j1 = j < k1;
                if (i1 && j1)
                    B(i, j) = qa * B(i, j);
                else if (i1)
                    B(i, j) = B(i, j).shift(-a);
                else if (j1)
                    B(i, j) = qa * B(i, j).shift(a);
            }
        SMat S = SMat::identity(n);
        for (size_t i = 0; i < k1; ++i) S(i, i) = PuiseuxSeries::z(a);
        P = P * Cs * S;
    }
    if (!upper_triangular(constant_part(B))) {
        CMat Tb = triangular_basis(constant_part(B));
        SMat Ts = to_series(Tb);
        B = to_series(inverse(Tb)) * B * Ts;
        P = P * Ts;
    }
    RSNormalForm out;
    out.W = constant_part(B);
    out.sheared = B;
    if (want_gauge) {
        // B phi(F) = F W with F = sum F_m z^(m/r), F_0 = I
        // P may carry negative powers from the shears
        const long long mmax = ceil_rat((T - std::min(Rat(0), valuation_range(P).first)) * Rat(r));
        std::vector<CMat> Bc, F;
        for (long long m = 0; m <= mmax; ++m) {
            CMat c(n, n);
            for (size_t i = 0; i < n; ++i)
                for (size_t j = 0; j < n; ++j) c(i, j) = B(i, j).coeff(Rat(m, r));
            Bc.push_back(c);
        }
        F.push_back(CMat::identity(n));
        for (long long m = 1; m < mmax; ++m) {
            CMat R(n, n);
            for (long long i = 1; i <= m; ++i)
                R = R - scale(CoeffScalar::qpow(Rat(m - i, r)), Bc[static_cast<size_t>(i)] * F[static_cast<size_t>(m - i)]);
            F.push_back(sylvester(out.W, CoeffScalar::qpow(Rat(m, r)), R));
        }
        SMat Fs(n, n);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                std::vector<CoeffScalar> c;
                for (const auto& Fm : F) c.push_back(Fm(i, j));
                Fs(i, j) = PuiseuxSeries::from_terms(r, 0, c, false, mmax);
            }
        out.gauge = truncate(P * Fs, T);
    }
    return out;
}

namespace {

bool type_less(const TypeMult& a, const TypeMult& b) {
    if (a.type.slope != b.type.slope) return a.type.slope < b.type.slope;
    if (a.type.m != b.type.m) return a.type.m < b.type.m;
    return to_string(a.type.cls) < to_string(b.type.cls);
}

void add_type(std::vector<TypeMult>& out, const PureType& t, long long mult) {
    for (auto& x : out)
        if (same_type(x.type, t)) {
            x.mult += mult;
            return;
        }
    out.push_back({t, mult});
}

// Types of a regular singular module: eigenvalue classes with Jordan sizes.
void classify_rs(const DiffModule& M, const Rat& T, const Rat& slope, std::vector<TypeMult>& out) {
    RSNormalForm nf = rs_normalize(M, T);
    for (const auto& j : jordan_structure(nf.W))
        for (long long b : j.blocks) add_type(out, {slope, fundamental_rep(j.eigenvalue).canonical(), b}, 1);
}

// Pure monic operator of slope t/n.
void classify_piece(const SkewOperator& L, const Rat& slope, const Rat& T, std::vector<TypeMult>& out) {
    const long long t = slope.numerator(), n = slope.denominator();
    if (n == 1) {
        // PHI = z^t PSI turns L into a slope-0 operator in PSI
        SkewOperator P;
        for (const auto& [k, a] : L.terms())
            P.set(k, CoeffScalar::qpow(Rat(t * k * (k - 1), 2)) * a.shift(Rat(t * k)));
        classify_rs(companion(monic_normalize(P, T), T), T, slope, out);
        return;
    }
    // PHI^n has slope t; z^-t PHI^n is regular singular over Q = q^n
    DiffModule E0 = companion(L, T);
    SMat Bn = E0.B;
    for (long long i = 1; i < n; ++i) Bn = Bn * phi_apply(E0.B, i);
    SMat C = map_entries(Bn, [&](const PuiseuxSeries& f) { return relabel(f.shift(Rat(-t)), n); });
    RSNormalForm nf = rs_normalize(DiffModule::from_B(C, T), T);
    struct Group {
        CoeffScalar key;
        std::vector<std::vector<long long>> blocks;
    };
    std::vector<Group> groups;
    for (const auto& j : jordan_structure(nf.W)) {
        CoeffScalar key = fundamental_rep(j.eigenvalue.unrelabel(n)).canonical();
        bool found = false;
        for (auto& g : groups)
            if (g.key == key) {
                g.blocks.push_back(j.blocks);
                found = true;
            }
        if (!found) groups.push_back({key, {j.blocks}});
    }
    for (const auto& g : groups) {
        if (static_cast<long long>(g.blocks.size()) != n)
            fail(ErrorKind::UnsupportedShape, "eigenvalue orbit of unexpected size in a ramified piece");
        for (const auto& b : g.blocks)
            if (b != g.blocks.front()) fail(ErrorKind::UnsupportedShape, "unequal Jordan data along an orbit");
        CoeffScalar cls = fundamental_rep(g.key * CoeffScalar::qpow(Rat(-t * (n - 1), 2))).canonical();
        for (long long m : g.blocks.front()) add_type(out, {slope, cls, m}, 1);
    }
}

}  // namespace

std::vector<TypeMult> formal_decompose(const SkewOperator& L, const Rat& T) {
    Filtration F = slope_filtration(L, T);
    std::vector<TypeMult> out;
    for (size_t i = 0; i < F.factors.size(); ++i) classify_piece(F.factors[i], F.slopes[i], T, out);
    std::sort(out.begin(), out.end(), type_less);
    return out;
}

std::vector<TypeMult> formal_decompose(const DiffModule& M, const Rat& T) {
    if (in_GL_O(M.B)) {
        std::vector<TypeMult> out;
        classify_rs(M, T, Rat(0), out);
        std::sort(out.begin(), out.end(), type_less);
        return out;
    }
    return formal_decompose(cyclic_vector(M, T + Rat(8)).op, T);
}

bool same_type(const PureType& a, const PureType& b) {
    return a.slope == b.slope && a.m == b.m && a.cls == b.cls;
}

std::string to_string(const PureType& t) {
    return "(" + rat_str(t.slope) + ", " + to_string(t.cls) + ", " + std::to_string(t.m) + ")";
}

DiffModule pure_module(const PureType& t) {
    const long long n = t.slope.denominator(), tt = t.slope.numerator();
    const CoeffScalar kappa = t.cls * CoeffScalar::qpow(Rat(tt * (n - 1), 2));
    SMat E(static_cast<size_t>(n), static_cast<size_t>(n));
    for (long long i = 0; i + 1 < n; ++i) E(static_cast<size_t>(i + 1), static_cast<size_t>(i)) = PuiseuxSeries(1);
    E(0, static_cast<size_t>(n - 1)) = PuiseuxSeries::monomial(kappa, Rat(tt));
    SMat U(static_cast<size_t>(t.m), static_cast<size_t>(t.m));
    for (long long i = 0; i < t.m; ++i) {
        U(static_cast<size_t>(i), static_cast<size_t>(i)) = PuiseuxSeries(1);
        if (i + 1 < t.m) U(static_cast<size_t>(i), static_cast<size_t>(i + 1)) = PuiseuxSeries(1);
    }
    return construct(ConstructKind::Tensor, DiffModule::from_B(E), DiffModule::from_B(U));
}

}  // namespace qd
