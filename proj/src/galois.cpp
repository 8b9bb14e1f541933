#include "qdiff/galois.hpp"

#include "qdiff/errors.hpp"
#include "qdiff/moduli.hpp"
#include "qdiff/roots.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace qd {

namespace {

using ZRow = std::vector<mpz_class>;
using ZMat = std::vector<ZRow>;

// Basis of the integer kernel {x : A x = 0} by unimodular column operations.
ZMat int_kernel(ZMat H, size_t n) {
    ZMat U(n, ZRow(n, 0));
    for (size_t i = 0; i < n; ++i) U[i][i] = 1;
    auto col_sub = [&](size_t dst, size_t src, const mpz_class& f) {
        for (auto& row : H) row[dst] -= f * row[src];
        for (auto& row : U) row[dst] -= f * row[src];
    };
    auto col_swap = [&](size_t a, size_t b) {
        for (auto& row : H) std::swap(row[a], row[b]);
        for (auto& row : U) std::swap(row[a], row[b]);
    };
    size_t piv = 0;
    for (size_t i = 0; i < H.size() && piv < n; ++i) {
        for (;;) {
            size_t best = n;
            for (size_t j = piv; j < n; ++j)
                if (H[i][j] != 0 && (best == n || abs(H[i][j]) < abs(H[i][best]))) best = j;
            if (best == n) break;
            col_swap(best, piv);
            bool done = true;
            for (size_t j = piv + 1; j < n; ++j) {
                if (H[i][j] == 0) continue;
                mpz_class f = H[i][j] / H[i][piv];
                col_sub(j, piv, f);
                if (H[i][j] != 0) done = false;
            }
            if (done) {
                ++piv;
                break;
            }
        }
    }
    ZMat out;
    for (size_t j = piv; j < n; ++j) {
        ZRow v(n);
        for (size_t i = 0; i < n; ++i) v[i] = U[i][j];
        out.push_back(std::move(v));
    }
    return out;
}

// Nonzero Smith invariants of an integer matrix, in divisibility order.
std::vector<mpz_class> smith_diagonal(ZMat a) {
    std::vector<mpz_class> diag;
    const size_t m = a.size(), n = m ? a[0].size() : 0;
    for (size_t t = 0; t < std::min(m, n); ++t) {
        auto place_min = [&](bool whole) {
            size_t bi = m, bj = n;
            for (size_t i = t; i < m; ++i)
                for (size_t j = t; j < n; ++j) {
                    if (!whole && i != t && j != t) continue;
                    if (a[i][j] != 0 && (bi == m || abs(a[i][j]) < abs(a[bi][bj]))) {
                        bi = i;
                        bj = j;
                    }
                }
            if (bi == m) return false;
            std::swap(a[t], a[bi]);
            for (auto& row : a) std::swap(row[t], row[bj]);
            return true;
        };
        if (!place_min(true)) break;
        for (;;) {
            bool clean = true;
            for (size_t i = t + 1; i < m; ++i) {
                if (a[i][t] == 0) continue;
                mpz_class f = a[i][t] / a[t][t];
                for (size_t j = t; j < n; ++j) a[i][j] -= f * a[t][j];
                if (a[i][t] != 0) clean = false;
            }
            for (size_t j = t + 1; j < n; ++j) {
                if (a[t][j] == 0) continue;
                mpz_class f = a[t][j] / a[t][t];
                for (size_t i = t; i < m; ++i) a[i][j] -= f * a[i][t];
                if (a[t][j] != 0) clean = false;
            }
            if (!clean) {
                place_min(false);
                continue;
            }
            size_t bad = m;
            for (size_t i = t + 1; i < m && bad == m; ++i)
                for (size_t j = t + 1; j < n; ++j)
                    if (a[i][j] % a[t][t] != 0) {
                        bad = i;
                        break;
                    }
            if (bad == m) break;
            for (size_t j = t; j < n; ++j) a[t][j] += a[bad][j];
        }
        diag.push_back(abs(a[t][t]));
    }
    return diag;
}

// Pairwise coprime base for a family of objects under gcd refinement.
template <class T, class Gcd, class Div, class Trivial>
void refine_into(std::vector<T>& base, const T& p, Gcd gcd, Div div, Trivial trivial) {
    std::vector<T> work{p};
    while (!work.empty()) {
        T x = work.back();
        work.pop_back();
        if (trivial(x)) continue;
        bool merged = false;
        for (size_t i = 0; i < base.size(); ++i) {
            T g = gcd(x, base[i]);
            if (trivial(g)) continue;
            T b = base[i];
            base.erase(base.begin() + static_cast<long>(i));
            work.push_back(div(b, g));
            work.push_back(div(x, g));
            work.push_back(g);
            merged = true;
            break;
        }
        if (!merged) base.push_back(x);
    }
}

template <class T, class Divides, class Div>
long long multiplicity(T x, const T& b, Divides divides, Div div) {
    long long e = 0;
    while (divides(b, x)) {
        x = div(x, b);
        ++e;
    }
    return e;
}

bool cpoly_divides(const CPoly& b, const CPoly& x) {
    if (x.degree() < b.degree()) return false;
    CPoly q, r;
    divrem(x, b, q, r);
    return r.zero();
}

// A generator split into its pieces; see class_slope_group.
struct Parts {
    Rat w;             // q-power modulo Z
    long long turn = 0;  // root of unity exponent in mu_K
    mpq_class rat = 1;   // positive rational part
    std::optional<Cyclo> atom;  // constant that is not a root of unity times a rational
    long long atom_sign = 0;
    CPoly num, den;  // constant terms 1
};

// x = zeta_K^a * r with r > 0 rational, when possible.
std::optional<std::pair<long long, mpq_class>> unit_times_rational(const Cyclo& x, int K) {
    const Cyclo xe = embed(x, K);
    for (long long a = 0; a < K; ++a) {
        Cyclo y = xe * Cyclo::zeta(K, (K - a) % K);
        if (y.is_rational() && y.rational_part() > 0) return std::make_pair(a, y.rational_part());
    }
    return std::nullopt;
}

AbelianGroup group_of(const std::vector<CoeffScalar>& classes, const std::vector<Rat>* slopes) {
    const size_t k = classes.size();
    if (k == 0) return {};
    int N = 1, M = 1;
    for (const auto& c : classes) {
        if (c.is_zero()) fail(ErrorKind::ZeroScalar, "class group of zero");
        N = static_cast<int>(lcm_ll(N, c.N()));
        M = static_cast<int>(lcm_ll(M, c.M()));
    }
    const int K = static_cast<int>(lcm_ll(2, M));

    std::vector<Parts> parts;
    std::vector<Cyclo> atoms;
    for (const auto& c0 : classes) {
        Parts p;
        p.w = c0.w();
        const CoeffScalar u = c0.mul_qpow(-p.w).lift(N, M);
        const Cyclo rho = u.num().coeff(0);
        p.num = scale(u.num(), inverse(rho));
        p.den = u.den();
        if (auto ur = unit_times_rational(rho, K)) {
            p.turn = ur->first;
            p.rat = ur->second;
        } else {
            for (size_t i = 0; i < atoms.size() && !p.atom; ++i)
                for (long long s : {1LL, -1LL}) {
                    Cyclo ratio = s == 1 ? rho * inverse(atoms[i]) : rho * atoms[i];
                    if (auto ur = unit_times_rational(ratio, K)) {
                        p.atom = atoms[i];
                        p.atom_sign = s;
                        p.turn = ur->first;
                        p.rat = ur->second;
                        break;
                    }
                }
            if (!p.atom) {
                atoms.push_back(rho);
                p.atom = rho;
                p.atom_sign = 1;
            }
        }
        parts.push_back(std::move(p));
    }

    std::vector<mpz_class> ibase;
    std::vector<CPoly> pbase;
    auto zgcd = [](const mpz_class& a, const mpz_class& b) { return mpz_class(gcd(a, b)); };
    auto zdiv = [](const mpz_class& a, const mpz_class& b) { return mpz_class(a / b); };
    auto ztriv = [](const mpz_class& a) { return a <= 1; };
    auto pdeg0 = [](const CPoly& a) { return a.degree() <= 0; };
    for (const auto& p : parts) {
        refine_into(ibase, mpz_class(p.rat.get_num()), zgcd, zdiv, ztriv);
        refine_into(ibase, mpz_class(p.rat.get_den()), zgcd, zdiv, ztriv);
        refine_into(pbase, p.num, gcd_unit_const, divexact, pdeg0);
        refine_into(pbase, p.den, gcd_unit_const, divexact, pdeg0);
    }

    long long D = 1, S = 1;
    for (const auto& p : parts) D = lcm_ll(D, p.w.denominator());
    if (slopes)
        for (const auto& s : *slopes) S = lcm_ll(S, s.denominator());

    // rows: q-power mod D, turn mod K, integer base, atoms, polynomial base, slope
    const size_t rows = 2 + ibase.size() + atoms.size() + pbase.size() + (slopes ? 1 : 0);
    ZMat A(rows, ZRow(k + 2, 0));
    auto zdivides = [](const mpz_class& b, const mpz_class& x) { return x % b == 0; };
    for (size_t i = 0; i < k; ++i) {
        const Parts& p = parts[i];
        A[0][i] = static_cast<long>((p.w * Rat(D)).numerator());
        A[1][i] = static_cast<long>(p.turn);
        size_t r = 2;
        for (const auto& b : ibase) {
            A[r++][i] = static_cast<long>(multiplicity(mpz_class(p.rat.get_num()), b, zdivides, zdiv) -
                                          multiplicity(mpz_class(p.rat.get_den()), b, zdivides, zdiv));
        }
        for (const auto& a : atoms) A[r++][i] = (p.atom && *p.atom == a) ? static_cast<long>(p.atom_sign) : 0L;
        for (const auto& b : pbase)
            A[r++][i] = static_cast<long>(multiplicity(p.num, b, cpoly_divides, divexact) -
                                          multiplicity(p.den, b, cpoly_divides, divexact));
        if (slopes) A[r][i] = static_cast<long>(((*slopes)[i] * Rat(S)).numerator());
    }
    A[0][k] = static_cast<long>(D);
    A[1][k + 1] = static_cast<long>(K);

    ZMat rel;
    for (auto& v : int_kernel(A, k + 2)) {
        v.resize(k);
        rel.push_back(std::move(v));
    }
    AbelianGroup g;
    std::vector<mpz_class> diag = rel.empty() ? std::vector<mpz_class>{} : smith_diagonal(rel);
    g.free_rank = static_cast<long long>(k - diag.size());
    for (const auto& d : diag)
        if (d > 1) g.torsion.push_back(d.get_si());
    return g;
}

}  // namespace

bool operator==(const AbelianGroup& a, const AbelianGroup& b) {
    return a.free_rank == b.free_rank && a.torsion == b.torsion;
}

std::string to_string(const AbelianGroup& g) {
    std::string s;
    if (g.free_rank > 0) s = g.free_rank == 1 ? "Z" : "Z^" + std::to_string(g.free_rank);
    for (long long t : g.torsion) s += (s.empty() ? "" : " x ") + ("Z/" + std::to_string(t));
    return s.empty() ? "0" : s;
}

AbelianGroup class_group(const std::vector<CoeffScalar>& classes) { return group_of(classes, nullptr); }

AbelianGroup class_slope_group(const std::vector<std::pair<CoeffScalar, Rat>>& gens) {
    std::vector<CoeffScalar> c;
    std::vector<Rat> s;
    for (const auto& [x, l] : gens) {
        c.push_back(x);
        s.push_back(l);
    }
    return group_of(c, &s);
}


std::string to_string(GaloisShape s) {
    switch (s) {
        case GaloisShape::RegularSingular: return "regular_singular";
        case GaloisShape::IrreducibleE: return "irreducible_E";
        case GaloisShape::IndecomposablePure: return "indecomposable_pure";
        case GaloisShape::SplitCombination: return "split_combination";
        case GaloisShape::GeneralSkeleton: return "general_skeleton";
    }
    return "?";
}

namespace {

GroupDescriptor pure_descriptor(const TypeMult& tm) {
    GroupDescriptor d;
    const PureType& t = tm.type;
    d.types = {tm};
    d.n = t.slope.denominator();
    d.torus_rank = 1;
    d.L = class_slope_group({{t.cls, t.slope}});
    if (d.n > 1) {
        d.nonabelian = true;
        d.quotient_invariants = {d.n, d.n};
    }
    d.has_Ga = t.m > 1;
    d.unipotent_dim = d.has_Ga ? 1 : 0;
    d.shape = d.has_Ga ? GaloisShape::IndecomposablePure : GaloisShape::IrreducibleE;
    return d;
}

// Connected components of the nonzero pattern of B.
std::vector<std::vector<size_t>> components(const SMat& B) {
    const size_t n = B.rows();
    std::vector<size_t> parent(n);
    std::iota(parent.begin(), parent.end(), size_t{0});
    auto find = [&](size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            if (!B(i, j).is_exact_zero()) parent[find(i)] = find(j);
    std::map<size_t, std::vector<size_t>> groups;
    for (size_t i = 0; i < n; ++i) groups[find(i)].push_back(i);
    std::vector<std::vector<size_t>> out;
    for (auto& [r, v] : groups) out.push_back(std::move(v));
    std::sort(out.begin(), out.end());
    return out;
}

SMat restrict_to(const SMat& B, const std::vector<size_t>& idx) {
    SMat s(idx.size(), idx.size());
    for (size_t a = 0; a < idx.size(); ++a)
        for (size_t b = 0; b < idx.size(); ++b) s(a, b) = B(idx[a], idx[b]);
    return s;
}

size_t slope_count(const std::vector<TypeMult>& types) {
    std::set<Rat> s;
    for (const auto& t : types) s.insert(t.type.slope);
    return s.size();
}

bool exact_module_splits(const DiffModule& M, const Rat& T) {
    bool pure_blocks = true;
    for (const auto& idx : components(M.B))
        if (slope_count(formal_decompose(DiffModule::from_B(restrict_to(M.B, idx)), T)) > 1) pure_blocks = false;
    if (pure_blocks) return true;
    try {
        ModuliPoint P = moduli_point(M, T);
        return std::all_of(P.coords.begin(), P.coords.end(), [](const CoeffScalar& c) { return c.is_zero(); });
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::UnsupportedShape) throw;
    }
    return false;
}

}  // namespace

GroupDescriptor galois_group(const std::vector<TypeMult>& types) {
    if (types.empty()) fail(ErrorKind::InvalidArgument, "galois_group of the zero module");
    GroupDescriptor d;
    d.types = types;
    bool all_zero = true, unip = false;
    for (const auto& t : types) {
        all_zero = all_zero && t.type.slope == Rat(0);
        unip = unip || t.type.m > 1;
    }
    if (all_zero) {
        std::vector<CoeffScalar> cls;
        for (const auto& t : types) cls.push_back(t.type.cls);
        d.shape = GaloisShape::RegularSingular;
        d.L = class_group(cls);
        d.torus_rank = d.L->free_rank;
        d.finite_invariants = d.L->torsion;
        d.has_Ga = unip;
        d.unipotent_dim = unip ? 1 : 0;
        return d;
    }
    if (types.size() == 1 && types[0].mult == 1) return pure_descriptor(types[0]);

    d.shape = GaloisShape::SplitCombination;
    std::vector<std::pair<CoeffScalar, Rat>> gens;
    for (const auto& t : types) {
        gens.emplace_back(t.type.cls, t.type.slope);
        GroupDescriptor c = t.type.slope == Rat(0) ? galois_group(std::vector<TypeMult>{{t.type, 1}})
                                                   : pure_descriptor({t.type, 1});
        d.nonabelian = d.nonabelian || c.nonabelian;
        d.constituents.push_back(std::move(c));
    }
    d.L = class_slope_group(gens);
    d.torus_rank = d.L->free_rank;
    d.finite_invariants = d.L->torsion;
    d.has_Ga = unip;
    d.unipotent_dim = unip ? 1 : 0;
    return d;
}

GroupDescriptor galois_group(const DiffModule& M, const Rat& T) {
    std::vector<TypeMult> types = formal_decompose(M, T);
    if (slope_count(types) <= 1 || !exact(M.B) || exact_module_splits(M, T)) return galois_group(types);
    // 1 -> U -> Gal(M) -> Gal(gr M) -> 1 with U unipotent and not determined here
    GroupDescriptor gr = galois_group(types);
    GroupDescriptor d;
    d.shape = GaloisShape::GeneralSkeleton;
    d.types = types;
    d.torus_rank = gr.torus_rank;
    d.finite_invariants = gr.finite_invariants;
    d.has_Ga = gr.has_Ga;
    d.nonabelian = gr.nonabelian;
    d.L = gr.L;
    d.constituents.push_back(std::move(gr));
    return d;
}

// ---------------------------------------------------------------- PV symbols

PVExpr::PVExpr(const PuiseuxSeries& f) {
    if (!f.is_exact_zero()) add({CoeffScalar(1), Rat(0), 0, f});
}

void PVExpr::add(const Term& x) {
    if (x.coeff.is_exact_zero()) return;
    Term n = x;
    n.unit = x.unit.canonical();
    Key k{to_string(n.unit), n.lambda, n.ell};
    auto it = t_.find(k);
    if (it == t_.end()) {
        t_.emplace(std::move(k), std::move(n));
        return;
    }
    it->second.coeff += n.coeff;
    if (it->second.coeff.is_exact_zero()) t_.erase(it);
}

PVExpr PVExpr::e(const CoeffScalar& c) {
    auto [w, u] = normalize_scalar(c);
    PVExpr r;
    r.add({u, Rat(0), 0, PuiseuxSeries::z(-w)});
    return r;
}

PVExpr PVExpr::ez(const Rat& lambda) {
    PVExpr r;
    r.add({CoeffScalar(1), lambda, 0, PuiseuxSeries(1)});
    return r;
}

PVExpr PVExpr::ell(long long k) {
    if (k < 0) fail(ErrorKind::InvalidArgument, "negative power of ell");
    PVExpr r;
    r.add({CoeffScalar(1), Rat(0), k, PuiseuxSeries(1)});
    return r;
}

PVExpr PVExpr::ell_poly(const std::vector<mpq_class>& p) {
    PVExpr r;
    for (size_t k = 0; k < p.size(); ++k)
        if (p[k] != 0) r.add({CoeffScalar(1), Rat(0), static_cast<long long>(k), PuiseuxSeries(CoeffScalar(p[k]))});
    return r;
}

PVExpr PVExpr::binom_ell(long long k, long long s) {
    if (k < 0) return PVExpr();
    std::vector<mpq_class> p{1};
    mpz_class fact = 1;
    for (long long i = 0; i < k; ++i) {
        // multiply by (ell + s - i)
        std::vector<mpq_class> n(p.size() + 1, 0);
        for (size_t j = 0; j < p.size(); ++j) {
            n[j + 1] += p[j];
            n[j] += p[j] * mpq_class(static_cast<long>(s - i));
        }
        p = std::move(n);
        fact *= static_cast<long>(i + 1);
    }
    for (auto& x : p) x /= fact;
    return ell_poly(p);
}

bool PVExpr::is_zero() const {
    return std::all_of(t_.begin(), t_.end(), [](const auto& kv) { return kv.second.coeff.is_zero(); });
}

std::vector<PVExpr::Term> PVExpr::terms() const {
    std::vector<Term> out;
    for (const auto& [k, t] : t_) out.push_back(t);
    return out;
}

PVExpr PVExpr::phi() const {
    PVExpr r;
    for (const auto& [k, t] : t_) {
        // phi(f e(u) e(z^l) ell^k) = phi(f) u^-1 z^-l e(u) e(z^l) (1 + ell)^k
        PuiseuxSeries c = (inv(t.unit) * phi_apply(t.coeff, 1)).shift(-t.lambda);
        mpz_class binom = 1;
        for (long long j = t.ell; j >= 0; --j) {
            r.add({t.unit, t.lambda, j, CoeffScalar(mpq_class(binom)) * c});
            binom = binom * static_cast<long>(j) / static_cast<long>(t.ell - j + 1);
        }
    }
    return r;
}

PVExpr operator+(const PVExpr& a, const PVExpr& b) {
    PVExpr r = a;
    for (const auto& [k, t] : b.t_) r.add(t);
    return r;
}

PVExpr operator*(const PVExpr& a, const PVExpr& b) {
    PVExpr r;
    for (const auto& [ka, x] : a.t_)
        for (const auto& [kb, y] : b.t_) r.add({x.unit * y.unit, x.lambda + y.lambda, x.ell + y.ell, x.coeff * y.coeff});
    return r;
}

bool operator==(const PVExpr& a, const PVExpr& b) { return (a - b).is_zero(); }

PVExpr operator-(const PVExpr& a) { return PVExpr(-1) * a; }
PVExpr operator-(const PVExpr& a, const PVExpr& b) { return a + (-b); }

std::string to_string(const PVExpr& x) {
    std::string s;
    for (const auto& t : x.terms()) {
        std::string m = "(" + to_string(t.coeff) + ")";
        if (!t.unit.is_one()) m += "*e(" + to_string(t.unit) + ")";
        if (t.lambda != Rat(0)) m += "*e(z^(" + rat_str(t.lambda) + "))";
        if (t.ell == 1) m += "*ell";
        if (t.ell > 1) m += "*ell^" + std::to_string(t.ell);
        s += (s.empty() ? "" : " + ") + m;
    }
    return s.empty() ? "0" : s;
}

PVMat operator*(const SMat& a, const PVMat& b) {
    PVMat r(a.rows(), b.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t k = 0; k < a.cols(); ++k) {
            if (a(i, k).is_exact_zero()) continue;
            const PVExpr aik(a(i, k));
            for (size_t j = 0; j < b.cols(); ++j) r(i, j) += aik * b(k, j);
        }
    return r;
}

PVMat phi(const PVMat& a) {
    PVMat r(a.rows(), a.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j).phi();
    return r;
}

std::string to_string(const PVMat& a) {
    std::string s = "[";
    for (size_t i = 0; i < a.rows(); ++i) {
        s += i ? ",[" : "[";
        for (size_t j = 0; j < a.cols(); ++j) s += (j ? ", " : "") + to_string(a(i, j));
        s += "]";
    }
    return s + "]";
}

// ------------------------------------------------------- fundamental matrices

namespace {

CoeffScalar nth_root(const CoeffScalar& beta, long long n) {
    if (n == 1) return beta;
    if (beta.is_monomial()) {
        std::vector<Cyclo> r = binomial_roots(n, beta.lead());
        if (!r.empty()) return CoeffScalar(r.front()) * CoeffScalar::qpow(beta.w() / Rat(n));
    }
    FPoly p(static_cast<size_t>(n + 1));
    p[0] = -beta;
    p[static_cast<size_t>(n)] = CoeffScalar(1);
    return roots(p).front().value;
}

// Solutions of the block kappa z^t companion(n) (x) U_m, when B has that shape.
std::optional<PVMat> block_solution(const SMat& B) {
    const size_t s = B.rows();
    for (size_t n = 1; n <= s; ++n) {
        if (s % n) continue;
        const size_t m = s / n;
        const PuiseuxSeries& b = B(0, (n - 1) * m);
        if (!b.is_monomial()) continue;
        SMat E(n, n), U(m, m);
        for (size_t i = 0; i + 1 < n; ++i) E(i + 1, i) = PuiseuxSeries(1);
        E(0, n - 1) = b;
        for (size_t i = 0; i < m; ++i) {
            U(i, i) = PuiseuxSeries(1);
            if (i + 1 < m) U(i, i + 1) = PuiseuxSeries(1);
        }
        if (!(kron(E, U) == B)) continue;

        const CoeffScalar kappa = b.lead();
        const Rat t = b.val(), lambda = t / Rat(static_cast<long long>(n));
        const CoeffScalar u = nth_root(kappa * CoeffScalar::qpow(-t * Rat(static_cast<long long>(n) - 1, 2)),
                                       static_cast<long long>(n));
        PVMat UE(n, n);
        for (size_t k = 0; k < n; ++k) {
            PVExpr y = PVExpr::e(u * CoeffScalar::zeta(static_cast<int>(n), static_cast<long long>(k))) *
                       PVExpr::ez(lambda);
            for (size_t j = 0; j < n; ++j) {
                UE(j, k) = y;
                y = y.phi();
            }
        }
        // sum_k C(-ell, k) N^k, with C(-ell, k) = (-1)^k C(ell + k - 1, k)
        PVMat UU(m, m);
        for (size_t i = 0; i < m; ++i)
            for (size_t j = i; j < m; ++j) {
                const long long k = static_cast<long long>(j - i);
                PVExpr c = PVExpr::binom_ell(k, k - 1);
                UU(i, j) = k % 2 ? -c : c;
            }
        return kron(UE, UU);
    }
    return std::nullopt;
}

}  // namespace

FundamentalMatrix fundamental_matrix(const DiffModule& M) {
    const SMat& B = M.B;
    if (!exact(B)) fail(ErrorKind::UnsupportedShape, "fundamental_matrix needs an exact Phi-matrix");
    const size_t n = B.rows();
    FundamentalMatrix out;
    out.U = PVMat(n, n);
    for (const auto& idx : components(B)) {
        std::optional<PVMat> sol = block_solution(restrict_to(B, idx));
        if (!sol)
            fail(ErrorKind::UnsupportedShape,
                 "fundamental_matrix needs a split module whose blocks are in pure normal form");
        for (size_t a = 0; a < idx.size(); ++a)
            for (size_t b = 0; b < idx.size(); ++b) out.U(idx[a], idx[b]) = (*sol)(a, b);
    }
    bool units = false, zs = false, ells = false;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            for (const auto& t : out.U(i, j).terms()) {
                units = units || !t.unit.is_one();
                zs = zs || t.lambda != Rat(0);
                ells = ells || t.ell > 0;
            }
    if (units) out.notes.push_back("e(c) stands for z^b with q^b = 1/c");
    if (zs)
        out.notes.push_back(
            "e(z^l) satisfies phi(e(z^l)) = z^-l e(z^l); e(-z) = e(-1)*e(z) is realized by "
            "theta(z) = sum_n (-1)^n q^(n(n-1)/2) z^n");
    if (ells) out.notes.push_back("ell stands for log(z)/(2 pi i tau) where q = exp(2 pi i tau)");
    return out;
}

PVMat fundamental_residual(const DiffModule& M, const PVMat& U) { return U - M.B * phi(U); }

// ------------------------------------------------------------ formal solvers

namespace {

// g with (c z^-lam PHI - 1) g = h. Comparing z^(i/R) coefficients gives
// g_(i/R) = c^-1 q^(-i/R) (g + h)_((i - lam R)/R), so g is built bottom-up.
PuiseuxSeries inverse_factor(const PuiseuxSeries& h, const CoeffScalar& c, const Rat& lam, const Rat& T) {
    if (h.is_exact_zero()) return h;
    const long long R = lcm_ll(h.ram(), lam.denominator());
    Rat cap = T;
    if (auto p = h.prec()) cap = std::min(cap, *p + lam);
    const long long capi = ceil_rat(cap * Rat(R));
    if (h.is_zero()) return PuiseuxSeries::big_o(cap);
    const long long lo = (h.val() * Rat(R)).numerator();
    const long long L = (lam * Rat(R)).numerator();
    if (lo >= capi) return PuiseuxSeries::big_o(cap);
    const CoeffScalar cinv = inv(c);
    std::vector<CoeffScalar> g(static_cast<size_t>(capi - lo));
    for (long long i = lo + L; i < capi; ++i) {
        const long long j = i - L;
        CoeffScalar x = g[static_cast<size_t>(j - lo)] + h.coeff(Rat(j, R));
        if (!x.is_zero()) g[static_cast<size_t>(i - lo)] = cinv * CoeffScalar::qpow(Rat(-i, R)) * x;
    }
    return PuiseuxSeries::from_terms(R, lo, std::move(g), false, capi);
}

PuiseuxSeries apply_factor(const BFactor& f, const PuiseuxSeries& y) {
    return (f.c * phi_apply(y, 1)).shift(-f.lambda) - y;
}

}  // namespace

PuiseuxSeries f_series(long long m, const CoeffScalar& c, const Rat& mu, const Rat& T) {
    if (m < 0) fail(ErrorKind::InvalidArgument, "f_series needs m >= 0");
    if (c.is_zero()) fail(ErrorKind::DomainViolation, "f_series needs c != 0");
    if (mu <= Rat(0) || c.w() < Rat(0) || c.w() >= mu)
        fail(ErrorKind::DomainViolation, "f_series needs mu > 0 and 0 <= w(c) < mu");
    PuiseuxSeries y(1);
    for (long long k = 0; k < m; ++k) y = inverse_factor(y, inv(c), mu, T);
    return y;
}

PuiseuxSeries solve_b(const std::vector<BFactor>& factors, const Rat& mu, const Rat& T) {
    for (size_t i = 0; i < factors.size(); ++i) {
        if (factors[i].lambda <= Rat(0) || (i && factors[i].lambda <= factors[i - 1].lambda))
            fail(ErrorKind::DomainViolation, "solve_b needs positive, strictly increasing slopes");
        if (factors[i].m < 1) fail(ErrorKind::InvalidArgument, "solve_b needs multiplicities >= 1");
        if (factors[i].c.is_zero()) fail(ErrorKind::InvalidArgument, "solve_b needs nonzero constants");
    }
    // the leftmost factor is inverted first
    PuiseuxSeries y = PuiseuxSeries::z(mu);
    for (const auto& f : factors)
        for (long long k = 0; k < f.m; ++k) y = inverse_factor(y, f.c, f.lambda, T);
    return y;
}

PuiseuxSeries apply_b(const std::vector<BFactor>& factors, const PuiseuxSeries& f) {
    PuiseuxSeries y = f;
    for (size_t i = factors.size(); i-- > 0;)
        for (long long k = 0; k < factors[i].m; ++k) y = apply_factor(factors[i], y);
    return y;
}

PVExpr derivation_check(const std::vector<CoeffScalar>& a, const CoeffScalar& c, const Rat& mu, long long m) {
    if (m < 1) fail(ErrorKind::InvalidArgument, "derivation_check needs m >= 1");
    if (static_cast<long long>(a.size()) < m) fail(ErrorKind::InvalidArgument, "derivation_check needs m coefficients");
    if (c.is_zero()) fail(ErrorKind::InvalidArgument, "derivation_check needs c != 0");
    const PVExpr sym = PVExpr::e(inv(c)) * PVExpr::ez(-mu);
    auto D = [&](long long k) {
        PVExpr s;
        for (long long j = 0; j < k; ++j) s += PVExpr(PuiseuxSeries(a[static_cast<size_t>(j)])) * PVExpr::binom_ell(k - 1 - j);
        return s * sym;
    };
    const PVExpr Dm = D(m), Dm1 = D(m - 1);
    return Dm.phi() - PVExpr(PuiseuxSeries::monomial(c, mu)) * (Dm + Dm1);
}

}  // namespace qd
