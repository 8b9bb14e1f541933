#include "qdiff/dmodule.hpp"

#include "qdiff/errors.hpp"

#include <functional>

namespace qd {

DiffModule DiffModule::from_A(const SMat& A, const Rat& T) {
    if (A.rows() != A.cols() || A.rows() == 0) fail(ErrorKind::InvalidArgument, "module matrix must be square");
    return {inverse(transpose(A), T), A, T};
}

DiffModule DiffModule::from_B(const SMat& B, const Rat& T) {
    if (B.rows() != B.cols() || B.rows() == 0) fail(ErrorKind::InvalidArgument, "module matrix must be square");
    return {B, std::nullopt, T};
}

SMat DiffModule::A() const { return A_known ? *A_known : inverse(transpose(B), T); }

DiffModule companion(const SkewOperator& L, const Rat& T) {
    if (L.is_zero()) fail(ErrorKind::ZeroOperator, "companion of the zero operator");
    const long long m = L.deg_hi();
    if (m < 1 || !(L.coeff(m) == PuiseuxSeries(1))) fail(ErrorKind::NonMonic, "companion needs a monic operator");
    if (L.deg_lo() != 0) fail(ErrorKind::SingularConstantTerm, "companion needs a nonzero constant term");
    const size_t n = static_cast<size_t>(m);
    SMat B(n, n);
    for (size_t i = 0; i + 1 < n; ++i) B(i + 1, i) = PuiseuxSeries(1);
    for (size_t i = 0; i < n; ++i) B(i, n - 1) = -L.coeff(static_cast<long long>(i));
    return DiffModule::from_B(B, T);
}

namespace {

// Candidate cyclic vectors: unit vectors, then sum z^k_j e_j by growing max exponent.
std::vector<std::vector<long long>> candidate_exponents(size_t n, long long K) {
    std::vector<std::vector<long long>> out;
    std::vector<long long> cur(n, 0);
    std::function<void(size_t)> rec = [&](size_t i) {
        if (i == n) {
            long long mx = 0;
            for (long long v : cur) mx = std::max(mx, v);
            if (mx == K) out.push_back(cur);
            return;
        }
        for (long long v = 0; v <= K; ++v) {
            cur[i] = v;
            rec(i + 1);
        }
    };
    rec(0);
    return out;
}

}  // namespace

CyclicResult cyclic_vector(const DiffModule& M, const Rat& T) {
    const size_t n = M.dim();
    const Rat work = T + Rat(static_cast<long long>(4 * n + 8));
    std::vector<SMat> cands;
    for (size_t i = 0; i < n; ++i) {
        SMat v(n, 1);
        v(i, 0) = PuiseuxSeries(1);
        cands.push_back(v);
    }
    for (long long K = 0; K <= 3; ++K)
        for (const auto& ex : candidate_exponents(n, K)) {
            SMat v(n, 1);
            for (size_t j = 0; j < n; ++j) v(j, 0) = PuiseuxSeries::z(Rat(ex[j]));
            cands.push_back(v);
        }
    for (const auto& v0 : cands) {
        SMat V(n, n);
        SMat v = v0;
        for (size_t i = 0; i < n; ++i) {
            for (size_t r = 0; r < n; ++r) V(r, i) = v(r, 0);
            v = M.B * phi_apply(v, 1);
        }
        if (!full_rank(V, work)) continue;
        SMat alpha = solve(V, v, work);
        SkewOperator L = SkewOperator::phi_pow(static_cast<long long>(n));
        for (size_t i = 0; i < n; ++i) {
            PuiseuxSeries a = alpha(i, 0);
            if (!a.exact()) a = a.truncate(T);
            L = L - SkewOperator::term(a, static_cast<long long>(i));
        }
        if (L.deg_lo() != 0) continue;  // constant term vanished to precision
        return {L, v0, V};
    }
    fail(ErrorKind::PrecisionExhausted, "no cyclic vector certified at working precision");
}

namespace {

std::optional<SMat> both(const DiffModule& M, const DiffModule& N, SMat (*f)(const SMat&, const SMat&)) {
    if (!M.A_known || !N.A_known) return std::nullopt;
    return f(*M.A_known, *N.A_known);
}

}  // namespace

DiffModule construct(ConstructKind kind, const DiffModule& M, const DiffModule& N) {
    const Rat T = std::min(M.T, N.T);
    switch (kind) {
        case ConstructKind::DSum:
            return {block_diag(M.B, N.B), both(M, N, &block_diag<PuiseuxSeries>), T};
        case ConstructKind::Tensor:
            return {kron(M.B, N.B), both(M, N, &kron<PuiseuxSeries>), T};
        case ConstructKind::Dual:
            return {M.A(), M.B, M.T};
        case ConstructKind::Hom: {
            std::optional<SMat> a;
            if (N.A_known) a = kron(M.B, *N.A_known);
            return {kron(M.A(), N.B), a, T};
        }
    }
    fail(ErrorKind::InvalidArgument, "unknown construction");
}

DiffModule gauge_transform(const DiffModule& M, const SMat& U, const Rat& T) {
    SMat Ui = inverse(U, T);
    std::optional<SMat> a;
    if (M.A_known) a = Ui * *M.A_known * phi_apply(U, 1);
    return {transpose(U) * M.B * transpose(phi_apply(Ui, 1)), a, T};
}

DiffModule gauge_phi(const DiffModule& M, const SMat& P, const Rat& T) {
    SMat Pi = inverse(P, T);
    std::optional<SMat> a;
    if (M.A_known) a = transpose(P) * *M.A_known * transpose(phi_apply(Pi, 1));
    return {Pi * M.B * phi_apply(P, 1), a, T};
}

SkewOperator monic_normalize(const SkewOperator& L, const Rat& T) {
    if (L.is_zero()) fail(ErrorKind::ZeroOperator, "normalizing the zero operator");
    PuiseuxSeries lead = L.coeff(L.deg_hi());
    Rat minv = lead.val();
    for (const auto& [i, c] : L.terms()) minv = std::min(minv, c.val_or_prec());
    PuiseuxSeries li = inv(lead, T - minv);
    SkewOperator r = li * L;
    // the leading coefficient is 1 up to precision; set it exactly
    r.set(L.deg_hi(), PuiseuxSeries(1));
    // PHI^-lo L is the same left ideal generator up to a unit
    long long lo = r.deg_lo();
    if (lo != 0) r = SkewOperator::phi_pow(-lo) * r;
    SkewOperator out;
    for (const auto& [i, c] : r.terms()) out.set(i, c.exact() ? c : c.truncate(T));
    return out;
}

}  // namespace qd
