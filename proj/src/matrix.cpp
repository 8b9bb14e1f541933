#include "qdiff/matrix.hpp"

#include "qdiff/errors.hpp"

#include <optional>

namespace qd {

SMat phi_apply(const SMat& a, long long p) {
    SMat r(a.rows(), a.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) r(i, j) = phi_apply(a(i, j), p);
    return r;
}

SMat scale(const CoeffScalar& c, const SMat& a) {
    SMat r(a.rows(), a.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) r(i, j) = c * a(i, j);
    return r;
}

SMat truncate(const SMat& a, const Rat& p) {
    SMat r(a.rows(), a.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j).truncate(p);
    return r;
}

SMat to_series(const CMat& a) {
    SMat r(a.rows(), a.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) r(i, j) = PuiseuxSeries(a(i, j));
    return r;
}

std::optional<Rat> precision(const SMat& a) {
    std::optional<Rat> p;
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) {
            auto pe = a(i, j).prec();
            if (pe && (!p || *pe < *p)) p = pe;
        }
    return p;
}

bool exact(const SMat& a) { return !precision(a).has_value(); }

bool agree(const SMat& a, const SMat& b) {
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j)
            if (!agree(a(i, j), b(i, j))) return false;
    return true;
}

long long ram(const SMat& a) {
    long long n = 1;
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) n = lcm_ll(n, a(i, j).ram());
    return n;
}

std::pair<Rat, Rat> valuation_range(const SMat& a) {
    bool any = false;
    Rat lo(0), hi(0);
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) {
            if (a(i, j).is_zero()) continue;
            Rat v = a(i, j).val();
            if (!any || v < lo) lo = v;
            if (!any || v > hi) hi = v;
            any = true;
        }
    return {lo, hi};
}

namespace {

// Exact values stay exact; only already truncated ones get cut at trunc.
PuiseuxSeries cut(const PuiseuxSeries& f, const Rat& trunc) { return f.exact() ? f : f.truncate(trunc); }

// Gauss-Jordan on [a | b]; returns false when a pivot cannot be found.
bool eliminate(SMat& a, SMat& b, const Rat& trunc, PuiseuxSeries* detp) {
    const size_t n = a.rows();
    PuiseuxSeries d(1);
    for (size_t col = 0; col < n; ++col) {
        size_t piv = n;
        Rat best(0);
        for (size_t i = col; i < n; ++i) {
            if (a(i, col).is_zero()) continue;
            Rat v = a(i, col).val();
            bool mono = a(i, col).is_monomial();
            if (piv == n || v < best || (v == best && mono && !a(piv, col).is_monomial())) {
                piv = i;
                best = v;
            }
        }
        if (piv == n) return false;
        if (piv != col) {
            for (size_t j = 0; j < n; ++j) std::swap(a(piv, j), a(col, j));
            for (size_t j = 0; j < b.cols(); ++j) std::swap(b(piv, j), b(col, j));
            d = -d;
        }
        PuiseuxSeries p = a(col, col);
        d = d * p;
        PuiseuxSeries pinv = p.is_monomial() ? inv(p) : inv(p, trunc - best);
        for (size_t j = 0; j < n; ++j)
            if (!a(col, j).is_zero()) a(col, j) = cut(a(col, j) * pinv, trunc);
        for (size_t j = 0; j < b.cols(); ++j)
            if (!b(col, j).is_zero()) b(col, j) = cut(b(col, j) * pinv, trunc);
        for (size_t i = 0; i < n; ++i) {
            if (i == col || a(i, col).is_zero()) continue;
            PuiseuxSeries f = a(i, col);
            for (size_t j = 0; j < n; ++j)
                if (!a(col, j).is_zero()) a(i, j) = cut(a(i, j) - f * a(col, j), trunc);
            a(i, col) = PuiseuxSeries();
            for (size_t j = 0; j < b.cols(); ++j)
                if (!b(col, j).is_zero()) b(i, j) = cut(b(i, j) - f * b(col, j), trunc);
        }
    }
    if (detp) *detp = d;
    return true;
}

// Exact Gauss-Jordan when every pivot can be an exact monomial.
std::optional<SMat> exact_inverse(const SMat& a0) {
    if (!exact(a0)) return std::nullopt;
    SMat a = a0, b = SMat::identity(a0.rows());
    const size_t n = a.rows();
    for (size_t col = 0; col < n; ++col) {
        size_t piv = n;
        for (size_t i = col; i < n; ++i)
            if (a(i, col).is_monomial()) {
                piv = i;
                break;
            }
        if (piv == n) return std::nullopt;
        if (piv != col) {
            for (size_t j = 0; j < n; ++j) {
                std::swap(a(piv, j), a(col, j));
                std::swap(b(piv, j), b(col, j));
            }
        }
        PuiseuxSeries pinv = inv(a(col, col));
        for (size_t j = 0; j < n; ++j) {
            a(col, j) = a(col, j) * pinv;
            b(col, j) = b(col, j) * pinv;
        }
        for (size_t i = 0; i < n; ++i) {
            if (i == col || a(i, col).is_zero()) continue;
            PuiseuxSeries f = a(i, col);
            for (size_t j = 0; j < n; ++j) {
                a(i, j) = a(i, j) - f * a(col, j);
                b(i, j) = b(i, j) - f * b(col, j);
            }
        }
    }
    return b;
}

PuiseuxSeries laplace_det(const SMat& a, std::vector<size_t>& rows, size_t col) {
    if (col == a.cols()) return PuiseuxSeries(1);
    PuiseuxSeries acc;
    long long sign = 1;
    for (size_t k = 0; k < rows.size(); ++k) {
        size_t r = rows[k];
        if (!a(r, col).is_zero()) {
            rows.erase(rows.begin() + static_cast<long>(k));
            PuiseuxSeries minor = laplace_det(a, rows, col + 1);
            rows.insert(rows.begin() + static_cast<long>(k), r);
            PuiseuxSeries t = a(r, col) * minor;
            acc = sign > 0 ? acc + t : acc - t;
        }
        sign = -sign;
    }
    return acc;
}

PuiseuxSeries exact_det(const SMat& a) {
    std::vector<size_t> rows(a.rows());
    for (size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    return laplace_det(a, rows, 0);
}

// adj(a)/det(a) for small exact matrices with a monomial determinant.
std::optional<SMat> adjugate_inverse(const SMat& a) {
    const size_t n = a.rows();
    if (!exact(a) || n > 6) return std::nullopt;
    PuiseuxSeries d = exact_det(a);
    if (!d.is_monomial()) return std::nullopt;
    PuiseuxSeries di = inv(d);
    SMat r(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            SMat m(n - 1, n - 1);
            for (size_t x = 0, mx = 0; x < n; ++x) {
                if (x == j) continue;
                for (size_t y = 0, my = 0; y < n; ++y) {
                    if (y == i) continue;
                    m(mx, my++) = a(x, y);
                }
                ++mx;
            }
            PuiseuxSeries c = n == 1 ? PuiseuxSeries(1) : exact_det(m);
            r(i, j) = ((i + j) % 2 ? -c : c) * di;
        }
    return r;
}

}  // namespace

SMat inverse(const SMat& a0, const Rat& trunc) {
    if (a0.rows() != a0.cols()) fail(ErrorKind::InvalidArgument, "inverse of a non-square matrix");
    if (auto e = exact_inverse(a0)) return *e;
    if (auto e = adjugate_inverse(a0)) return *e;
    SMat a = a0, b = SMat::identity(a0.rows());
    if (!eliminate(a, b, trunc, nullptr)) fail(ErrorKind::SingularGauge, "matrix is singular to working precision");
    return b;
}

PuiseuxSeries det(const SMat& a0, const Rat& trunc) {
    SMat a = a0, b(a0.rows(), 0);
    PuiseuxSeries d;
    if (!eliminate(a, b, trunc, &d)) return PuiseuxSeries::big_o(trunc);
    return d;
}

SMat solve(const SMat& a0, const SMat& b0, const Rat& trunc) {
    SMat a = a0, b = b0;
    if (!eliminate(a, b, trunc, nullptr)) fail(ErrorKind::SingularGauge, "singular system");
    return b;
}

bool full_rank(const SMat& a0, const Rat& trunc) {
    SMat a = a0, b(a0.rows(), 0);
    return eliminate(a, b, trunc, nullptr);
}

namespace {

// Row echelon over the scalar field; returns pivot columns.
std::vector<size_t> echelon(CMat& a, CMat* b) {
    std::vector<size_t> pivots;
    size_t row = 0;
    for (size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
        size_t piv = a.rows();
        for (size_t i = row; i < a.rows(); ++i)
            if (!a(i, col).is_zero()) {
                piv = i;
                if (a(i, col).is_monomial()) break;
            }
        if (piv == a.rows()) continue;
        if (piv != row) {
            for (size_t j = 0; j < a.cols(); ++j) std::swap(a(piv, j), a(row, j));
            if (b)
                for (size_t j = 0; j < b->cols(); ++j) std::swap((*b)(piv, j), (*b)(row, j));
        }
        CoeffScalar pinv = inv(a(row, col));
        for (size_t j = 0; j < a.cols(); ++j)
            if (!a(row, j).is_zero()) a(row, j) = a(row, j) * pinv;
        if (b)
            for (size_t j = 0; j < b->cols(); ++j)
                if (!(*b)(row, j).is_zero()) (*b)(row, j) = (*b)(row, j) * pinv;
        for (size_t i = 0; i < a.rows(); ++i) {
            if (i == row || a(i, col).is_zero()) continue;
            CoeffScalar f = a(i, col);
            for (size_t j = 0; j < a.cols(); ++j)
                if (!a(row, j).is_zero()) a(i, j) = a(i, j) - f * a(row, j);
            if (b)
                for (size_t j = 0; j < b->cols(); ++j)
                    if (!(*b)(row, j).is_zero()) (*b)(i, j) = (*b)(i, j) - f * (*b)(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

}  // namespace

CMat inverse(const CMat& a0) {
    CMat a = a0, b = CMat::identity(a0.rows());
    if (echelon(a, &b).size() != a0.rows()) fail(ErrorKind::SingularGauge, "constant matrix is singular");
    return b;
}

CoeffScalar det(const CMat& a0) {
    CMat a = a0;
    const size_t n = a.rows();
    CoeffScalar d(1);
    for (size_t col = 0; col < n; ++col) {
        size_t piv = n;
        for (size_t i = col; i < n; ++i)
            if (!a(i, col).is_zero()) {
                piv = i;
                break;
            }
        if (piv == n) return CoeffScalar();
        if (piv != col) {
            for (size_t j = 0; j < n; ++j) std::swap(a(piv, j), a(col, j));
            d = -d;
        }
        d = d * a(col, col);
        CoeffScalar pinv = inv(a(col, col));
        for (size_t i = col + 1; i < n; ++i) {
            if (a(i, col).is_zero()) continue;
            CoeffScalar f = a(i, col) * pinv;
            for (size_t j = col; j < n; ++j) a(i, j) = a(i, j) - f * a(col, j);
        }
    }
    return d;
}

size_t rank(const CMat& a0) {
    CMat a = a0;
    return echelon(a, nullptr).size();
}

CMat kernel(const CMat& a0) {
    CMat a = a0;
    auto piv = echelon(a, nullptr);
    std::vector<bool> is_piv(a.cols(), false);
    for (size_t p : piv) is_piv[p] = true;
    std::vector<size_t> free;
    for (size_t j = 0; j < a.cols(); ++j)
        if (!is_piv[j]) free.push_back(j);
    CMat k(a.cols(), free.size());
    for (size_t f = 0; f < free.size(); ++f) {
        k(free[f], f) = CoeffScalar(1);
        for (size_t r = 0; r < piv.size(); ++r) k(piv[r], f) = -a(r, free[f]);
    }
    return k;
}

CMat scale(const CoeffScalar& c, const CMat& a) {
    CMat r(a.rows(), a.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) r(i, j) = c * a(i, j);
    return r;
}

std::vector<CoeffScalar> charpoly(const CMat& a) {
    // Faddeev-LeVerrier: fine in characteristic zero and for the small sizes used here
    const size_t n = a.rows();
    std::vector<CoeffScalar> c(n + 1);
    c[n] = CoeffScalar(1);
    CMat Mk(n, n);
    for (size_t k = 1; k <= n; ++k) {
        CMat t = a * Mk;
        for (size_t i = 0; i < n; ++i) t(i, i) = t(i, i) + c[n - k + 1];
        Mk = t;
        CMat am = a * Mk;
        CoeffScalar tr;
        for (size_t i = 0; i < n; ++i) tr += am(i, i);
        c[n - k] = -(tr / CoeffScalar(static_cast<long long>(k)));
    }
    return c;
}

bool is_constant(const SMat& a) {
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j)
            if (!a(i, j).is_constant()) return false;
    return true;
}

CMat constant_part(const SMat& a) {
    CMat r(a.rows(), a.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j).coeff(Rat(0));
    return r;
}

std::string to_string(const SMat& a) {
    std::string s = "[";
    for (size_t i = 0; i < a.rows(); ++i) {
        s += i ? ",[" : "[";
        for (size_t j = 0; j < a.cols(); ++j) {
            if (j) s += ",";
            s += to_string(a(i, j));
        }
        s += "]";
    }
    return s + "]";
}

std::string to_string(const CMat& a) { return to_string(to_series(a)); }

}  // namespace qd
