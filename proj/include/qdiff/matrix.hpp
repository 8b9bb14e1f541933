#pragma once

#include "qdiff/series.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qd {

template <class T>
class Mat {
public:
    Mat() = default;
    Mat(size_t r, size_t c) : r_(r), c_(c), a_(r * c) {}
    static Mat identity(size_t n) {
        Mat m(n, n);
        for (size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }
    size_t rows() const { return r_; }
    size_t cols() const { return c_; }
    T& operator()(size_t i, size_t j) { return a_[i * c_ + j]; }
    const T& operator()(size_t i, size_t j) const { return a_[i * c_ + j]; }

private:
    size_t r_ = 0, c_ = 0;
    std::vector<T> a_;
};

template <class T>
Mat<T> operator+(const Mat<T>& a, const Mat<T>& b) {
    Mat<T> r(a.rows(), a.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) + b(i, j);
    return r;
}

template <class T>
Mat<T> operator-(const Mat<T>& a, const Mat<T>& b) {
    Mat<T> r(a.rows(), a.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) - b(i, j);
    return r;
}

template <class T>
Mat<T> operator*(const Mat<T>& a, const Mat<T>& b) {
    Mat<T> r(a.rows(), b.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t k = 0; k < a.cols(); ++k) {
            if (a(i, k).is_zero()) continue;
            for (size_t j = 0; j < b.cols(); ++j) {
                if (b(k, j).is_zero()) continue;
                r(i, j) = r(i, j) + a(i, k) * b(k, j);
            }
        }
    return r;
}

template <class T>
bool operator==(const Mat<T>& a, const Mat<T>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j)
            if (!(a(i, j) == b(i, j))) return false;
    return true;
}

template <class T>
Mat<T> transpose(const Mat<T>& a) {
    Mat<T> r(a.cols(), a.rows());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) r(j, i) = a(i, j);
    return r;
}

// Kronecker product, index (i, k) -> i * dim(b) + k.
template <class T>
Mat<T> kron(const Mat<T>& a, const Mat<T>& b) {
    Mat<T> r(a.rows() * b.rows(), a.cols() * b.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) {
            if (a(i, j).is_zero()) continue;
            for (size_t k = 0; k < b.rows(); ++k)
                for (size_t l = 0; l < b.cols(); ++l) r(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
        }
    return r;
}

template <class T>
Mat<T> block_diag(const Mat<T>& a, const Mat<T>& b) {
    Mat<T> r(a.rows() + b.rows(), a.cols() + b.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j);
    for (size_t i = 0; i < b.rows(); ++i)
        for (size_t j = 0; j < b.cols(); ++j) r(a.rows() + i, a.cols() + j) = b(i, j);
    return r;
}

template <class T>
Mat<T> submatrix(const Mat<T>& a, size_t r0, size_t c0, size_t nr, size_t nc) {
    Mat<T> r(nr, nc);
    for (size_t i = 0; i < nr; ++i)
        for (size_t j = 0; j < nc; ++j) r(i, j) = a(r0 + i, c0 + j);
    return r;
}

template <class T>
bool is_zero(const Mat<T>& a) {
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j)
            if (!a(i, j).is_zero()) return false;
    return true;
}

using SMat = Mat<PuiseuxSeries>;
using CMat = Mat<CoeffScalar>;

SMat phi_apply(const SMat& a, long long p);
SMat scale(const CoeffScalar& c, const SMat& a);
SMat truncate(const SMat& a, const Rat& p);
SMat to_series(const CMat& a);
// Smallest entry precision, nullopt if exact.
std::optional<Rat> precision(const SMat& a);
bool exact(const SMat& a);
bool agree(const SMat& a, const SMat& b);
long long ram(const SMat& a);
// Entry valuation range over nonzero entries; {0,0} for a zero matrix.
std::pair<Rat, Rat> valuation_range(const SMat& a);
// Inverse over the series field. Pivots on minimal valuation; divisions by
// exact non-monomials are truncated at trunc. Throws SingularGauge.
SMat inverse(const SMat& a, const Rat& trunc);
PuiseuxSeries det(const SMat& a, const Rat& trunc);
// Solves a x = b for square invertible a.
SMat solve(const SMat& a, const SMat& b, const Rat& trunc);
// True when columns are independent to the tracked precision.
bool full_rank(const SMat& a, const Rat& trunc);

CMat inverse(const CMat& a);  // throws SingularGauge
CoeffScalar det(const CMat& a);
size_t rank(const CMat& a);
// Basis of the right kernel, columns of the returned matrix.
CMat kernel(const CMat& a);
CMat scale(const CoeffScalar& c, const CMat& a);
// Coefficients c_0..c_n of det(x I - a), c_n = 1.
std::vector<CoeffScalar> charpoly(const CMat& a);
bool is_constant(const SMat& a);
CMat constant_part(const SMat& a);  // coefficient of z^0, exact input or not

std::string to_string(const SMat& a);
std::string to_string(const CMat& a);

}  // namespace qd
