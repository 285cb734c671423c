#ifndef SPECCURVE_LINALG_HPP
#define SPECCURVE_LINALG_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "speccurve/ratfunc.hpp"

namespace speccurve {

// Dense square-ish matrix over an exact field (GaussRat or RatFunc).
// The field type must be constructible from int and support +,-,*,/ and
// comparison with is_zero() exposed via the free helper below.
inline bool field_is_zero(const GaussRat& x) { return x.is_zero(); }
inline bool field_is_zero(const RatFunc& x) { return x.is_zero(); }

template <class F>
class Mat {
  public:
    Mat() : rows_(0), cols_(0) {}
    Mat(std::size_t r, std::size_t c) : rows_(r), cols_(c), a_(r * c, F(0)) {}

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t k = 0; k < n; ++k) m(k, k) = F(1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    F& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    const F& operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

    friend Mat operator+(const Mat& x, const Mat& y) {
        Mat r(x.rows_, x.cols_);
        for (std::size_t k = 0; k < x.a_.size(); ++k) r.a_[k] = x.a_[k] + y.a_[k];
        return r;
    }
    friend Mat operator-(const Mat& x, const Mat& y) {
        Mat r(x.rows_, x.cols_);
        for (std::size_t k = 0; k < x.a_.size(); ++k) r.a_[k] = x.a_[k] - y.a_[k];
        return r;
    }
    friend Mat operator*(const Mat& x, const Mat& y) {
        Mat r(x.rows_, y.cols_);
        for (std::size_t i = 0; i < x.rows_; ++i)
            for (std::size_t k = 0; k < x.cols_; ++k) {
                if (field_is_zero(x(i, k))) continue;
                for (std::size_t j = 0; j < y.cols_; ++j) r(i, j) += x(i, k) * y(k, j);
            }
        return r;
    }
    friend Mat operator*(const F& s, const Mat& m) {
        Mat r(m.rows_, m.cols_);
        for (std::size_t k = 0; k < m.a_.size(); ++k) r.a_[k] = s * m.a_[k];
        return r;
    }
    friend bool operator==(const Mat& x, const Mat& y) {
        return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.a_ == y.a_;
    }
    friend bool operator!=(const Mat& x, const Mat& y) { return !(x == y); }

    Mat& operator+=(const Mat& o) { return *this = *this + o; }
    Mat& operator-=(const Mat& o) { return *this = *this - o; }

    bool is_zero() const {
        for (const auto& x : a_)
            if (!field_is_zero(x)) return false;
        return true;
    }

    F trace() const {
        F t(0);
        for (std::size_t k = 0; k < rows_; ++k) t = t + (*this)(k, k);
        return t;
    }

    Mat transpose() const {
        Mat r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    F det() const {
        if (rows_ != cols_) throw value_error("determinant of non-square matrix");
        Mat m = *this;
        F d(1);
        bool neg = false;
        for (std::size_t col = 0; col < cols_; ++col) {
            std::size_t piv = col;
            while (piv < rows_ && field_is_zero(m(piv, col))) ++piv;
            if (piv == rows_) return F(0);
            if (piv != col) {
                m.swap_rows(piv, col);
                neg = !neg;
            }
            d = d * m(col, col);
            F inv = F(1) / m(col, col);
            for (std::size_t r = col + 1; r < rows_; ++r) {
                if (field_is_zero(m(r, col))) continue;
                F f = m(r, col) * inv;
                for (std::size_t c = col; c < cols_; ++c) m(r, c) = m(r, c) - f * m(col, c);
            }
        }
        return neg ? F(0) - d : d;
    }

    Mat inverse() const {
        if (rows_ != cols_) throw value_error("inverse of non-square matrix");
        Mat m = *this;
        Mat inv = identity(rows_);
        for (std::size_t col = 0; col < cols_; ++col) {
            std::size_t piv = col;
            while (piv < rows_ && field_is_zero(m(piv, col))) ++piv;
            if (piv == rows_) throw value_error("matrix is singular");
            if (piv != col) {
                m.swap_rows(piv, col);
                inv.swap_rows(piv, col);
            }
            F s = F(1) / m(col, col);
            m.scale_row(col, s);
            inv.scale_row(col, s);
            for (std::size_t r = 0; r < rows_; ++r) {
                if (r == col || field_is_zero(m(r, col))) continue;
                F f = m(r, col);
                m.sub_scaled_row(r, col, f);
                inv.sub_scaled_row(r, col, f);
            }
        }
        return inv;
    }

    // Row-reduce in place; returns rank. Columns processed left to right.
    std::size_t rref() {
        std::size_t rank = 0;
        for (std::size_t col = 0; col < cols_ && rank < rows_; ++col) {
            std::size_t piv = rank;
            while (piv < rows_ && field_is_zero((*this)(piv, col))) ++piv;
            if (piv == rows_) continue;
            swap_rows(piv, rank);
            scale_row(rank, F(1) / (*this)(rank, col));
            for (std::size_t r = 0; r < rows_; ++r) {
                if (r == rank || field_is_zero((*this)(r, col))) continue;
                F factor = (*this)(r, col);  // copy: the row op overwrites this cell
                sub_scaled_row(r, rank, factor);
            }
            ++rank;
        }
        return rank;
    }

    std::size_t rank() const {
        Mat m = *this;
        return m.rref();
    }

    void swap_rows(std::size_t i, std::size_t j) {
        for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(i, c), (*this)(j, c));
    }
    void scale_row(std::size_t i, const F& s) {
        for (std::size_t c = 0; c < cols_; ++c) (*this)(i, c) = s * (*this)(i, c);
    }
    void sub_scaled_row(std::size_t i, std::size_t j, const F& s) {
        for (std::size_t c = 0; c < cols_; ++c) (*this)(i, c) = (*this)(i, c) - s * (*this)(j, c);
    }

  private:
    std::size_t rows_, cols_;
    std::vector<F> a_;
};

using QMat = Mat<GaussRat>;
using RMat = Mat<RatFunc>;

// Coefficients (c_1,...,c_r) of det(tI - M) = t^r + c_1 t^{r-1} + ... + c_r,
// by the Faddeev-LeVerrier recursion (division only by integers, exact).
template <class F>
std::vector<F> char_poly_coeffs(const Mat<F>& M) {
    std::size_t n = M.rows();
    if (n != M.cols()) throw value_error("characteristic polynomial of non-square matrix");
    std::vector<F> c(n, F(0));
    Mat<F> Mk = M;
    for (std::size_t k = 1; k <= n; ++k) {
        F tr = Mk.trace();
        c[k - 1] = (F(0) - tr) / F(static_cast<int>(k));
        if (k == n) break;
        Mat<F> shifted = Mk;
        for (std::size_t d = 0; d < n; ++d) shifted(d, d) = shifted(d, d) + c[k - 1];
        Mk = M * shifted;
    }
    return c;
}

// Columns span the kernel of M (as a matrix over the field).
template <class F>
Mat<F> kernel_basis(const Mat<F>& M) {
    Mat<F> m = M;
    std::size_t rank = m.rref();
    std::size_t n = M.cols();
    // locate pivot columns
    std::vector<long> pivot_of_col(n, -1);
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < rank; ++c) {
        if (!field_is_zero(m(r, c))) {
            pivot_of_col[c] = static_cast<long>(r);
            ++r;
        }
    }
    Mat<F> K(n, n - rank);
    std::size_t out = 0;
    for (std::size_t c = 0; c < n; ++c) {
        if (pivot_of_col[c] >= 0) continue;
        K(c, out) = F(1);
        for (std::size_t cc = 0; cc < c; ++cc) {
            if (pivot_of_col[cc] >= 0)
                K(cc, out) = F(0) - m(static_cast<std::size_t>(pivot_of_col[cc]), c);
        }
        ++out;
    }
    return K;
}

} // namespace speccurve

#endif
