#pragma once

#include <complex>
#include <cstdlib>
#include <vector>

#include "isodimer/core.hpp"

namespace isodimer {

// Row-major dense matrix, just big enough for the determinant/solve needs of
// the Kasteleyn machinery. Sizes are guarded by ISODIMER_MAX_DIM (default
// 4096).
template <class T>
class Matrix {
  public:
    Matrix() = default;
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(size_t(rows) * cols, T(0)) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    T& operator()(int i, int j) { return a_[size_t(i) * cols_ + j]; }
    const T& operator()(int i, int j) const { return a_[size_t(i) * cols_ + j]; }

  private:
    int rows_ = 0, cols_ = 0;
    std::vector<T> a_;
};

inline int max_matrix_dim() {
    if (const char* s = std::getenv("ISODIMER_MAX_DIM")) {
        int v = std::atoi(s);
        if (v > 0) return v;
    }
    return 4096;
}

namespace detail {
inline double amag(double x) { return std::abs(x); }
inline double amag(const std::complex<double>& x) { return std::abs(x); }
}  // namespace detail

// LU factorization with partial pivoting, in place. Returns the number of row
// swaps, or -1 if the matrix is numerically singular (factorization still
// leaves a ~zero pivot in place so det comes out 0).
template <class T>
int lu_factor(Matrix<T>& m, std::vector<int>& perm) {
    const int n = m.rows();
    require(n == m.cols(), "lu_factor: matrix must be square");
    require(n <= max_matrix_dim(), "matrix dimension exceeds ISODIMER_MAX_DIM guard");
    perm.resize(n);
    int swaps = 0;
    bool singular = false;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = detail::amag(m(k, k));
        for (int i = k + 1; i < n; ++i) {
            double v = detail::amag(m(i, k));
            if (v > best) { best = v; piv = i; }
        }
        perm[k] = piv;
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
            ++swaps;
        }
        if (best == 0.0) { singular = true; continue; }
        const T inv = T(1) / m(k, k);
        for (int i = k + 1; i < n; ++i) {
            const T f = m(i, k) * inv;
            m(i, k) = f;
            if (f != T(0))
                for (int j = k + 1; j < n; ++j) m(i, j) -= f * m(k, j);
        }
    }
    return singular ? -1 : swaps;
}

template <class T>
T determinant(Matrix<T> m) {  // by value: LU clobbers
    const int n = m.rows();
    if (n == 0) return T(1);
    std::vector<int> perm;
    int swaps = lu_factor(m, perm);
    T det = (swaps >= 0 && (swaps & 1)) ? T(-1) : T(1);
    if (swaps < 0) {
        // count swaps anyway for the sign of the (possibly zero) product
        det = T(1);
    }
    for (int k = 0; k < n; ++k) det *= m(k, k);
    return det;
}

// Solve A x = b for several right-hand sides given a factored A.
template <class T>
std::vector<T> lu_solve(const Matrix<T>& lu, const std::vector<int>& perm, std::vector<T> b) {
    const int n = lu.rows();
    for (int k = 0; k < n; ++k)
        if (perm[k] != k) std::swap(b[k], b[perm[k]]);
    for (int i = 0; i < n; ++i) {
        T s = b[i];
        for (int j = 0; j < i; ++j) s -= lu(i, j) * b[j];
        b[i] = s;
    }
    for (int i = n - 1; i >= 0; --i) {
        T s = b[i];
        for (int j = i + 1; j < n; ++j) s -= lu(i, j) * b[j];
        require(detail::amag(lu(i, i)) > 0.0, "lu_solve: singular matrix");
        b[i] = s / lu(i, i);
    }
    return b;
}

}  // namespace isodimer
