#pragma once

// Small dense exact matrices plus the integer-lattice plumbing built on them:
// Hermite normal form, saturated integer kernels, rational inverses.

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include "mukai/number.hpp"

namespace mukai {

template <typename T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}
    Matrix(std::initializer_list<std::initializer_list<T>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_) throw Error(ErrorCode::InvalidInput, "ragged matrix initializer");
            for (const auto& x : row) data_.push_back(x);
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    /// Builds a matrix whose columns are the given vectors.
    static Matrix from_columns(const std::vector<std::vector<T>>& cols, std::size_t rows) {
        Matrix m(rows, cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j)
            for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j].at(i);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::vector<T> row(std::size_t i) const {
        return std::vector<T>(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                              data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
    }
    std::vector<T> col(std::size_t j) const {
        std::vector<T> out(rows_);
        for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
        return out;
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    bool is_square() const { return rows_ == cols_; }
    bool is_zero() const {
        return std::all_of(data_.begin(), data_.end(), [](const T& x) { return x == 0; });
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw Error(ErrorCode::InvalidInput, "matrix shape mismatch in product");
        Matrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                if (a(i, k) == 0) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
            }
        return c;
    }

    friend std::vector<T> operator*(const Matrix& a, const std::vector<T>& v) {
        if (a.cols_ != v.size()) throw Error(ErrorCode::InvalidInput, "matrix/vector shape mismatch");
        std::vector<T> out(a.rows_, T(0));
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t j = 0; j < a.cols_; ++j) out[i] += a(i, j) * v[j];
        return out;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error(ErrorCode::InvalidInput, "matrix shape mismatch in sum");
        for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
        return a;
    }
    friend Matrix operator-(Matrix a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error(ErrorCode::InvalidInput, "matrix shape mismatch in difference");
        for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
        return a;
    }
    friend Matrix operator-(Matrix a) {
        for (auto& x : a.data_) x = -x;
        return a;
    }
    friend Matrix operator*(const T& s, Matrix a) {
        for (auto& x : a.data_) x *= s;
        return a;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    Matrix power(unsigned n) const {
        if (!is_square()) throw Error(ErrorCode::InvalidInput, "power of a non-square matrix");
        Matrix result = identity(rows_);
        Matrix base = *this;
        while (n) {
            if (n & 1U) result = result * base;
            n >>= 1U;
            if (n) base = base * base;
        }
        return result;
    }

    friend std::ostream& operator<<(std::ostream& os, const Matrix& m) {
        os << "[";
        for (std::size_t i = 0; i < m.rows_; ++i) {
            os << (i ? ",[" : "[");
            for (std::size_t j = 0; j < m.cols_; ++j) os << (j ? "," : "") << m(i, j);
            os << "]";
        }
        return os << "]";
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using IntMatrix = Matrix<Int>;
using RatMatrix = Matrix<Rat>;
using IntVector = std::vector<Int>;

inline RatMatrix to_rat(const IntMatrix& m) {
    RatMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j);
    return r;
}

inline std::optional<IntMatrix> to_int_matrix(const RatMatrix& m) {
    IntMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (!is_integer(m(i, j))) return std::nullopt;
            r(i, j) = m(i, j).get_num();
        }
    return r;
}

/// Determinant by fraction-free (Bareiss) elimination.
inline Int determinant(const IntMatrix& m) {
    if (!m.is_square()) throw Error(ErrorCode::InvalidInput, "determinant of a non-square matrix");
    const std::size_t n = m.rows();
    if (n == 0) return 1;
    IntMatrix a = m;
    Int sign = 1;
    Int prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && a(p, k) == 0) ++p;
            if (p == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
        prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
}

/// Gauss-Jordan inverse over the rationals; nullopt when singular.
inline std::optional<RatMatrix> inverse(const RatMatrix& m) {
    if (!m.is_square()) throw Error(ErrorCode::InvalidInput, "inverse of a non-square matrix");
    const std::size_t n = m.rows();
    RatMatrix a = m;
    RatMatrix inv = RatMatrix::identity(n);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a(p, c) == 0) ++p;
        if (p == n) return std::nullopt;
        if (p != c)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(p, j), a(c, j));
                std::swap(inv(p, j), inv(c, j));
            }
        Rat pivot = a(c, c);
        for (std::size_t j = 0; j < n; ++j) {
            a(c, j) /= pivot;
            inv(c, j) /= pivot;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || a(i, c) == 0) continue;
            Rat f = a(i, c);
            for (std::size_t j = 0; j < n; ++j) {
                a(i, j) -= f * a(c, j);
                inv(i, j) -= f * inv(c, j);
            }
        }
    }
    return inv;
}

/// Row-style Hermite normal form. Returns the non-zero rows H (upper
/// echelon, positive pivots, entries above each pivot reduced into
/// [0, pivot)) together with a unimodular U such that U * m = [H; 0].
struct HermiteResult {
    IntMatrix h;
    IntMatrix u;
    std::size_t rank = 0;
};

inline HermiteResult hermite_normal_form(const IntMatrix& m) {
    const std::size_t rows = m.rows();
    const std::size_t cols = m.cols();
    IntMatrix a = m;
    IntMatrix u = IntMatrix::identity(rows);

    // (row_i, row_k) <- (p*row_i + q*row_k, r*row_i + s*row_k), ps - qr = 1
    auto combine = [&](std::size_t i, std::size_t k, const Int& p, const Int& q, const Int& r, const Int& s) {
        for (std::size_t j = 0; j < cols; ++j) {
            Int x = a(i, j), y = a(k, j);
            a(i, j) = p * x + q * y;
            a(k, j) = r * x + s * y;
        }
        for (std::size_t j = 0; j < rows; ++j) {
            Int x = u(i, j), y = u(k, j);
            u(i, j) = p * x + q * y;
            u(k, j) = r * x + s * y;
        }
    };
    auto negate = [&](std::size_t i) {
        for (std::size_t j = 0; j < cols; ++j) a(i, j) = -a(i, j);
        for (std::size_t j = 0; j < rows; ++j) u(i, j) = -u(i, j);
    };
    auto add_multiple = [&](std::size_t target, std::size_t source, const Int& f) {
        for (std::size_t j = 0; j < cols; ++j) a(target, j) += f * a(source, j);
        for (std::size_t j = 0; j < rows; ++j) u(target, j) += f * u(source, j);
    };

    std::size_t pivot_row = 0;
    std::vector<std::size_t> pivot_cols;
    for (std::size_t c = 0; c < cols && pivot_row < rows; ++c) {
        for (std::size_t k = pivot_row + 1; k < rows; ++k) {
            if (a(k, c) == 0) continue;
            const Int x = a(pivot_row, c);
            const Int y = a(k, c);
            const Bezout b = ext_gcd(x, y);
            combine(pivot_row, k, b.x, b.y, -y / b.g, x / b.g);
        }
        if (a(pivot_row, c) == 0) continue;
        if (a(pivot_row, c) < 0) negate(pivot_row);
        pivot_cols.push_back(c);
        ++pivot_row;
    }
    for (std::size_t i = 0; i < pivot_cols.size(); ++i) {
        const std::size_t c = pivot_cols[i];
        for (std::size_t k = 0; k < i; ++k) {
            const Int q = floor_div(a(k, c), a(i, c));
            if (q != 0) add_multiple(k, i, -q);
        }
    }
    HermiteResult out;
    out.rank = pivot_row;
    out.h = IntMatrix(out.rank, cols);
    for (std::size_t i = 0; i < out.rank; ++i)
        for (std::size_t j = 0; j < cols; ++j) out.h(i, j) = a(i, j);
    out.u = std::move(u);
    return out;
}

/// Hermite-reduced basis (as rows) of the lattice spanned by the given rows.
inline IntMatrix hermite_basis(const IntMatrix& rows) { return hermite_normal_form(rows).h; }

/// Basis of the integer kernel {x : m x = 0}, returned as the rows of a
/// Hermite-reduced matrix. The kernel comes from the last rows of the
/// unimodular transform of m^T, so it is saturated.
inline IntMatrix integer_kernel(const IntMatrix& m) {
    const std::size_t n = m.cols();
    const HermiteResult hr = hermite_normal_form(m.transpose());
    IntMatrix basis(n - hr.rank, n);
    for (std::size_t i = hr.rank; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) basis(i - hr.rank, j) = hr.u(i, j);
    if (basis.rows() == 0) return basis;
    return hermite_basis(basis);
}

inline std::size_t rank(const IntMatrix& m) { return hermite_normal_form(m).rank; }

/// gcd of the entries; 0 for the zero vector.
inline Int content(const IntVector& v) {
    Int g = 0;
    for (const auto& x : v) g = gcd(g, x);
    return g;
}

inline bool is_primitive(const IntVector& v) { return content(v) == 1; }

/// Saturation test for the row span of `basis` inside Z^n: the lattice is
/// saturated iff the gcd of the maximal minors is 1, i.e. the product of the
/// Smith invariants is 1.
inline bool is_saturated(const IntMatrix& basis) {
    const std::size_t k = basis.rows();
    const std::size_t n = basis.cols();
    if (k == 0) return true;
    Int g = 0;
    std::vector<std::size_t> pick(k);
    // iterate over k-subsets of columns
    std::vector<bool> mask(n, false);
    std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(k), true);
    do {
        std::size_t idx = 0;
        for (std::size_t j = 0; j < n; ++j)
            if (mask[j]) pick[idx++] = j;
        IntMatrix minor(k, k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) minor(i, j) = basis(i, pick[j]);
        g = gcd(g, determinant(minor));
    } while (std::prev_permutation(mask.begin(), mask.end()));
    return g == 1;
}

/// Solves x * a = b for a row vector x, given that b lies in the row span of a
/// (a with independent rows). Returns nullopt when b is outside the rational
/// span or the coefficients are not integral.
inline std::optional<IntVector> row_coordinates(const IntMatrix& a, const IntVector& b) {
    const std::size_t k = a.rows();
    const std::size_t n = a.cols();
    // Augment and row-reduce the transposed system a^T x^T = b^T over Q.
    RatMatrix sys(n, k + 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) sys(i, j) = a(j, i);
        sys(i, k) = b.at(i);
    }
    std::size_t r = 0;
    std::vector<std::size_t> pivots;
    for (std::size_t c = 0; c < k && r < n; ++c) {
        std::size_t p = r;
        while (p < n && sys(p, c) == 0) ++p;
        if (p == n) continue;
        for (std::size_t j = 0; j <= k; ++j) std::swap(sys(p, j), sys(r, j));
        Rat piv = sys(r, c);
        for (std::size_t j = 0; j <= k; ++j) sys(r, j) /= piv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == r || sys(i, c) == 0) continue;
            Rat f = sys(i, c);
            for (std::size_t j = 0; j <= k; ++j) sys(i, j) -= f * sys(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    if (pivots.size() != k) throw Error(ErrorCode::RankMismatch, "row_coordinates needs independent rows");
    for (std::size_t i = r; i < n; ++i)
        if (sys(i, k) != 0) return std::nullopt;
    IntVector x(k);
    for (std::size_t i = 0; i < k; ++i) {
        if (!is_integer(sys(i, k))) return std::nullopt;
        x[pivots[i]] = sys(i, k).get_num();
    }
    return x;
}

}  // namespace mukai
