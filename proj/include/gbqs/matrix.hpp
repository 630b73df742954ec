/**
 * Copyright 2026 The gbqs Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "gbqs/error.hpp"
#include "gbqs/field.hpp"

namespace gbqs {

/// Dense row-major matrix over Fp.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<Fp> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows_ * cols_)
            throw InvalidArgument("matrix data length does not match its shape");
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = Fp::one();
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Fp &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    Fp operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<Fp> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const Fp> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    const std::vector<Fp> &data() const { return data_; }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b)
            return;
        std::swap_ranges(data_.begin() + a * cols_, data_.begin() + (a + 1) * cols_,
                         data_.begin() + b * cols_);
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c)
                t(c, r) = (*this)(r, c);
        return t;
    }

    friend Matrix operator*(const Matrix &a, const Matrix &b) {
        if (a.cols_ != b.rows_)
            throw InvalidArgument("matrix product shape mismatch");
        Matrix out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Fp f = a(i, k);
                if (f.is_zero())
                    continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    out(i, j) += f * b(k, j);
            }
        return out;
    }

    friend bool operator==(const Matrix &, const Matrix &) = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Fp> data_;
};

/// Row vector times matrix.
inline std::vector<Fp> multiply(std::span<const Fp> v, const Matrix &m) {
    if (v.size() != m.rows())
        throw InvalidArgument("vector/matrix shape mismatch");
    std::vector<Fp> out(m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (v[i].is_zero())
            continue;
        for (std::size_t j = 0; j < m.cols(); ++j)
            out[j] += v[i] * m(i, j);
    }
    return out;
}

/// Matrix times column vector.
inline std::vector<Fp> multiply(const Matrix &m, std::span<const Fp> v) {
    if (v.size() != m.cols())
        throw InvalidArgument("matrix/vector shape mismatch");
    std::vector<Fp> out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            out[i] += m(i, j) * v[j];
    return out;
}

struct EchelonResult {
    Matrix echelon;
    bool consistent = true;
    /// Coefficient columns carrying a pivot, in row order.
    std::vector<std::size_t> pivot_cols;
    /// Coefficient columns without a pivot.
    std::vector<std::size_t> free_cols;
};

/// Gaussian elimination on an augmented matrix `[coefficients | constant]`.
///
/// The last column is the constant part. Pivots are chosen as the first
/// nonzero entry scanning top-down, and pivot rows are normalized to 1.
/// The system is inconsistent iff some row ends up zero in the coefficient
/// part but nonzero in the constant.
inline EchelonResult row_echelon(Matrix aug) {
    if (aug.cols() == 0)
        throw InvalidArgument("augmented matrix needs a constant column");
    EchelonResult res;
    const std::size_t coeff_cols = aug.cols() - 1;
    std::size_t r = 0;
    for (std::size_t c = 0; c < coeff_cols && r < aug.rows(); ++c) {
        std::size_t p = r;
        while (p < aug.rows() && aug(p, c).is_zero())
            ++p;
        if (p == aug.rows()) {
            res.free_cols.push_back(c);
            continue;
        }
        aug.swap_rows(p, r);
        const Fp inv = aug(r, c).inverse();
        for (std::size_t j = c; j < aug.cols(); ++j)
            aug(r, j) *= inv;
        for (std::size_t i = r + 1; i < aug.rows(); ++i) {
            const Fp f = aug(i, c);
            if (f.is_zero())
                continue;
            for (std::size_t j = c; j < aug.cols(); ++j)
                aug(i, j) -= f * aug(r, j);
        }
        res.pivot_cols.push_back(c);
        ++r;
    }
    for (std::size_t c = res.pivot_cols.empty() ? 0 : res.pivot_cols.back() + 1; c < coeff_cols; ++c)
        if (std::find(res.free_cols.begin(), res.free_cols.end(), c) == res.free_cols.end())
            res.free_cols.push_back(c);
    std::sort(res.free_cols.begin(), res.free_cols.end());
    for (std::size_t i = r; i < aug.rows(); ++i)
        if (!aug(i, coeff_cols).is_zero()) {
            res.consistent = false;
            break;
        }
    res.echelon = std::move(aug);
    return res;
}

/// Back-substitution on a consistent echelon form; free variables are set to zero.
inline std::vector<Fp> back_substitute(const EchelonResult &e) {
    const Matrix &m = e.echelon;
    const std::size_t n = m.cols() - 1;
    std::vector<Fp> x(n);
    for (std::size_t k = e.pivot_cols.size(); k-- > 0;) {
        const std::size_t c = e.pivot_cols[k];
        Fp v = m(k, n);
        for (std::size_t j = c + 1; j < n; ++j)
            v -= m(k, j) * x[j];
        x[c] = v; // pivot normalized to one
    }
    return x;
}

inline std::size_t rank(const Matrix &m) {
    Matrix aug(m.rows(), m.cols() + 1);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            aug(i, j) = m(i, j);
    return row_echelon(std::move(aug)).pivot_cols.size();
}

enum class LupMode {
    /// Row-echelon LU: skips columns without a pivot, never fails.
    echelon,
    /// Classic LUP: every diagonal position up to min(rows, cols) needs a pivot.
    strict,
};

/// P·A = L·U with P a row permutation, L unit lower triangular and U in row
/// echelon form; `y` solves L·y = P·e for the right-hand side given at
/// factorization time.
struct LupFactors {
    /// perm[i] is the row of A that lands in row i of P·A.
    std::vector<std::size_t> perm;
    Matrix lower;
    Matrix upper;
    std::vector<Fp> y;
    std::size_t rank = 0;

    Matrix permutation_matrix() const {
        Matrix p(perm.size(), perm.size());
        for (std::size_t i = 0; i < perm.size(); ++i)
            p(i, perm[i]) = Fp::one();
        return p;
    }
};

/// Factors `a` (d×m) and solves L·y = P·e.
///
/// Throws Unfactorable in strict mode when a diagonal pivot is missing.
inline LupFactors lup_factor(const Matrix &a, std::span<const Fp> e, LupMode mode = LupMode::echelon) {
    const std::size_t d = a.rows();
    const std::size_t m = a.cols();
    if (e.size() != d)
        throw InvalidArgument("right-hand side length must equal the row count");
    LupFactors f;
    f.perm.resize(d);
    for (std::size_t i = 0; i < d; ++i)
        f.perm[i] = i;
    f.lower = Matrix::identity(d);
    f.upper = a;
    Matrix &u = f.upper;
    Matrix &l = f.lower;

    std::size_t r = 0;
    for (std::size_t c = 0; c < m && r < d; ++c) {
        std::size_t p = r;
        while (p < d && u(p, c).is_zero())
            ++p;
        if (p == d) {
            if (mode == LupMode::strict)
                throw Unfactorable("no pivot available in column " + std::to_string(c));
            continue;
        }
        if (p != r) {
            u.swap_rows(p, r);
            std::swap(f.perm[p], f.perm[r]);
            for (std::size_t j = 0; j < r; ++j)
                std::swap(l(p, j), l(r, j));
        }
        const Fp inv = u(r, c).inverse();
        for (std::size_t i = r + 1; i < d; ++i) {
            const Fp factor = u(i, c) * inv;
            if (factor.is_zero())
                continue;
            l(i, r) = factor;
            for (std::size_t j = c; j < m; ++j)
                u(i, j) -= factor * u(r, j);
        }
        ++r;
    }
    f.rank = r;

    f.y.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
        Fp v = e[f.perm[i]];
        for (std::size_t j = 0; j < i; ++j)
            v -= l(i, j) * f.y[j];
        f.y[i] = v;
    }
    return f;
}

} // namespace gbqs
