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

#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "gbqs/matrix.hpp"

namespace gbqs {
namespace {

Matrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64 &rng, int zero_pct = 0) {
    std::uniform_int_distribution<std::uint64_t> d(1, Fp::modulus - 1);
    std::uniform_int_distribution<int> pct(0, 99);
    Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            m(i, j) = pct(rng) < zero_pct ? Fp{} : Fp{d(rng)};
    return m;
}

Matrix augment(const Matrix &a, const std::vector<Fp> &b) {
    Matrix aug(a.rows(), a.cols() + 1);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j)
            aug(i, j) = a(i, j);
        aug(i, a.cols()) = b[i];
    }
    return aug;
}

TEST(MatrixTest, IdentityAugmentedIsAlreadyEchelon) {
    std::vector<Fp> e1(3);
    e1[0] = Fp::one();
    const auto r = row_echelon(augment(Matrix::identity(3), e1));
    EXPECT_TRUE(r.consistent);
    EXPECT_TRUE(r.free_cols.empty());
    EXPECT_EQ(back_substitute(r), e1);
}

TEST(MatrixTest, ZeroRowWithOneIsInconsistent) {
    Matrix aug(1, 2);
    aug(0, 1) = Fp::one();
    EXPECT_FALSE(row_echelon(aug).consistent);
}

TEST(MatrixTest, RecoversPlantedSolution) {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 50; ++t) {
        const Matrix a = random_matrix(3, 3, rng);
        if (rank(a) < 3)
            continue;
        std::vector<Fp> x = random_matrix(1, 3, rng).data();
        const auto b = multiply(a, std::span<const Fp>(x));
        const auto r = row_echelon(augment(a, b));
        ASSERT_TRUE(r.consistent);
        EXPECT_EQ(back_substitute(r), x);
    }
}

TEST(MatrixTest, UnderdeterminedSolutionSatisfiesSystem) {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 50; ++t) {
        const Matrix a = random_matrix(4, 7, rng, 40);
        std::vector<Fp> x = random_matrix(1, 7, rng).data();
        const auto b = multiply(a, std::span<const Fp>(x));
        const auto r = row_echelon(augment(a, b));
        ASSERT_TRUE(r.consistent);
        const auto y = back_substitute(r);
        EXPECT_EQ(multiply(a, std::span<const Fp>(y)), b);
        EXPECT_EQ(r.pivot_cols.size() + r.free_cols.size(), 7u);
    }
}

void expect_factors_rebuild(const Matrix &a, const std::vector<Fp> &e, LupMode mode) {
    const auto f = lup_factor(a, e, mode);
    EXPECT_EQ(f.permutation_matrix() * a, f.lower * f.upper);
    // L·y = P·e
    std::vector<Fp> pe(e.size());
    for (std::size_t i = 0; i < e.size(); ++i)
        pe[i] = e[f.perm[i]];
    EXPECT_EQ(multiply(f.lower, std::span<const Fp>(f.y)), pe);
    EXPECT_EQ(f.rank, rank(a));
    for (std::size_t i = 0; i < a.rows(); ++i) {
        EXPECT_EQ(f.lower(i, i), Fp::one());
        for (std::size_t j = i + 1; j < a.rows(); ++j)
            EXPECT_TRUE(f.lower(i, j).is_zero());
    }
}

TEST(MatrixTest, LupOfIdentity) {
    std::vector<Fp> e1(3);
    e1[0] = Fp::one();
    const auto f = lup_factor(Matrix::identity(3), e1);
    EXPECT_EQ(f.lower, Matrix::identity(3));
    EXPECT_EQ(f.upper, Matrix::identity(3));
    EXPECT_EQ(f.permutation_matrix(), Matrix::identity(3));
    EXPECT_EQ(f.y, e1);
}

TEST(MatrixTest, LupOfVandermondeTranspose) {
    // Rows (1, i) for i = 1..3, transposed to 2×3.
    Matrix v(3, 2);
    for (std::size_t i = 0; i < 3; ++i) {
        v(i, 0) = Fp::one();
        v(i, 1) = Fp{i + 1};
    }
    std::vector<Fp> e1{Fp::one(), Fp{}};
    expect_factors_rebuild(v.transpose(), e1, LupMode::echelon);
    expect_factors_rebuild(v.transpose(), e1, LupMode::strict);
}

TEST(MatrixTest, LupRebuildsRandomSparseMatrices) {
    std::mt19937_64 rng(9);
    for (int t = 0; t < 200; ++t) {
        const std::size_t r = 1 + rng() % 6, c = 1 + rng() % 8;
        const Matrix a = random_matrix(r, c, rng, 60);
        std::vector<Fp> e(r);
        e[0] = Fp::one();
        expect_factors_rebuild(a, e, LupMode::echelon);
    }
}

TEST(MatrixTest, StrictLupRejectsMissingPivot) {
    Matrix a(2, 2);
    a(0, 1) = Fp::one();
    a(1, 1) = Fp{2};
    std::vector<Fp> e{Fp::one(), Fp{}};
    EXPECT_THROW(lup_factor(a, e, LupMode::strict), Unfactorable);
    EXPECT_NO_THROW(lup_factor(a, e, LupMode::echelon));
}

} // namespace
} // namespace gbqs
