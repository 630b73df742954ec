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

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gbqs/error.hpp"
#include "gbqs/field.hpp"
#include "gbqs/formula.hpp"
#include "gbqs/matrix.hpp"
#include "gbqs/party.hpp"

namespace gbqs {

/// Monotone span program: a matrix whose rows are labeled by parties. A set
/// is accepted when the rows it owns span the target vector (1, 0, ..., 0).
struct Msp {
    Matrix matrix;
    std::vector<PartyId> labels;

    std::size_t rows() const { return matrix.rows(); }
    std::size_t cols() const { return matrix.cols(); }

    std::vector<std::size_t> rows_of(PartyId p) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == p)
                out.push_back(i);
        return out;
    }

    /// Parties owning at least one row.
    PartySet parties() const {
        PartySet s;
        for (PartyId p : labels)
            s.insert(p);
        return s;
    }

    std::vector<Fp> target() const {
        std::vector<Fp> e(cols());
        if (!e.empty())
            e[0] = Fp::one();
        return e;
    }

    /// Matrix entries at 4 bytes each plus one label per row.
    std::size_t memory_bytes() const { return rows() * cols() * sizeof(Fp) + labels.size() * sizeof(PartyId); }

    friend bool operator==(const Msp &, const Msp &) = default;
};

/// Outcome of an acceptance check.
struct AcceptanceWitness {
    bool accepted = false;
    /// Rows of the MSP owned by the tested set, in increasing order.
    std::vector<std::size_t> rows;
    /// Recombination coefficients, aligned with `rows`.
    std::vector<Fp> lambda;
    /// Parties whose rows all correspond to free variables.
    PartySet redundant;
};

/// n×t Vandermonde MSP with evaluation points 1..n; row i belongs to parties[i].
inline Msp vandermonde_msp(const std::vector<PartyId> &parties, std::size_t t) {
    const std::size_t n = parties.size();
    if (n == 0 || t < 1 || t > n)
        throw InvalidArgument("vandermonde MSP needs 1 <= t <= n, got t=" + std::to_string(t) +
                              ", n=" + std::to_string(n));
    if (n >= Fp::modulus)
        throw InvalidArgument("too many parties for the field");
    Msp msp{Matrix(n, t), parties};
    for (std::size_t i = 0; i < n; ++i) {
        const Fp x(i + 1);
        Fp v = Fp::one();
        for (std::size_t j = 0; j < t; ++j) {
            msp.matrix(i, j) = v;
            v *= x;
        }
    }
    return msp;
}

/// Replaces row `z` of `m1` by the whole of `m2`.
///
/// The new block is r_z scaled by the first column of m2, followed by the
/// remaining columns of m2. Rows outside the block are padded with zeros.
inline Msp insert(const Msp &m1, std::size_t z, const Msp &m2) {
    if (z >= m1.rows())
        throw InvalidArgument("insertion row out of range");
    if (m1.rows_of(m1.labels[z]).size() != 1)
        throw InvalidArgument("insertion row is not the only row of its owner");
    const std::size_t r1 = m1.rows(), d1 = m1.cols();
    const std::size_t r2 = m2.rows(), d2 = m2.cols();
    Msp out{Matrix(r1 + r2 - 1, d1 + d2 - 1), {}};
    out.labels.reserve(r1 + r2 - 1);
    std::size_t at = 0;
    for (std::size_t i = 0; i < r1; ++i) {
        if (i != z) {
            for (std::size_t j = 0; j < d1; ++j)
                out.matrix(at, j) = m1.matrix(i, j);
            out.labels.push_back(m1.labels[i]);
            ++at;
            continue;
        }
        for (std::size_t b = 0; b < r2; ++b) {
            const Fp head = m2.matrix(b, 0);
            for (std::size_t j = 0; j < d1; ++j)
                out.matrix(at, j) = m1.matrix(z, j) * head;
            for (std::size_t j = 1; j < d2; ++j)
                out.matrix(at, d1 + j - 1) = m2.matrix(b, j);
            out.labels.push_back(m2.labels[b]);
            ++at;
        }
    }
    return out;
}

namespace detail {

inline Msp build_msp_node(const Formula &f, PartyId &next_virtual) {
    if (f.is_literal())
        return Msp{Matrix::identity(1), {f.party()}};
    const auto &ch = f.children();
    std::vector<PartyId> virt;
    virt.reserve(ch.size());
    for (std::size_t i = 0; i < ch.size(); ++i)
        virt.push_back(next_virtual++);
    Msp msp = vandermonde_msp(virt, f.k());
    for (std::size_t i = 0; i < ch.size(); ++i) {
        Msp sub = build_msp_node(ch[i], next_virtual);
        // Earlier insertions shift rows, so look the virtual party up again.
        const auto where = msp.rows_of(virt[i]);
        msp = insert(msp, where.front(), sub);
    }
    return msp;
}

} // namespace detail

/// Builds an MSP accepting exactly the sets that satisfy `f`.
///
/// Every operator becomes a Vandermonde MSP over fresh virtual parties, and
/// each operand is inserted into its virtual party's row, left to right.
inline Msp build_msp(const Formula &f) {
    const Formula t = f.desugared();
    // Virtual ids start above every real party and are all replaced by the end.
    PartyId next = static_cast<PartyId>(std::max<std::size_t>(t.party_bound(), 1) + (std::size_t{1} << 30));
    return detail::build_msp_node(t, next);
}

/// Rows and columns build_msp will produce: the operator shapes summed, minus
/// one per insertion of an operator into another.
inline std::pair<std::size_t, std::size_t> predicted_dims(const Formula &f) {
    if (f.is_literal())
        return {1, 1};
    std::size_t m = 0, d = 0, c = 0;
    std::vector<const Formula *> stack{&f};
    while (!stack.empty()) {
        const Formula *n = stack.back();
        stack.pop_back();
        if (n->is_literal())
            continue;
        m += n->children().size();
        d += n->k();
        ++c;
        for (const auto &ch : n->children())
            stack.push_back(&ch);
    }
    return {m - c + 1, d - c + 1};
}

namespace detail {

inline std::vector<std::size_t> owned_rows(const Msp &msp, const PartySet &a) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < msp.labels.size(); ++i)
        if (a.contains(msp.labels[i]))
            rows.push_back(i);
    return rows;
}

/// Solves `coeff · x = rhs` where column i of `coeff` is row `rows[i]` of the
/// MSP, filling the witness.
inline AcceptanceWitness solve_witness(const Msp &msp, std::vector<std::size_t> rows, const Matrix &aug) {
    AcceptanceWitness w;
    w.rows = std::move(rows);
    const EchelonResult e = row_echelon(aug);
    if (!e.consistent)
        return w;
    w.accepted = true;
    w.lambda = back_substitute(e);

    PartySet touched, pivotal;
    std::vector<bool> is_free(w.rows.size(), false);
    for (auto c : e.free_cols)
        is_free[c] = true;
    for (std::size_t i = 0; i < w.rows.size(); ++i) {
        const PartyId p = msp.labels[w.rows[i]];
        touched.insert(p);
        if (!is_free[i])
            pivotal.insert(p);
    }
    w.redundant = touched - pivotal;
    return w;
}

} // namespace detail

/// Gaussian elimination on M_Aᵀ | e₁.
inline AcceptanceWitness accepts(const Msp &msp, const PartySet &a) {
    auto rows = detail::owned_rows(msp, a);
    const std::size_t d = msp.cols();
    Matrix aug(d, rows.size() + 1);
    for (std::size_t c = 0; c < rows.size(); ++c)
        for (std::size_t r = 0; r < d; ++r)
            aug(r, c) = msp.matrix(rows[c], r);
    if (d > 0)
        aug(0, rows.size()) = Fp::one();
    return detail::solve_witness(msp, std::move(rows), aug);
}

/// An MSP with Mᵀ factored once, so each check only solves U_A·x = y.
class LupChecker {
  public:
    explicit LupChecker(Msp msp, LupMode mode = LupMode::echelon) : msp_(std::move(msp)) {
        try {
            factors_ = lup_factor(msp_.matrix.transpose(), msp_.target(), mode);
        } catch (const Unfactorable &) {
            factors_.reset();
        }
    }

    bool factored() const { return factors_.has_value(); }
    const Msp &msp() const { return msp_; }
    const LupFactors &factors() const {
        if (!factors_)
            throw Unfactorable("MSP has no LUP factorization; use plain elimination");
        return *factors_;
    }

    AcceptanceWitness accepts(const PartySet &a) const {
        const LupFactors &f = factors();
        auto rows = detail::owned_rows(msp_, a);
        const std::size_t d = msp_.cols();
        Matrix aug(d, rows.size() + 1);
        for (std::size_t c = 0; c < rows.size(); ++c)
            for (std::size_t r = 0; r < d; ++r)
                aug(r, c) = f.upper(r, rows[c]);
        for (std::size_t r = 0; r < d; ++r)
            aug(r, rows.size()) = f.y[r];
        return detail::solve_witness(msp_, std::move(rows), aug);
    }

    /// Bytes for the MSP plus the stored L, U and y.
    std::size_t memory_bytes() const {
        std::size_t b = msp_.memory_bytes();
        if (factors_)
            b += (factors_->lower.data().size() + factors_->upper.data().size() + factors_->y.size()) * sizeof(Fp) +
                 factors_->perm.size() * sizeof(std::uint32_t);
        return b;
    }

  private:
    Msp msp_;
    std::optional<LupFactors> factors_;
};

inline AcceptanceWitness accepts_lup(const LupChecker &checker, const PartySet &a) { return checker.accepts(a); }

/// λ·M_A == e₁ by direct multiplication.
inline bool witness_valid(const Msp &msp, const AcceptanceWitness &w) {
    if (!w.accepted || w.lambda.size() != w.rows.size())
        return false;
    std::vector<Fp> sum(msp.cols());
    for (std::size_t i = 0; i < w.rows.size(); ++i)
        for (std::size_t j = 0; j < msp.cols(); ++j)
            sum[j] += w.lambda[i] * msp.matrix(w.rows[i], j);
    return sum == msp.target();
}

/// Text dump: "m d p", m rows of residues, then m labels.
inline void write_dump(std::ostream &os, const Msp &msp, const Universe *u = nullptr) {
    os << msp.rows() << ' ' << msp.cols() << ' ' << Fp::modulus << '\n';
    for (std::size_t i = 0; i < msp.rows(); ++i) {
        for (std::size_t j = 0; j < msp.cols(); ++j)
            os << (j ? " " : "") << msp.matrix(i, j).value();
        os << '\n';
    }
    for (PartyId p : msp.labels)
        os << (u && p < u->size() ? u->name(p) : std::to_string(p)) << '\n';
}

inline std::string dump(const Msp &msp, const Universe *u = nullptr) {
    std::ostringstream os;
    write_dump(os, msp, u);
    return os.str();
}

/// Reads a dump; labels are interned into `u`.
inline Msp read_dump(std::istream &is, Universe &u) {
    std::size_t m = 0, d = 0;
    std::uint64_t p = 0;
    if (!(is >> m >> d >> p))
        throw InvalidArgument("MSP dump: missing header");
    if (p != Fp::modulus)
        throw InvalidArgument("MSP dump: field modulus " + std::to_string(p) + " is not supported");
    Msp msp{Matrix(m, d), {}};
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            std::uint64_t v = 0;
            if (!(is >> v) || v >= Fp::modulus)
                throw InvalidArgument("MSP dump: bad entry at row " + std::to_string(i + 1));
            msp.matrix(i, j) = Fp(v);
        }
    for (std::size_t i = 0; i < m; ++i) {
        std::string name;
        if (!(is >> name))
            throw InvalidArgument("MSP dump: missing label for row " + std::to_string(i + 1));
        msp.labels.push_back(u.intern(name));
    }
    return msp;
}

} // namespace gbqs
