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

#include <cstdint>
#include <ostream>

#include "gbqs/error.hpp"

namespace gbqs {

/// Element of the prime field Z_p with p = 2^31 - 1.
///
/// The modulus is fixed for the whole library. It is a Mersenne prime, so
/// reduction after a 62-bit product is two shifts and an add.
class Fp {
  public:
    static constexpr std::uint32_t modulus = 0x7fffffffu;

    constexpr Fp() = default;

    /// Reduces `v` into [0, p).
    constexpr explicit Fp(std::uint64_t v) : value_(reduce(v)) {}

    static constexpr Fp zero() { return Fp{}; }
    static constexpr Fp one() { return Fp{1}; }

    /// Maps a signed integer to its residue.
    static constexpr Fp from_signed(std::int64_t v) {
        const std::int64_t m = static_cast<std::int64_t>(modulus);
        std::int64_t r = v % m;
        if (r < 0)
            r += m;
        return Fp{static_cast<std::uint64_t>(r)};
    }

    constexpr std::uint32_t value() const { return value_; }
    constexpr bool is_zero() const { return value_ == 0; }

    friend constexpr Fp operator+(Fp a, Fp b) {
        std::uint32_t s = a.value_ + b.value_;
        if (s >= modulus)
            s -= modulus;
        return raw(s);
    }
    friend constexpr Fp operator-(Fp a, Fp b) {
        return raw(a.value_ >= b.value_ ? a.value_ - b.value_ : a.value_ + modulus - b.value_);
    }
    friend constexpr Fp operator-(Fp a) { return a.value_ == 0 ? a : raw(modulus - a.value_); }
    friend constexpr Fp operator*(Fp a, Fp b) {
        return raw(reduce(static_cast<std::uint64_t>(a.value_) * b.value_));
    }
    friend constexpr Fp operator/(Fp a, Fp b) { return a * b.inverse(); }

    constexpr Fp &operator+=(Fp o) { return *this = *this + o; }
    constexpr Fp &operator-=(Fp o) { return *this = *this - o; }
    constexpr Fp &operator*=(Fp o) { return *this = *this * o; }
    constexpr Fp &operator/=(Fp o) { return *this = *this / o; }

    friend constexpr bool operator==(Fp a, Fp b) = default;

    constexpr Fp pow(std::uint64_t e) const {
        Fp base = *this;
        Fp acc = one();
        while (e != 0) {
            if (e & 1u)
                acc *= base;
            base *= base;
            e >>= 1;
        }
        return acc;
    }

    /// Multiplicative inverse via the extended Euclidean algorithm.
    constexpr Fp inverse() const {
        if (value_ == 0)
            throw DivisionByZero();
        std::int64_t t = 0, new_t = 1;
        std::int64_t r = modulus, new_r = value_;
        while (new_r != 0) {
            const std::int64_t q = r / new_r;
            const std::int64_t tt = t - q * new_t;
            t = new_t;
            new_t = tt;
            const std::int64_t rr = r - q * new_r;
            r = new_r;
            new_r = rr;
        }
        return from_signed(t);
    }

    friend std::ostream &operator<<(std::ostream &os, Fp a) { return os << a.value_; }

  private:
    static constexpr Fp raw(std::uint32_t v) {
        Fp f;
        f.value_ = v;
        return f;
    }

    static constexpr std::uint32_t reduce(std::uint64_t v) {
        v = (v & modulus) + (v >> 31);
        v = (v & modulus) + (v >> 31);
        return v >= modulus ? static_cast<std::uint32_t>(v - modulus) : static_cast<std::uint32_t>(v);
    }

    std::uint32_t value_ = 0;
};

enum class FieldOp { add, sub, mul, inv, div };

/// Dispatching form used by tools and tests; `b` is ignored for `inv`.
constexpr Fp field_arith(Fp a, Fp b, FieldOp op) {
    switch (op) {
    case FieldOp::add:
        return a + b;
    case FieldOp::sub:
        return a - b;
    case FieldOp::mul:
        return a * b;
    case FieldOp::inv:
        return a.inverse();
    case FieldOp::div:
        return a / b;
    }
    return Fp{};
}

} // namespace gbqs
