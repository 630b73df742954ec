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
#include <memory>
#include <string>

#include "gbqs/error.hpp"
#include "gbqs/formula.hpp"
#include "gbqs/msp.hpp"
#include "gbqs/party.hpp"

namespace gbqs {

/// Decides whether a set of replicas contains a quorum.
class QuorumChecker {
  public:
    virtual ~QuorumChecker() = default;
    virtual bool is_quorum(const PartySet &s) const = 0;
    virtual std::size_t universe_size() const = 0;
    virtual std::string encoding() const = 0;
    /// Bytes held to answer queries.
    virtual std::size_t memory_bytes() const = 0;

    /// `b` fits inside a fail-prone set of the canonical system: the rest
    /// still contains a quorum.
    bool tolerates(const PartySet &b) const { return is_quorum(PartySet::full(universe_size()) - b); }
};

/// Any n - f replicas form a quorum.
class CountingChecker final : public QuorumChecker {
  public:
    CountingChecker(std::size_t n, std::size_t f) : n_(n), f_(f) {
        if (n == 0 || 3 * f >= n)
            throw InvalidArgument("counting quorums need n > 3f, got n=" + std::to_string(n) +
                                  ", f=" + std::to_string(f));
    }
    bool is_quorum(const PartySet &s) const override { return (s & PartySet::full(n_)).size() >= n_ - f_; }
    std::size_t universe_size() const override { return n_; }
    std::string encoding() const override { return "counting"; }
    std::size_t memory_bytes() const override { return sizeof(*this); }
    std::size_t faults() const { return f_; }

  private:
    std::size_t n_, f_;
};

class MbfChecker final : public QuorumChecker {
  public:
    MbfChecker(const Formula &f, std::size_t n) : flat_(f), n_(n) {}
    bool is_quorum(const PartySet &s) const override { return flat_.eval(s); }
    std::size_t universe_size() const override { return n_; }
    std::string encoding() const override { return "mbf"; }
    std::size_t memory_bytes() const override { return flat_.memory_bytes(); }

  private:
    FlatFormula flat_;
    std::size_t n_;
};

class MspChecker final : public QuorumChecker {
  public:
    MspChecker(Msp msp, std::size_t n) : msp_(std::move(msp)), n_(n) {}
    bool is_quorum(const PartySet &s) const override { return accepts(msp_, s).accepted; }
    std::size_t universe_size() const override { return n_; }
    std::string encoding() const override { return "msp"; }
    std::size_t memory_bytes() const override { return sizeof(*this) + msp_.memory_bytes(); }

  private:
    Msp msp_;
    std::size_t n_;
};

/// MSP with a stored LUP factorization; uses plain elimination when the
/// factorization is unavailable.
class MspLupChecker final : public QuorumChecker {
  public:
    MspLupChecker(Msp msp, std::size_t n, LupMode mode = LupMode::echelon) : lup_(std::move(msp), mode), n_(n) {}
    bool is_quorum(const PartySet &s) const override {
        return lup_.factored() ? lup_.accepts(s).accepted : accepts(lup_.msp(), s).accepted;
    }
    std::size_t universe_size() const override { return n_; }
    std::string encoding() const override { return "msp-lup"; }
    std::size_t memory_bytes() const override { return sizeof(*this) + lup_.memory_bytes(); }
    bool factored() const { return lup_.factored(); }

  private:
    LupChecker lup_;
    std::size_t n_;
};

enum class Encoding { mbf, msp, msp_lup, counting };

inline Encoding parse_encoding(const std::string &s) {
    if (s == "mbf")
        return Encoding::mbf;
    if (s == "msp")
        return Encoding::msp;
    if (s == "msp-lup")
        return Encoding::msp_lup;
    if (s == "counting")
        return Encoding::counting;
    throw InvalidArgument("unknown encoding '" + s + "'");
}

inline std::string to_string(Encoding e) {
    switch (e) {
    case Encoding::mbf:
        return "mbf";
    case Encoding::msp:
        return "msp";
    case Encoding::msp_lup:
        return "msp-lup";
    case Encoding::counting:
        return "counting";
    }
    return {};
}

/// Checker for a formula over `n` parties. Counting needs explicit n and f
/// and is built directly.
inline std::shared_ptr<const QuorumChecker> make_checker(Encoding e, const Formula &f, std::size_t n) {
    switch (e) {
    case Encoding::mbf:
        return std::make_shared<MbfChecker>(f, n);
    case Encoding::msp:
        return std::make_shared<MspChecker>(build_msp(f), n);
    case Encoding::msp_lup:
        return std::make_shared<MspLupChecker>(build_msp(f), n);
    case Encoding::counting:
        break;
    }
    throw InvalidArgument("counting checker is built from (n, f), not a formula");
}

} // namespace gbqs
