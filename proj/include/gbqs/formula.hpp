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
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gbqs/error.hpp"
#include "gbqs/party.hpp"

namespace gbqs {

/// Anything that answers `contains(PartyId)`.
template <class S>
concept MembershipSet = requires(const S &s, PartyId p) {
    { s.contains(p) } -> std::convertible_to<bool>;
};

/// Party set packed into one machine word; used by exhaustive enumeration.
struct MaskSet {
    std::uint64_t bits = 0;
    bool contains(PartyId p) const { return p < 64 && ((bits >> p) & 1u); }
};

/// Monotone Boolean formula over party literals.
///
/// Operators are threshold(k of m), conjunction (m of m) and disjunction
/// (1 of m). Children keep their original order.
class Formula {
  public:
    enum class Kind : std::uint8_t { literal, threshold, conjunction, disjunction };

    static Formula literal(PartyId p) {
        Formula f;
        f.kind_ = Kind::literal;
        f.party_ = p;
        return f;
    }

    static Formula threshold(std::size_t k, std::vector<Formula> children) {
        if (children.empty())
            throw InvalidArgument("threshold operator needs at least one operand");
        if (k < 1 || k > children.size())
            throw InvalidArgument("threshold " + std::to_string(k) + " out of range for " +
                                  std::to_string(children.size()) + " operands");
        Formula f;
        f.kind_ = Kind::threshold;
        f.k_ = k;
        f.children_ = std::move(children);
        return f;
    }

    static Formula conjunction(std::vector<Formula> children) {
        if (children.empty())
            throw InvalidArgument("and operator needs at least one operand");
        Formula f;
        f.kind_ = Kind::conjunction;
        f.k_ = children.size();
        f.children_ = std::move(children);
        return f;
    }

    static Formula disjunction(std::vector<Formula> children) {
        if (children.empty())
            throw InvalidArgument("or operator needs at least one operand");
        Formula f;
        f.kind_ = Kind::disjunction;
        f.k_ = 1;
        f.children_ = std::move(children);
        return f;
    }

    /// Threshold over plain literals.
    static Formula threshold_of(std::size_t k, const std::vector<PartyId> &parties) {
        std::vector<Formula> ch;
        ch.reserve(parties.size());
        for (PartyId p : parties)
            ch.push_back(literal(p));
        return threshold(k, std::move(ch));
    }

    Kind kind() const { return kind_; }
    bool is_literal() const { return kind_ == Kind::literal; }
    PartyId party() const { return party_; }
    /// Number of operands that must hold (m for and, 1 for or).
    std::size_t k() const { return k_; }
    const std::vector<Formula> &children() const { return children_; }

    /// Recursive evaluation: a literal holds iff the party is in `set`; an
    /// operator holds iff at least k of its operands hold.
    template <MembershipSet S>
    bool eval(const S &set) const {
        if (kind_ == Kind::literal)
            return set.contains(party_);
        std::size_t hits = 0;
        std::size_t left = children_.size();
        for (const auto &c : children_) {
            --left;
            if (c.eval(set)) {
                if (++hits >= k_)
                    return true;
            } else if (hits + left < k_) {
                return false;
            }
        }
        return false;
    }

    /// Rewrites and/or into their threshold forms.
    Formula desugared() const {
        if (kind_ == Kind::literal)
            return *this;
        std::vector<Formula> ch;
        ch.reserve(children_.size());
        for (const auto &c : children_)
            ch.push_back(c.desugared());
        return threshold(k_, std::move(ch));
    }

    /// Parties named by some literal.
    PartySet parties() const {
        PartySet s;
        collect(s);
        return s;
    }

    /// Largest party id + 1 (0 for no literals).
    std::size_t party_bound() const {
        if (kind_ == Kind::literal)
            return party_ + 1;
        std::size_t b = 0;
        for (const auto &c : children_)
            b = std::max(b, c.party_bound());
        return b;
    }

    std::size_t node_count() const {
        std::size_t n = 1;
        for (const auto &c : children_)
            n += c.node_count();
        return n;
    }

    std::size_t operator_count() const {
        if (kind_ == Kind::literal)
            return 0;
        std::size_t n = 1;
        for (const auto &c : children_)
            n += c.operator_count();
        return n;
    }

    friend bool operator==(const Formula &a, const Formula &b) {
        return a.kind_ == b.kind_ && a.party_ == b.party_ && a.k_ == b.k_ && a.children_ == b.children_;
    }

    /// Debug rendering, e.g. `T2(p0,and(p1,p2))`.
    std::string to_string(const Universe *u = nullptr) const {
        if (kind_ == Kind::literal)
            return u && party_ < u->size() ? u->name(party_) : "#" + std::to_string(party_);
        std::string out = kind_ == Kind::conjunction   ? "and("
                          : kind_ == Kind::disjunction ? "or("
                                                       : "T" + std::to_string(k_) + "(";
        for (std::size_t i = 0; i < children_.size(); ++i) {
            if (i)
                out += ",";
            out += children_[i].to_string(u);
        }
        return out + ")";
    }

  private:
    void collect(PartySet &s) const {
        if (kind_ == Kind::literal) {
            s.insert(party_);
            return;
        }
        for (const auto &c : children_)
            c.collect(s);
    }

    Kind kind_ = Kind::literal;
    PartyId party_ = 0;
    std::size_t k_ = 0;
    std::vector<Formula> children_;
};

/// Compact pre-order encoding of a Formula used on hot quorum-check paths.
///
/// Each node stores its kind, its threshold (or party), its operand count and
/// the size of its subtree so that evaluation can skip a child without
/// visiting it.
class FlatFormula {
  public:
    struct Node {
        std::uint32_t value; // party id for literals, k for operators
        std::uint32_t subtree;
        std::uint16_t arity;
        std::uint8_t literal;
    };

    FlatFormula() = default;
    explicit FlatFormula(const Formula &f) {
        nodes_.reserve(f.node_count());
        append(f);
    }

    template <MembershipSet S>
    bool eval(const S &set) const {
        return nodes_.empty() ? false : eval_at(0, set);
    }

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t memory_bytes() const { return sizeof(*this) + nodes_.size() * sizeof(Node); }
    const std::vector<Node> &nodes() const { return nodes_; }

  private:
    std::uint32_t append(const Formula &f) {
        const auto at = static_cast<std::uint32_t>(nodes_.size());
        if (f.children().size() > 0xffff)
            throw InvalidArgument("operator arity exceeds 65535");
        nodes_.push_back(Node{f.is_literal() ? f.party() : static_cast<std::uint32_t>(f.k()), 1,
                              static_cast<std::uint16_t>(f.children().size()), f.is_literal() ? std::uint8_t{1}
                                                                                              : std::uint8_t{0}});
        std::uint32_t size = 1;
        for (const auto &c : f.children()) {
            append(c);
            size = static_cast<std::uint32_t>(nodes_.size()) - at;
        }
        nodes_[at].subtree = size;
        return at;
    }

    template <MembershipSet S>
    bool eval_at(std::uint32_t i, const S &set) const {
        const Node &n = nodes_[i];
        if (n.literal)
            return set.contains(n.value);
        std::uint32_t hits = 0;
        std::uint32_t left = n.arity;
        std::uint32_t j = i + 1;
        while (left-- > 0) {
            if (eval_at(j, set)) {
                if (++hits >= n.value)
                    return true;
            } else if (hits + left < n.value) {
                return false;
            }
            j += nodes_[j].subtree;
        }
        return false;
    }

    std::vector<Node> nodes_;
};

} // namespace gbqs
