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
#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "gbqs/error.hpp"
#include "gbqs/formula.hpp"
#include "gbqs/party.hpp"

namespace gbqs {

/// Explicit collection of minimal quorums over a universe of `universe_size` parties.
struct QuorumSystem {
    std::size_t universe_size = 0;
    std::vector<PartySet> quorums;

    /// Checks the structural part of the BQS definition: a non-empty
    /// antichain of non-empty sets.
    bool is_antichain() const {
        for (std::size_t i = 0; i < quorums.size(); ++i)
            for (std::size_t j = 0; j < quorums.size(); ++j)
                if (i != j && quorums[i].is_subset_of(quorums[j]))
                    return false;
        return true;
    }
    bool well_formed() const {
        if (quorums.empty())
            return false;
        for (const auto &q : quorums)
            if (q.empty())
                return false;
        return is_antichain();
    }

    bool contains_quorum(const PartySet &a) const {
        for (const auto &q : quorums)
            if (q.is_subset_of(a))
                return true;
        return false;
    }
};

/// Explicit fail-prone system: maximal sets of parties that may fail together.
struct FailProneSystem {
    std::size_t universe_size = 0;
    std::vector<PartySet> sets;

    bool is_maximal() const {
        for (std::size_t i = 0; i < sets.size(); ++i)
            for (std::size_t j = 0; j < sets.size(); ++j)
                if (i != j && sets[i].is_subset_of(sets[j]))
                    return false;
        return true;
    }

    /// True iff `b` fits inside some fail-prone set.
    bool covers(const PartySet &b) const {
        for (const auto &f : sets)
            if (b.is_subset_of(f))
                return true;
        return false;
    }
};

namespace detail {

inline void k_subsets(std::size_t n, std::size_t k, const std::function<void(const PartySet &)> &fn) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i)
        idx[i] = i;
    if (k > n)
        return;
    while (true) {
        PartySet s(n);
        for (auto i : idx)
            s.insert(static_cast<PartyId>(i));
        fn(s);
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1)
            --i;
        if (i == 0)
            return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j)
            idx[j] = idx[j - 1] + 1;
    }
}

} // namespace detail

/// All k-subsets of an n-party universe, as a quorum system.
inline QuorumSystem threshold_quorums(std::size_t n, std::size_t k) {
    QuorumSystem q{n, {}};
    detail::k_subsets(n, k, [&](const PartySet &s) { q.quorums.push_back(s); });
    return q;
}

/// The threshold fail-prone system: every f-subset may fail.
inline FailProneSystem threshold_fail_prone(std::size_t n, std::size_t f) {
    FailProneSystem fs{n, {}};
    detail::k_subsets(n, f, [&](const PartySet &s) { fs.sets.push_back(s); });
    return fs;
}

/// Exhaustively lists the minimal sets satisfying `f` over `universe_size` parties.
///
/// Exponential in the universe size; refuses to run beyond `bound` parties.
inline QuorumSystem enumerate_minimal_quorums(const Formula &f, std::size_t universe_size, std::size_t bound = 24) {
    if (universe_size > bound || universe_size > 30)
        throw TooLarge("enumeration over " + std::to_string(universe_size) + " parties exceeds the bound of " +
                       std::to_string(std::min<std::size_t>(bound, 30)));
    if (f.party_bound() > universe_size)
        throw InvalidArgument("formula names a party outside the universe");
    const FlatFormula flat(f);
    const std::uint64_t total = std::uint64_t{1} << universe_size;
    std::vector<bool> table(total);
    for (std::uint64_t m = 0; m < total; ++m)
        table[m] = flat.eval(MaskSet{m});
    QuorumSystem q{universe_size, {}};
    for (std::uint64_t m = 0; m < total; ++m) {
        if (!table[m])
            continue;
        bool minimal = true;
        for (std::uint64_t bits = m; bits != 0; bits &= bits - 1) {
            if (table[m & ~(bits & (~bits + 1))]) {
                minimal = false;
                break;
            }
        }
        if (minimal)
            q.quorums.push_back(PartySet::from_mask(m, universe_size));
    }
    return q;
}

/// Distinct sets obtained by choosing exactly k operands at every threshold
/// node and taking the union of the chosen literals. Unlike the minimal
/// quorums, this keeps unions that contain a smaller selection.
inline std::vector<PartySet> enumerate_exact_selections(const Formula &f, std::size_t limit = 1u << 20) {
    std::function<std::vector<PartySet>(const Formula &)> go = [&](const Formula &n) -> std::vector<PartySet> {
        if (n.is_literal()) {
            PartySet s;
            s.insert(n.party());
            return {s};
        }
        std::vector<std::vector<PartySet>> sub;
        for (const auto &c : n.children())
            sub.push_back(go(c));
        std::unordered_set<PartySet, PartySetHash> out;
        const std::size_t m = sub.size();
        detail::k_subsets(m, n.k(), [&](const PartySet &pick) {
            std::vector<PartySet> acc{PartySet{}};
            for (PartyId i : pick.members()) {
                std::vector<PartySet> next;
                for (const auto &a : acc)
                    for (const auto &b : sub[i])
                        next.push_back(a | b);
                if (next.size() > limit)
                    throw TooLarge("exact selection count exceeds " + std::to_string(limit));
                acc = std::move(next);
            }
            out.insert(acc.begin(), acc.end());
        });
        return {out.begin(), out.end()};
    };
    return go(f.desugared());
}

/// {P \ F | F in fs}.
inline QuorumSystem complement_sets(const FailProneSystem &fs) {
    QuorumSystem q{fs.universe_size, {}};
    const PartySet all = PartySet::full(fs.universe_size);
    for (const auto &f : fs.sets)
        q.quorums.push_back(all - f);
    return q;
}

/// The fail-prone system whose canonical BQS is `q`: {P \ Q | Q in q}.
inline FailProneSystem canonical_fail_prone(const QuorumSystem &q) {
    FailProneSystem fs{q.universe_size, {}};
    const PartySet all = PartySet::full(q.universe_size);
    for (const auto &s : q.quorums)
        fs.sets.push_back(all - s);
    return fs;
}

/// Three sets whose union covers the universe, each fitting a fail-prone set.
struct Q3Violation {
    std::array<PartySet, 3> parts;
};

/// Backtracking search for a split of the universe into three classes, each
/// of which fits inside some fail-prone set. `fits` must be downward closed.
///
/// Classes are treated as interchangeable, so a party is only ever placed in
/// an already-used class or the first empty one.
inline std::optional<Q3Violation> find_three_cover(std::size_t universe_size,
                                                   const std::function<bool(const PartySet &)> &fits,
                                                   std::vector<PartyId> order = {}) {
    if (order.empty())
        for (std::size_t i = 0; i < universe_size; ++i)
            order.push_back(static_cast<PartyId>(i));
    std::array<PartySet, 3> cls{PartySet(universe_size), PartySet(universe_size), PartySet(universe_size)};
    if (!fits(cls[0]))
        return std::nullopt;

    std::function<bool(std::size_t, std::size_t)> go = [&](std::size_t depth, std::size_t used) -> bool {
        if (depth == order.size())
            return true;
        const PartyId p = order[depth];
        const std::size_t limit = std::min<std::size_t>(used + 1, 3);
        for (std::size_t c = 0; c < limit; ++c) {
            cls[c].insert(p);
            if (fits(cls[c]) && go(depth + 1, std::max(used, c + 1)))
                return true;
            cls[c].erase(p);
        }
        return false;
    };
    if (go(0, 0))
        return Q3Violation{cls};
    return std::nullopt;
}

/// No three fail-prone sets (repetition allowed) cover the universe.
inline bool q3_holds(const FailProneSystem &fs) {
    return !find_three_cover(fs.universe_size, [&](const PartySet &c) { return fs.covers(c); }).has_value();
}

/// Q3 for the canonical fail-prone system of the quorum system implemented by `f`.
///
/// A set fits a canonical fail-prone set iff its complement still satisfies `f`.
inline std::optional<Q3Violation> canonical_q3_violation(const Formula &f, std::size_t universe_size) {
    const FlatFormula flat(f);
    const PartySet all = PartySet::full(universe_size);
    return find_three_cover(universe_size, [&](const PartySet &c) { return flat.eval(all - c); });
}

inline bool canonical_q3_holds(const Formula &f, std::size_t universe_size) {
    return !canonical_q3_violation(f, universe_size).has_value();
}

/// The canonical BQS {P \ F}; only exists when Q3 holds.
inline QuorumSystem canonical_bqs(const FailProneSystem &fs) {
    if (!q3_holds(fs))
        throw InvalidArgument("fail-prone system violates Q3: no Byzantine quorum system exists");
    return complement_sets(fs);
}

struct BqsReport {
    enum class Violation { none, consistency, availability };

    Violation violation = Violation::none;
    /// Consistency: indices of the quorum pair and the fail-prone set containing their intersection.
    std::size_t q1 = 0, q2 = 0, f = 0;

    bool ok() const { return violation == Violation::none; }

    std::string describe(const QuorumSystem &q, const FailProneSystem &fs, const Universe *u = nullptr) const {
        auto fmt = [&](const PartySet &s) {
            if (u)
                return u->format(s);
            std::string out = "{";
            for (auto p : s.members())
                out += (out.size() > 1 ? "," : "") + std::to_string(p);
            return out + "}";
        };
        switch (violation) {
        case Violation::none:
            return "ok";
        case Violation::consistency:
            return "consistency violated: " + fmt(q.quorums[q1]) + " and " + fmt(q.quorums[q2]) +
                   " intersect inside fail-prone set " + fmt(fs.sets[f]);
        case Violation::availability:
            return "availability violated: every quorum meets fail-prone set " + fmt(fs.sets[f]);
        }
        return {};
    }
};

namespace detail {

template <class Bits>
struct BitOps;

template <>
struct BitOps<std::uint64_t> {
    static std::uint64_t from(const PartySet &s) { return s.word(0); }
    static bool subset(std::uint64_t a, std::uint64_t b) { return (a & ~b) == 0; }
    static bool disjoint(std::uint64_t a, std::uint64_t b) { return (a & b) == 0; }
    static std::uint64_t meet(std::uint64_t a, std::uint64_t b) { return a & b; }
};

template <>
struct BitOps<PartySet> {
    static PartySet from(const PartySet &s) { return s; }
    static bool subset(const PartySet &a, const PartySet &b) { return a.is_subset_of(b); }
    static bool disjoint(const PartySet &a, const PartySet &b) { return !a.intersects(b); }
    static PartySet meet(const PartySet &a, const PartySet &b) { return a & b; }
};

template <class Bits, class Hash>
BqsReport verify_bqs_impl(const QuorumSystem &q, const FailProneSystem &fs) {
    using Ops = BitOps<Bits>;
    std::vector<Bits> qs, ff;
    qs.reserve(q.quorums.size());
    ff.reserve(fs.sets.size());
    for (const auto &s : q.quorums)
        qs.push_back(Ops::from(s));
    for (const auto &s : fs.sets)
        ff.push_back(Ops::from(s));

    BqsReport rep;
    for (std::size_t j = 0; j < ff.size(); ++j) {
        bool found = false;
        for (const auto &s : qs)
            if (Ops::disjoint(s, ff[j])) {
                found = true;
                break;
            }
        if (!found) {
            rep.violation = BqsReport::Violation::availability;
            rep.f = j;
            return rep;
        }
    }

    // Pairs sharing the same intersection only need one fail-prone scan.
    std::unordered_map<Bits, std::pair<std::size_t, std::size_t>, Hash> meets;
    for (std::size_t a = 0; a < qs.size(); ++a)
        for (std::size_t b = a; b < qs.size(); ++b)
            meets.try_emplace(Ops::meet(qs[a], qs[b]), a, b);
    for (const auto &[inter, pair] : meets)
        for (std::size_t j = 0; j < ff.size(); ++j)
            if (Ops::subset(inter, ff[j])) {
                rep.violation = BqsReport::Violation::consistency;
                rep.q1 = pair.first;
                rep.q2 = pair.second;
                rep.f = j;
                return rep;
            }
    return rep;
}

} // namespace detail

/// Checks Consistency (no pairwise quorum intersection inside a fail-prone
/// set) and Availability (every fail-prone set misses some quorum).
inline BqsReport verify_bqs(const QuorumSystem &q, const FailProneSystem &fs) {
    if (q.universe_size != fs.universe_size)
        throw InvalidArgument("quorum and fail-prone systems are over different universes");
    if (q.universe_size <= 64)
        return detail::verify_bqs_impl<std::uint64_t, std::hash<std::uint64_t>>(q, fs);
    return detail::verify_bqs_impl<PartySet, PartySetHash>(q, fs);
}

/// Shrinks a satisfying set to a minimal one by dropping members greedily.
inline PartySet minimize_satisfying(const Formula &f, PartySet s) {
    const FlatFormula flat(f);
    if (!flat.eval(s))
        throw InvalidArgument("set does not satisfy the formula");
    for (PartyId p : s.members()) {
        s.erase(p);
        if (!flat.eval(s))
            s.insert(p);
    }
    return s;
}

/// Result of verifying the canonical system of a formula.
struct CanonicalReport {
    bool ok = true;
    /// On failure: three quorums whose common intersection is empty.
    std::array<PartySet, 3> quorums;
};

/// Verifies that the quorums of `f` form a BQS for their canonical fail-prone
/// system without listing them. Availability holds by construction; consistency
/// is equivalent to Q3 of the canonical fail-prone system, i.e. to no three
/// quorums having an empty common intersection.
inline CanonicalReport verify_canonical_bqs(const Formula &f, std::size_t universe_size,
                                            std::vector<PartyId> order = {}) {
    const FlatFormula flat(f);
    const PartySet all = PartySet::full(universe_size);
    CanonicalReport rep;
    if (!flat.eval(all)) {
        rep.ok = false;
        return rep;
    }
    auto v = find_three_cover(
        universe_size, [&](const PartySet &c) { return flat.eval(all - c); }, std::move(order));
    if (v) {
        rep.ok = false;
        for (std::size_t i = 0; i < 3; ++i)
            rep.quorums[i] = minimize_satisfying(f, all - v->parts[i]);
    }
    return rep;
}

} // namespace gbqs
