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
#include <string>
#include <utility>
#include <vector>

#include "gbqs/error.hpp"
#include "gbqs/formula.hpp"
#include "gbqs/msp.hpp"
#include "gbqs/party.hpp"

namespace gbqs {

/// Universe A0..A{k-1}, B0..B{3k-1}; A parties come first.
inline Universe layered_2l1c_universe(std::size_t k) {
    Universe u;
    for (std::size_t i = 0; i < k; ++i)
        u.add("A" + std::to_string(i));
    for (std::size_t i = 0; i < 3 * k; ++i)
        u.add("B" + std::to_string(i));
    return u;
}

/// Two-layer, one-common system over `layered_2l1c_universe(k)`.
///
/// A_l brings two of B_{3l}..B_{3l+3} (indices mod 3k), and a strict two
/// thirds of the A parties must do so. Windows that wrap onto themselves
/// (k = 1) are deduplicated.
inline Formula layered_2l1c(std::size_t k) {
    if (k < 1)
        throw InvalidArgument("2L1C needs k >= 1");
    const std::size_t nb = 3 * k;
    std::vector<Formula> arms;
    for (std::size_t l = 0; l < k; ++l) {
        std::vector<PartyId> window;
        for (std::size_t o = 0; o < 4; ++o) {
            const auto b = static_cast<PartyId>(k + (3 * l + o) % nb);
            if (std::find(window.begin(), window.end(), b) == window.end())
                window.push_back(b);
        }
        arms.push_back(Formula::conjunction(
            {Formula::literal(static_cast<PartyId>(l)), Formula::threshold_of(2, window)}));
    }
    return Formula::threshold((2 * k + 1 + 2) / 3, std::move(arms));
}

/// Parties tagged with attributes; a quorum needs, per attribute literal,
/// at least `min` of that attribute's holders.
struct AttributeSystem {
    struct Attribute {
        std::string name;
        std::vector<PartyId> holders;
        std::size_t min = 1;
    };

    std::vector<Attribute> attributes;

    std::size_t index_of(const std::string &name) const {
        for (std::size_t i = 0; i < attributes.size(); ++i)
            if (attributes[i].name == name)
                return i;
        throw InvalidArgument("unknown attribute '" + name + "'");
    }

    void validate() const {
        for (const auto &a : attributes) {
            if (a.holders.empty())
                throw InvalidArgument("attribute '" + a.name + "' has no holders");
            if (a.min < 1 || a.min > a.holders.size())
                throw InvalidArgument("attribute '" + a.name + "' needs " + std::to_string(a.min) + " of " +
                                      std::to_string(a.holders.size()) + " holders");
        }
    }
};

namespace detail {

inline Formula lower_attributes(const AttributeSystem &sys, const Formula &f) {
    if (f.is_literal()) {
        if (f.party() >= sys.attributes.size())
            throw InvalidArgument("attribute index " + std::to_string(f.party()) + " out of range");
        const auto &a = sys.attributes[f.party()];
        return Formula::threshold_of(a.min, a.holders);
    }
    std::vector<Formula> ch;
    for (const auto &c : f.children())
        ch.push_back(lower_attributes(sys, c));
    return Formula::threshold(f.k(), std::move(ch));
}

/// Copies `f` giving every literal occurrence its own id starting at `base`;
/// `origin` maps each new id (minus base) back to the attribute.
inline Formula tag_occurrences(const Formula &f, PartyId base, std::vector<PartyId> &origin) {
    if (f.is_literal()) {
        origin.push_back(f.party());
        return Formula::literal(base + static_cast<PartyId>(origin.size() - 1));
    }
    std::vector<Formula> ch;
    for (const auto &c : f.children())
        ch.push_back(tag_occurrences(c, base, origin));
    return Formula::threshold(f.k(), std::move(ch));
}

} // namespace detail

/// The party-level formula: each attribute literal becomes min-of-holders.
inline Formula lower_attributes(const AttributeSystem &sys, const Formula &attr_formula) {
    sys.validate();
    return detail::lower_attributes(sys, attr_formula.desugared());
}

/// MSP over parties for a formula over attribute indices.
///
/// Builds the attribute-level MSP, then inserts a holders×min Vandermonde MSP
/// into the row of every attribute occurrence.
inline Msp attribute_msp(const AttributeSystem &sys, const Formula &attr_formula) {
    sys.validate();
    constexpr PartyId base = PartyId{1} << 30;
    std::vector<PartyId> origin;
    const Formula tagged = detail::tag_occurrences(attr_formula.desugared(), base, origin);
    Msp msp = build_msp(tagged);
    for (std::size_t i = 0; i < origin.size(); ++i) {
        const auto &a = sys.attributes.at(origin[i]);
        const auto where = msp.rows_of(base + static_cast<PartyId>(i));
        msp = insert(msp, where.front(), vandermonde_msp(a.holders, a.min));
    }
    return msp;
}

/// 16 parties, one per (location, OS) pair; a quorum needs three parties on
/// distinct operating systems at each of three locations, and vice versa.
struct OsLocation {
    Universe universe;
    AttributeSystem system;
    Formula formula; // over attribute indices
};

inline OsLocation os_location() {
    OsLocation o;
    const char *locs[] = {"zurich", "paris", "tokyo", "ohio"};
    const char *oses[] = {"linux", "bsd", "windows", "macos"};
    for (const char *l : locs)
        for (const char *s : oses)
            o.universe.add(std::string(l) + "-" + s);
    for (std::size_t i = 0; i < 4; ++i) {
        AttributeSystem::Attribute a{std::string("loc-") + locs[i], {}, 3};
        for (std::size_t j = 0; j < 4; ++j)
            a.holders.push_back(static_cast<PartyId>(i * 4 + j));
        o.system.attributes.push_back(a);
    }
    for (std::size_t j = 0; j < 4; ++j) {
        AttributeSystem::Attribute a{std::string("os-") + oses[j], {}, 3};
        for (std::size_t i = 0; i < 4; ++i)
            a.holders.push_back(static_cast<PartyId>(i * 4 + j));
        o.system.attributes.push_back(a);
    }
    o.formula = Formula::conjunction(
        {Formula::threshold_of(3, {0, 1, 2, 3}), Formula::threshold_of(3, {4, 5, 6, 7})});
    return o;
}

/// k×k grid tolerating b Byzantine parties; party (i, j) has id i·k + j.
struct GridLayout {
    std::size_t k = 0;
    std::size_t b = 0;

    std::size_t n() const { return k * k; }
    PartyId at(std::size_t row, std::size_t col) const { return static_cast<PartyId>(row * k + col); }

    /// Rows and columns per quorum: the least s with s² >= b/2 + 1.
    std::size_t lines() const {
        std::size_t s = 1;
        while (2 * s * s < b + 2)
            ++s;
        return s;
    }
};

struct MGrid {
    GridLayout layout;
    AttributeSystem system; // rows first, then columns
    Formula attr_formula;
    Formula formula; // over parties
    Msp msp;
};

/// Quorums are any s full rows together with any s full columns.
inline MGrid mgrid(GridLayout g) {
    if (g.k < 1)
        throw InvalidArgument("grid side must be positive");
    if (g.b + 1 > g.k)
        throw InvalidArgument("M-Grid needs b <= sqrt(n) - 1, got b=" + std::to_string(g.b) +
                              " for k=" + std::to_string(g.k));
    MGrid out;
    out.layout = g;
    for (std::size_t i = 0; i < g.k; ++i) {
        AttributeSystem::Attribute a{"row" + std::to_string(i), {}, g.k};
        for (std::size_t j = 0; j < g.k; ++j)
            a.holders.push_back(g.at(i, j));
        out.system.attributes.push_back(a);
    }
    for (std::size_t j = 0; j < g.k; ++j) {
        AttributeSystem::Attribute a{"col" + std::to_string(j), {}, g.k};
        for (std::size_t i = 0; i < g.k; ++i)
            a.holders.push_back(g.at(i, j));
        out.system.attributes.push_back(a);
    }
    std::vector<PartyId> rows, cols;
    for (std::size_t i = 0; i < g.k; ++i) {
        rows.push_back(static_cast<PartyId>(i));
        cols.push_back(static_cast<PartyId>(g.k + i));
    }
    const std::size_t s = g.lines();
    out.attr_formula = Formula::conjunction({Formula::threshold_of(s, rows), Formula::threshold_of(s, cols)});
    out.formula = lower_attributes(out.system, out.attr_formula);
    out.msp = attribute_msp(out.system, out.attr_formula);
    return out;
}

inline Universe grid_universe(const GridLayout &g) {
    Universe u;
    for (std::size_t i = 0; i < g.k; ++i)
        for (std::size_t j = 0; j < g.k; ++j)
            u.add("s" + std::to_string(i) + "_" + std::to_string(j));
    return u;
}

} // namespace gbqs
