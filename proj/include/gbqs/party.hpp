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
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gbqs/error.hpp"

namespace gbqs {

using PartyId = std::uint32_t;

/// Set of parties backed by a dynamic bitset.
///
/// Sets built over different universe sizes compare and combine by their
/// members; missing words are treated as zero.
class PartySet {
  public:
    PartySet() = default;
    explicit PartySet(std::size_t universe_size) : words_((universe_size + 63) / 64) {}
    PartySet(std::size_t universe_size, std::initializer_list<PartyId> members) : PartySet(universe_size) {
        for (PartyId p : members)
            insert(p);
    }

    static PartySet from_mask(std::uint64_t mask, std::size_t universe_size) {
        PartySet s(universe_size);
        if (!s.words_.empty())
            s.words_[0] = mask;
        return s;
    }

    static PartySet full(std::size_t universe_size) {
        PartySet s(universe_size);
        for (std::size_t i = 0; i < universe_size; ++i)
            s.insert(static_cast<PartyId>(i));
        return s;
    }

    bool contains(PartyId p) const {
        const std::size_t w = p / 64;
        return w < words_.size() && ((words_[w] >> (p % 64)) & 1u);
    }
    void insert(PartyId p) {
        const std::size_t w = p / 64;
        if (w >= words_.size())
            words_.resize(w + 1);
        words_[w] |= std::uint64_t{1} << (p % 64);
    }
    void erase(PartyId p) {
        const std::size_t w = p / 64;
        if (w < words_.size())
            words_[w] &= ~(std::uint64_t{1} << (p % 64));
    }

    std::size_t size() const {
        std::size_t n = 0;
        for (auto w : words_)
            n += static_cast<std::size_t>(std::popcount(w));
        return n;
    }
    bool empty() const {
        for (auto w : words_)
            if (w != 0)
                return false;
        return true;
    }

    bool is_subset_of(const PartySet &o) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~o.word(i))
                return false;
        return true;
    }
    bool intersects(const PartySet &o) const {
        const std::size_t n = std::min(words_.size(), o.words_.size());
        for (std::size_t i = 0; i < n; ++i)
            if (words_[i] & o.words_[i])
                return true;
        return false;
    }

    PartySet &operator&=(const PartySet &o) {
        for (std::size_t i = 0; i < words_.size(); ++i)
            words_[i] &= o.word(i);
        return *this;
    }
    PartySet &operator|=(const PartySet &o) {
        if (o.words_.size() > words_.size())
            words_.resize(o.words_.size());
        for (std::size_t i = 0; i < o.words_.size(); ++i)
            words_[i] |= o.words_[i];
        return *this;
    }
    /// Set difference.
    PartySet &operator-=(const PartySet &o) {
        for (std::size_t i = 0; i < words_.size(); ++i)
            words_[i] &= ~o.word(i);
        return *this;
    }
    friend PartySet operator&(PartySet a, const PartySet &b) { return a &= b; }
    friend PartySet operator|(PartySet a, const PartySet &b) { return a |= b; }
    friend PartySet operator-(PartySet a, const PartySet &b) { return a -= b; }

    friend bool operator==(const PartySet &a, const PartySet &b) {
        const std::size_t n = std::max(a.words_.size(), b.words_.size());
        for (std::size_t i = 0; i < n; ++i)
            if (a.word(i) != b.word(i))
                return false;
        return true;
    }

    /// Members in increasing order.
    std::vector<PartyId> members() const {
        std::vector<PartyId> out;
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t bits = words_[w];
            while (bits != 0) {
                const int b = std::countr_zero(bits);
                out.push_back(static_cast<PartyId>(w * 64 + static_cast<std::size_t>(b)));
                bits &= bits - 1;
            }
        }
        return out;
    }

    std::uint64_t word(std::size_t i) const { return i < words_.size() ? words_[i] : 0; }
    std::size_t word_count() const { return words_.size(); }

    std::size_t hash() const {
        std::size_t h = 0xcbf29ce484222325ull;
        std::size_t last = words_.size();
        while (last > 0 && words_[last - 1] == 0)
            --last;
        for (std::size_t i = 0; i < last; ++i)
            h = (h ^ words_[i]) * 0x100000001b3ull;
        return h;
    }

  private:
    std::vector<std::uint64_t> words_;
};

struct PartySetHash {
    std::size_t operator()(const PartySet &s) const { return s.hash(); }
};

/// Ordered, named set of parties. Ids are dense indices in insertion order.
class Universe {
  public:
    Universe() = default;
    explicit Universe(std::vector<std::string> names) {
        for (auto &n : names)
            add(std::move(n));
    }

    /// Universe named `prefix0..prefix{n-1}`, or `prefix1..prefixn` when `one_based`.
    static Universe numbered(std::size_t n, std::string_view prefix = "p", bool one_based = true) {
        Universe u;
        for (std::size_t i = 0; i < n; ++i)
            u.add(std::string(prefix) + std::to_string(one_based ? i + 1 : i));
        return u;
    }

    /// Adds a new party; throws on duplicates.
    PartyId add(std::string name) {
        if (name.empty())
            throw InvalidArgument("party id must be a non-empty string");
        if (index_.contains(name))
            throw InvalidArgument("duplicate party id '" + name + "'");
        const auto id = static_cast<PartyId>(names_.size());
        index_.emplace(name, id);
        names_.push_back(std::move(name));
        return id;
    }

    /// Returns the id of `name`, adding it when absent.
    PartyId intern(const std::string &name) {
        if (auto it = index_.find(name); it != index_.end())
            return it->second;
        return add(name);
    }

    bool contains(const std::string &name) const { return index_.contains(name); }
    PartyId id(const std::string &name) const {
        auto it = index_.find(name);
        if (it == index_.end())
            throw InvalidArgument("unknown party '" + name + "'");
        return it->second;
    }
    const std::string &name(PartyId id) const { return names_.at(id); }
    std::size_t size() const { return names_.size(); }
    const std::vector<std::string> &names() const { return names_; }

    PartySet set_of(std::initializer_list<std::string_view> names) const {
        PartySet s(size());
        for (auto n : names)
            s.insert(id(std::string(n)));
        return s;
    }

    std::string format(const PartySet &s) const {
        std::string out = "{";
        bool first = true;
        for (PartyId p : s.members()) {
            if (!first)
                out += ",";
            out += p < names_.size() ? names_[p] : "#" + std::to_string(p);
            first = false;
        }
        return out + "}";
    }

    friend bool operator==(const Universe &a, const Universe &b) { return a.names_ == b.names_; }

  private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, PartyId> index_;
};

} // namespace gbqs
