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
#include <random>
#include <vector>

#include "gbqs/formula.hpp"
#include "gbqs/party.hpp"

namespace gbqs::testing {

/// Plain recursive count of satisfied operands; shares no code with Formula::eval.
inline bool oracle_eval(const Formula &f, std::uint64_t mask) {
    if (f.is_literal())
        return (mask >> f.party()) & 1u;
    std::size_t hits = 0;
    for (const auto &c : f.children())
        hits += oracle_eval(c, mask) ? 1 : 0;
    std::size_t need = f.k();
    if (f.kind() == Formula::Kind::conjunction)
        need = f.children().size();
    if (f.kind() == Formula::Kind::disjunction)
        need = 1;
    return hits >= need;
}

/// Random formula over parties [0, n); every party appears at least once.
inline Formula random_formula(std::mt19937_64 &rng, std::size_t n, std::size_t max_depth = 3) {
    std::vector<PartyId> pool(n);
    for (std::size_t i = 0; i < n; ++i)
        pool[i] = static_cast<PartyId>(i);
    std::shuffle(pool.begin(), pool.end(), rng);
    std::size_t next = 0;
    auto pick = [&]() -> PartyId {
        if (next < pool.size())
            return pool[next++];
        return static_cast<PartyId>(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
    };
    auto build = [&](auto &self, std::size_t depth) -> Formula {
        std::uniform_int_distribution<int> coin(0, 9);
        if (depth == 0 || (depth < max_depth && coin(rng) < 3))
            return Formula::literal(pick());
        const std::size_t m = std::uniform_int_distribution<std::size_t>(2, 4)(rng);
        std::vector<Formula> ch;
        for (std::size_t i = 0; i < m; ++i)
            ch.push_back(self(self, depth - 1));
        switch (coin(rng) % 3) {
        case 0:
            return Formula::conjunction(std::move(ch));
        case 1:
            return Formula::disjunction(std::move(ch));
        default:
            return Formula::threshold(std::uniform_int_distribution<std::size_t>(1, m)(rng), std::move(ch));
        }
    };
    Formula f = build(build, max_depth);
    // Fold in any party the tree skipped so the universe is fully used.
    if (next < pool.size()) {
        std::vector<Formula> ch{f};
        while (next < pool.size())
            ch.push_back(Formula::literal(pool[next++]));
        const std::size_t k = std::uniform_int_distribution<std::size_t>(1, ch.size())(rng);
        f = Formula::threshold(k, std::move(ch));
    }
    return f;
}

inline PartySet mask_set(std::uint64_t mask, std::size_t n) { return PartySet::from_mask(mask, n); }

} // namespace gbqs::testing
