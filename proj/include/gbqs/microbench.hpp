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
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "gbqs/msp.hpp"
#include "gbqs/quorum_checker.hpp"
#include "gbqs/quorum_config.hpp"

namespace gbqs {

struct BenchReport {
    std::string encoding;
    /// Serialized size of the stored structure.
    std::size_t serialized_bytes = 0;
    /// In-memory footprint reported by the checker.
    std::size_t live_bytes = 0;
    double median_ns = 0;
    double mean_ns = 0;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    /// Subsets that were quorums; identical across encodings for one seed.
    std::size_t quorums = 0;

    std::size_t memory_bytes() const { return serialized_bytes + live_bytes; }
};

/// Uniform random subsets of an n-party universe.
inline std::vector<PartySet> random_subsets(std::size_t n, std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(0.5);
    std::vector<PartySet> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        PartySet s(n);
        for (PartyId p = 0; p < n; ++p)
            if (coin(rng))
                s.insert(p);
        out.push_back(std::move(s));
    }
    return out;
}

/// Times `trials` checks on seeded subsets after `warmup` discarded checks.
inline BenchReport bench_checker(const QuorumChecker &c, std::size_t serialized_bytes, std::size_t trials,
                                 std::uint64_t seed, std::size_t warmup = 100) {
    using clock = std::chrono::steady_clock;
    BenchReport r;
    r.encoding = c.encoding();
    r.serialized_bytes = serialized_bytes;
    r.live_bytes = c.memory_bytes();
    r.trials = trials;
    r.seed = seed;
    if (trials == 0)
        throw InvalidArgument("microbench needs at least one trial");

    const auto subsets = random_subsets(c.universe_size(), trials, seed);
    for (std::size_t i = 0; i < warmup; ++i)
        (void)c.is_quorum(subsets[i % subsets.size()]);

    std::vector<double> ns(trials);
    for (std::size_t i = 0; i < trials; ++i) {
        const auto t0 = clock::now();
        const bool q = c.is_quorum(subsets[i]);
        const auto t1 = clock::now();
        r.quorums += q;
        ns[i] = std::chrono::duration<double, std::nano>(t1 - t0).count();
    }
    r.mean_ns = std::accumulate(ns.begin(), ns.end(), 0.0) / static_cast<double>(trials);
    std::nth_element(ns.begin(), ns.begin() + trials / 2, ns.end());
    r.median_ns = ns[trials / 2];
    if (trials % 2 == 0) {
        const double lo = *std::max_element(ns.begin(), ns.begin() + trials / 2);
        r.median_ns = (r.median_ns + lo) / 2;
    }
    return r;
}

/// Benchmarks one formula under the MBF, MSP and MSP+LUP encodings.
inline std::vector<BenchReport> bench_formula(const Formula &f, std::size_t n, std::size_t trials, std::uint64_t seed,
                                              std::size_t warmup = 100) {
    std::vector<BenchReport> out;
    // Compact JSON, like the whitespace-free MSP dump.
    const std::size_t mbf_size = nlohmann::ordered_json::parse(emit_spec(f)).dump().size();
    out.push_back(bench_checker(MbfChecker(f, n), mbf_size, trials, seed, warmup));
    const Msp msp = build_msp(f);
    const std::size_t msp_size = dump(msp).size();
    out.push_back(bench_checker(MspChecker(msp, n), msp_size, trials, seed, warmup));
    out.push_back(bench_checker(MspLupChecker(msp, n), msp_size, trials, seed, warmup));
    return out;
}

} // namespace gbqs
