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

#include <gtest/gtest.h>

#include "gbqs/constructions.hpp"
#include "gbqs/microbench.hpp"

namespace gbqs {
namespace {

TEST(MicrobenchTest, SingleTrial) {
    const auto rows = bench_formula(layered_2l1c(4), 16, 1, 7);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0].encoding, "mbf");
    EXPECT_EQ(rows[1].encoding, "msp");
    EXPECT_EQ(rows[2].encoding, "msp-lup");
    for (const auto &r : rows) {
        EXPECT_EQ(r.trials, 1u);
        EXPECT_GE(r.median_ns, 0.0);
        EXPECT_DOUBLE_EQ(r.median_ns, r.mean_ns);
        EXPECT_GT(r.memory_bytes(), r.live_bytes);
    }
}

TEST(MicrobenchTest, SeededSubsetsRepeat) {
    const auto a = random_subsets(16, 50, 3);
    EXPECT_EQ(a, random_subsets(16, 50, 3));
    EXPECT_NE(a, random_subsets(16, 50, 4));
    const auto x = bench_formula(layered_2l1c(4), 16, 500, 3);
    const auto y = bench_formula(layered_2l1c(4), 16, 500, 3);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(x[i].quorums, y[i].quorums);
        EXPECT_EQ(x[i].memory_bytes(), y[i].memory_bytes());
        // Encodings agree on every subset, so the quorum counts match.
        EXPECT_EQ(x[i].quorums, x[0].quorums);
    }
}

TEST(MicrobenchTest, ZeroTrialsThrows) {
    const MbfChecker c(Formula::threshold_of(1, {0, 1}), 2);
    EXPECT_THROW(bench_checker(c, 10, 0, 1), InvalidArgument);
}

TEST(MicrobenchTest, MbfIsSmallerForLayered) {
    const auto rows = bench_formula(layered_2l1c(4), 16, 10, 1);
    EXPECT_LT(rows[0].memory_bytes(), rows[1].memory_bytes());
    EXPECT_LT(rows[1].memory_bytes(), rows[2].memory_bytes());
}

} // namespace
} // namespace gbqs
