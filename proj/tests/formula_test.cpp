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

#include <random>

#include <gtest/gtest.h>

#include "gbqs/constructions.hpp"
#include "gbqs/formula.hpp"
#include "test_support.hpp"

namespace gbqs {
namespace {

using testing::oracle_eval;

TEST(FormulaTest, LiteralNeedsItsParty) {
    const Formula f = Formula::literal(0);
    EXPECT_FALSE(f.eval(PartySet(3, {1})));
    EXPECT_TRUE(f.eval(PartySet(3, {0})));
}

TEST(FormulaTest, ThreeOfFour) {
    const Formula f = Formula::threshold_of(3, {0, 1, 2, 3});
    EXPECT_TRUE(f.eval(PartySet(4, {0, 1, 2})));
    EXPECT_FALSE(f.eval(PartySet(4, {0, 1})));
    EXPECT_TRUE(f.eval(PartySet::full(4)));
}

TEST(FormulaTest, LayeredExampleSubset) {
    const Universe u = layered_2l1c_universe(4);
    PartySet s(u.size());
    for (const char *name : {"A0", "A1", "A2", "B0", "B1", "B3", "B4", "B6", "B7"})
        s.insert(u.id(name));
    EXPECT_TRUE(layered_2l1c(4).eval(s));
    s.erase(u.id("B7"));
    EXPECT_FALSE(layered_2l1c(4).eval(s));
}

TEST(FormulaTest, RejectsBadThresholds) {
    EXPECT_THROW(Formula::threshold_of(0, {0, 1}), InvalidArgument);
    EXPECT_THROW(Formula::threshold_of(3, {0, 1}), InvalidArgument);
    EXPECT_THROW(Formula::threshold(1, {}), InvalidArgument);
    EXPECT_THROW(Formula::conjunction({}), InvalidArgument);
    EXPECT_THROW(Formula::disjunction({}), InvalidArgument);
}

TEST(FormulaTest, DesugarKeepsSemantics) {
    const Formula f = Formula::conjunction(
        {Formula::literal(0), Formula::disjunction({Formula::literal(1), Formula::literal(2)})});
    const Formula d = f.desugared();
    EXPECT_EQ(d.kind(), Formula::Kind::threshold);
    EXPECT_EQ(d.k(), 2u);
    EXPECT_EQ(d.children()[1].kind(), Formula::Kind::threshold);
    EXPECT_EQ(d.children()[1].k(), 1u);
    for (std::uint64_t m = 0; m < 8; ++m)
        EXPECT_EQ(f.eval(MaskSet{m}), d.eval(MaskSet{m})) << m;
}

TEST(FormulaTest, Accessors) {
    const Formula f = Formula::threshold(2, {Formula::literal(4), Formula::threshold_of(1, {1, 2})});
    EXPECT_EQ(f.party_bound(), 5u);
    EXPECT_EQ(f.parties(), PartySet(5, {1, 2, 4}));
    EXPECT_EQ(f.node_count(), 5u);
    EXPECT_EQ(f.operator_count(), 2u);
    EXPECT_EQ(f.to_string(), "T2(#4,T1(#1,#2))");
}

TEST(FormulaTest, FlatAndRecursiveMatchOracle) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + rng() % 12;
        const Formula f = testing::random_formula(rng, n);
        const FlatFormula flat(f);
        EXPECT_EQ(flat.node_count(), f.node_count());
        for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
            const bool want = oracle_eval(f, m);
            ASSERT_EQ(f.eval(MaskSet{m}), want) << f.to_string() << " mask " << m;
            ASSERT_EQ(flat.eval(MaskSet{m}), want) << f.to_string() << " mask " << m;
        }
    }
}

TEST(FormulaTest, FlatMemoryGrowsWithNodes) {
    const FlatFormula small(Formula::threshold_of(1, {0, 1}));
    const FlatFormula big(Formula::threshold_of(1, {0, 1, 2, 3, 4, 5}));
    EXPECT_LT(small.memory_bytes(), big.memory_bytes());
    EXPECT_FALSE(FlatFormula().eval(MaskSet{~std::uint64_t{0}}));
}

} // namespace
} // namespace gbqs
