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

#include <deque>
#include <memory>

#include <gtest/gtest.h>

#include "gbqs/constructions.hpp"
#include "gbqs/hotstuff/basic_replica.hpp"
#include "gbqs/hotstuff/chained_replica.hpp"
#include "gbqs/quorum_checker.hpp"

namespace gbqs::hotstuff {
namespace {

constexpr std::uint64_t key_seed = 0x5eed;

std::shared_ptr<const QuorumChecker> counting(std::size_t n, std::size_t f) {
    return std::make_shared<CountingChecker>(n, f);
}

ReplicaConfig config(ReplicaId id, std::shared_ptr<const QuorumChecker> c) {
    ReplicaConfig rc;
    rc.id = id;
    rc.checker = std::move(c);
    rc.signer = std::make_shared<MacSigner>(key_seed);
    return rc;
}

QuorumCert signed_qc(MsgType type, View view, const BlockPtr &b, std::initializer_list<ReplicaId> who) {
    const MacSigner s(key_seed);
    std::vector<std::pair<ReplicaId, Signature>> sigs;
    for (ReplicaId id : who)
        sigs.emplace_back(id, s.sign(id, vote_bytes(type, view, b->id)));
    return make_qc(type, view, b, std::move(sigs));
}

bool has_note(const Effects &fx, const std::string &kind, const std::string &detail = {}) {
    for (const auto &n : fx.notes)
        if (n.kind == kind && (detail.empty() || n.detail == detail))
            return true;
    return false;
}

std::size_t vote_count(const Effects &fx) {
    std::size_t c = 0;
    for (const auto &s : fx.sends)
        c += s.msg.vote;
    return c;
}

Input from(ReplicaId sender, Message m) {
    m.sender = sender;
    return Input::message(std::move(m));
}

TEST(HotstuffTest, LeaderRotation) {
    EXPECT_EQ(leader_of(1, 4), 1u);
    EXPECT_EQ(leader_of(5, 4), 1u);
    EXPECT_EQ(leader_of(4, 4), 0u);
}

TEST(HotstuffTest, CertificateValidity) {
    Validator v(counting(4, 1), std::make_shared<MacSigner>(key_seed));
    const BlockPtr b = make_block(genesis(), "x", genesis_qc(), 1, 1);
    EXPECT_TRUE(v.qc_ok(signed_qc(MsgType::prepare, 1, b, {0, 1, 2})));
    EXPECT_FALSE(v.qc_ok(signed_qc(MsgType::prepare, 1, b, {0, 1})));

    QuorumCert bent = signed_qc(MsgType::prepare, 1, b, {0, 1, 3});
    bent.sigs[1].second[0] ^= 1;
    EXPECT_FALSE(v.qc_ok(bent));

    QuorumCert dup = signed_qc(MsgType::prepare, 1, b, {0, 1});
    dup.sigs.push_back(dup.sigs[1]);
    EXPECT_FALSE(v.qc_ok(dup));

    // Signatures over a different phase do not count.
    QuorumCert retyped = signed_qc(MsgType::prepare, 1, b, {0, 1, 2});
    retyped.type = MsgType::commit;
    EXPECT_FALSE(v.qc_ok(retyped));
    EXPECT_TRUE(v.qc_ok(genesis_qc()));
}

TEST(HotstuffTest, CertificateFollowsGeneralQuorums) {
    const Universe u = layered_2l1c_universe(4);
    auto checker = std::make_shared<MbfChecker>(layered_2l1c(4), u.size());
    Validator v(checker, std::make_shared<MacSigner>(key_seed));
    const BlockPtr b = make_block(genesis(), "x", genesis_qc(), 1, 1);
    const MacSigner s(key_seed);
    auto qc_of = [&](std::initializer_list<const char *> names) {
        std::vector<std::pair<ReplicaId, Signature>> sigs;
        for (const char *n : names)
            sigs.emplace_back(u.id(n), s.sign(u.id(n), vote_bytes(MsgType::prepare, 1, b->id)));
        return make_qc(MsgType::prepare, 1, b, std::move(sigs));
    };
    // Same size, only the first is a quorum.
    EXPECT_TRUE(v.qc_ok(qc_of({"A0", "A1", "A2", "B0", "B1", "B3", "B4", "B6", "B7"})));
    EXPECT_FALSE(v.qc_ok(qc_of({"A0", "A1", "A2", "A3", "B0", "B2", "B5", "B8", "B11"})));
}

/// Zero-delay FIFO network; timers are dropped.
template <class R>
struct LocalNet {
    std::vector<std::unique_ptr<R>> nodes;
    std::deque<std::pair<ReplicaId, Input>> queue;
    std::vector<std::vector<std::pair<BlockPtr, View>>> decided;

    explicit LocalNet(std::shared_ptr<const QuorumChecker> c) {
        for (ReplicaId i = 0; i < c->universe_size(); ++i)
            nodes.push_back(std::make_unique<R>(config(i, c)));
        decided.resize(nodes.size());
        for (ReplicaId i = 0; i < nodes.size(); ++i)
            queue.emplace_back(i, Input::start());
    }

    bool all_decided() const {
        for (const auto &d : decided)
            if (d.empty())
                return false;
        return true;
    }

    void run(std::size_t max_steps) {
        for (std::size_t step = 0; step < max_steps && !queue.empty() && !all_decided(); ++step) {
            auto [to, in] = std::move(queue.front());
            queue.pop_front();
            Effects fx = nodes[to]->step(in, 0);
            for (auto &d : fx.decisions)
                decided[to].push_back(d);
            for (auto &s : fx.sends) {
                for (ReplicaId j = 0; j < nodes.size(); ++j)
                    if (!s.to || *s.to == j)
                        queue.emplace_back(j, from(to, s.msg));
            }
        }
    }
};

TEST(HotstuffTest, BasicHappyPathDecidesInFirstView) {
    LocalNet<BasicReplica> net(counting(4, 1));
    net.run(10000);
    ASSERT_TRUE(net.all_decided());
    const NodeId first = net.decided[0][0].first->id;
    for (const auto &d : net.decided) {
        EXPECT_EQ(d[0].second, 1u);
        EXPECT_EQ(d[0].first->id, first);
        EXPECT_EQ(d[0].first->height, 1u);
        EXPECT_EQ(d[0].first->proposer, 1u);
    }
}

TEST(HotstuffTest, ChainedHappyPathAgrees) {
    LocalNet<ChainedReplica> net(counting(4, 1));
    net.run(100000);
    ASSERT_TRUE(net.all_decided());
    for (const auto &d : net.decided) {
        EXPECT_EQ(d[0].first->id, net.decided[0][0].first->id);
        EXPECT_EQ(d[0].first->height, 1u);
    }
}

Message leader_msg(MsgType t, View v, BlockPtr node, std::optional<QuorumCert> justify) {
    Message m;
    m.type = t;
    m.view = v;
    m.node = std::move(node);
    m.justify = std::move(justify);
    return m;
}

TEST(HotstuffTest, LockedReplicaRefusesConflict) {
    BasicReplica r(config(0, counting(4, 1)));
    r.step(Input::start(), 0);
    const BlockPtr b1 = make_block(genesis(), "b1", genesis_qc(), 1, 1);
    Effects fx = r.step(from(1, leader_msg(MsgType::prepare, 1, b1, genesis_qc())), 1);
    EXPECT_EQ(vote_count(fx), 1u);
    fx = r.step(from(1, leader_msg(MsgType::pre_commit, 1, nullptr, signed_qc(MsgType::prepare, 1, b1, {1, 2, 3}))), 2);
    EXPECT_EQ(vote_count(fx), 1u);
    fx = r.step(from(1, leader_msg(MsgType::commit, 1, nullptr, signed_qc(MsgType::pre_commit, 1, b1, {1, 2, 3}))), 3);
    EXPECT_TRUE(has_note(fx, "lock"));
    EXPECT_EQ(r.locked_qc().node, b1->id);

    fx = r.step(Input::timer(1), 200);
    ASSERT_EQ(r.current_view(), 2u);
    // Fork from genesis with an older justify: neither safe nor live.
    const BlockPtr fork = make_block(genesis(), "fork", genesis_qc(), 2, 2);
    fx = r.step(from(2, leader_msg(MsgType::prepare, 2, fork, genesis_qc())), 201);
    EXPECT_TRUE(has_note(fx, "reject", "locked"));
    EXPECT_EQ(vote_count(fx), 0u);

    // Extending the locked node is fine.
    const QuorumCert qc1 = signed_qc(MsgType::prepare, 1, b1, {1, 2, 3});
    const BlockPtr b2 = make_block(b1, "b2", qc1, 2, 2);
    fx = r.step(from(2, leader_msg(MsgType::prepare, 2, b2, qc1)), 202);
    EXPECT_EQ(vote_count(fx), 1u);
}

TEST(HotstuffTest, PrepareFromNonLeaderIgnored) {
    BasicReplica r(config(0, counting(4, 1)));
    r.step(Input::start(), 0);
    const BlockPtr b1 = make_block(genesis(), "b1", genesis_qc(), 1, 3);
    const Effects fx = r.step(from(3, leader_msg(MsgType::prepare, 1, b1, genesis_qc())), 1);
    EXPECT_EQ(vote_count(fx), 0u);
}

TEST(HotstuffTest, BasicVotesOncePerPhase) {
    BasicReplica r(config(0, counting(4, 1)));
    r.step(Input::start(), 0);
    const BlockPtr a = make_block(genesis(), "a", genesis_qc(), 1, 1);
    const BlockPtr b = make_block(genesis(), "b", genesis_qc(), 1, 1);
    EXPECT_EQ(vote_count(r.step(from(1, leader_msg(MsgType::prepare, 1, a, genesis_qc())), 1)), 1u);
    EXPECT_EQ(vote_count(r.step(from(1, leader_msg(MsgType::prepare, 1, b, genesis_qc())), 2)), 0u);
}

struct ChainFixture {
    ChainedReplica r{config(0, counting(4, 1))};
    ChainFixture() { r.step(Input::start(), 0); }

    /// Leader of `view` proposes a child of `parent` justified by a QC on `parent`.
    BlockPtr next(const BlockPtr &parent, View view, const std::string &cmd) {
        const QuorumCert qc =
            parent == genesis() ? genesis_qc(MsgType::generic) : signed_qc(MsgType::generic, parent->view, parent, {1, 2, 3});
        return make_block(parent, cmd, qc, view, leader_of(view, 4));
    }
    Effects feed(const BlockPtr &b, Time at) {
        return r.step(from(leader_of(b->view, 4), leader_msg(MsgType::generic, b->view, b, std::nullopt)), at);
    }
};

TEST(HotstuffTest, ChainedThreeChainCommits) {
    ChainFixture c;
    const BlockPtr b1 = c.next(genesis(), 1, "b1");
    const BlockPtr b2 = c.next(b1, 1, "b2");
    const BlockPtr b3 = c.next(b2, 1, "b3");
    const BlockPtr b4 = c.next(b3, 1, "b4");
    EXPECT_TRUE(c.feed(b1, 1).decisions.empty());
    EXPECT_TRUE(c.feed(b2, 2).decisions.empty());
    EXPECT_EQ(c.r.qc_high().node, b1->id);
    EXPECT_TRUE(c.feed(b3, 3).decisions.empty());
    EXPECT_EQ(c.r.b_lock()->id, b1->id);
    const Effects fx = c.feed(b4, 4);
    ASSERT_EQ(fx.decisions.size(), 1u);
    EXPECT_EQ(fx.decisions[0].first->id, b1->id);
    EXPECT_EQ(c.r.b_lock()->id, b2->id);
    EXPECT_EQ(c.r.b_exec()->id, b1->id);
    EXPECT_EQ(c.r.qc_high().node, b3->id);

    // The next node commits only its own new ancestor.
    const Effects more = c.feed(c.next(b4, 1, "b5"), 5);
    ASSERT_EQ(more.decisions.size(), 1u);
    EXPECT_EQ(more.decisions[0].first->id, b2->id);
}

TEST(HotstuffTest, ChainedNeedsOneViewChain) {
    ChainFixture c;
    const BlockPtr b1 = c.next(genesis(), 1, "b1");
    c.feed(b1, 1);
    c.r.step(Input::timer(1), 200);
    ASSERT_EQ(c.r.current_view(), 2u);
    const BlockPtr b2 = c.next(b1, 2, "b2");
    const BlockPtr b3 = c.next(b2, 2, "b3");
    const BlockPtr b4 = c.next(b3, 2, "b4");
    c.feed(b2, 201);
    c.feed(b3, 202);
    // b1, b2, b3 span two views.
    EXPECT_TRUE(c.feed(b4, 203).decisions.empty());
    const Effects fx = c.feed(c.next(b4, 2, "b5"), 204);
    ASSERT_EQ(fx.decisions.size(), 2u);
    EXPECT_EQ(fx.decisions[0].first->id, b1->id);
    EXPECT_EQ(fx.decisions[1].first->id, b2->id);
}

TEST(HotstuffTest, ChainedVotesOncePerRank) {
    ChainFixture c;
    const BlockPtr b1 = c.next(genesis(), 1, "b1");
    EXPECT_EQ(vote_count(c.feed(b1, 1)), 1u);
    EXPECT_EQ(vote_count(c.feed(b1, 2)), 0u);
    const BlockPtr sibling = make_block(genesis(), "other", genesis_qc(MsgType::generic), 1, 1);
    EXPECT_EQ(vote_count(c.feed(sibling, 3)), 0u);
    EXPECT_EQ(c.r.vheight(), (Rank{1, 1}));
}

TEST(HotstuffTest, QcHighOnlyMovesUp) {
    ChainFixture c;
    const BlockPtr b1 = c.next(genesis(), 1, "b1");
    const BlockPtr b2 = c.next(b1, 1, "b2");
    c.feed(b1, 1);
    c.feed(b2, 2);
    ASSERT_EQ(c.r.qc_high().node, b1->id);
    // A new-view carrying the genesis certificate leaves qc_high alone.
    Message nv;
    nv.type = MsgType::new_view;
    nv.view = 1;
    nv.justify = genesis_qc(MsgType::generic);
    c.r.step(from(3, nv), 3);
    EXPECT_EQ(c.r.qc_high().node, b1->id);
}

TEST(HotstuffTest, InvalidJustifyRejected) {
    ChainFixture c;
    const BlockPtr b1 = c.next(genesis(), 1, "b1");
    c.feed(b1, 1);
    QuorumCert weak = signed_qc(MsgType::generic, 1, b1, {1, 2});
    const BlockPtr b2 = make_block(b1, "b2", weak, 1, 1);
    const Effects fx = c.feed(b2, 2);
    EXPECT_TRUE(has_note(fx, "reject", "invalid generic justify"));
    EXPECT_EQ(vote_count(fx), 0u);
}

TEST(HotstuffTest, TraceRecordRoundTrip) {
    const TraceRecord r{12, 3, "decide", 4, 0xabcdef, "7"};
    std::ostringstream os;
    write_record(os, r);
    std::string line = os.str();
    line.pop_back();
    EXPECT_EQ(parse_record(line), r);
}

} // namespace
} // namespace gbqs::hotstuff
