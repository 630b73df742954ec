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
#include <map>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "gbqs/hotstuff/replica_base.hpp"

namespace gbqs::hotstuff {

/// Pipelined HotStuff with one generic phase per node.
///
/// Nodes are compared by (view, height) rather than height alone so that a
/// new leader can build at a height where an older, uncertified proposal
/// already received votes. A node is committed only when it heads a direct
/// three-chain whose nodes were all proposed in the same view.
class ChainedReplica final : public ReplicaBase {
  public:
    explicit ChainedReplica(ReplicaConfig cfg) : ReplicaBase(std::move(cfg)) {}

    const QuorumCert &qc_high() const { return qc_high_; }
    const BlockPtr &b_lock() const { return b_lock_; }
    const BlockPtr &b_exec() const { return b_exec_; }
    const BlockPtr &b_leaf() const { return b_leaf_; }
    Rank vheight() const { return vrank_; }

  protected:
    QuorumCert new_view_qc() const override { return qc_high_; }

    void on_new_view_qc(const QuorumCert &qc, Effects &) override { update_qc_high(qc); }

    void on_enter_view(Effects &) override {
        proposals_.clear();
        votes_.clear();
        certified_.clear();
        proposing_ = false;
        blocks_this_view_ = 0;
    }

    void on_view_quorum(const std::map<ReplicaId, QuorumCert> &, Effects &fx) override {
        proposing_ = true;
        b_leaf_ = qc_block(qc_high_);
        propose(fx);
    }

    void handle(const Message &m, Effects &fx) override {
        if (m.type == MsgType::generic && !m.vote) {
            if (m.sender == leader_of(cur_view_, n_))
                on_receive_proposal(m, fx);
        } else if (m.type == MsgType::generic_vote && m.vote) {
            on_receive_vote(m, fx);
        }
    }

  private:
    void on_receive_proposal(const Message &m, Effects &fx) {
        const BlockPtr &b = m.node;
        if (!b || b->view != cur_view_)
            return;
        if (!validator_.block_ok(b)) {
            fx.note("reject", cur_view_, b->id, "invalid node");
            return;
        }
        if (!validator_.qc_ok(b->justify)) {
            fx.note("reject", cur_view_, b->id, "invalid generic justify");
            return;
        }
        const bool fresh = rank_of(b) > vrank_;
        const bool safe = extends(b, b_lock_->id) || rank_of(qc_block(b->justify)) > rank_of(b_lock_);
        if (fresh && safe) {
            vrank_ = rank_of(b);
            Message v;
            v.type = MsgType::generic_vote;
            v.view = b->view;
            v.node = b;
            v.vote = true;
            v.voter = id();
            v.sig = cfg_.signer->sign(id(), vote_bytes(MsgType::generic, b->view, b->id));
            fx.note("vote", cur_view_, b->id, "generic");
            fx.send(leader_of(cur_view_, n_), std::move(v));
        } else if (!safe) {
            fx.note("reject", cur_view_, b->id, "locked");
        }
        update(b, fx);
    }

    void on_receive_vote(const Message &m, Effects &fx) {
        if (!is_leader() || !m.node || !proposals_.contains(m.node->id))
            return;
        if (!validator_.vote_ok(m)) {
            fx.note("reject", cur_view_, m.node->id, "bad vote signature");
            return;
        }
        const NodeId b = m.node->id;
        if (certified_.contains(b))
            return;
        auto &buf = votes_[b];
        if (buf.contains(m.voter))
            return;
        buf.emplace(m.voter, m.sig);
        PartySet s(n_);
        for (const auto &[id, sig] : buf)
            s.insert(id);
        if (!cfg_.checker->is_quorum(s))
            return;
        certified_.insert(b);
        QuorumCert qc = make_qc(MsgType::generic, m.node->view, m.node, {buf.begin(), buf.end()});
        fx.note("qc", cur_view_, b, "generic");
        update_qc_high(qc);
        if (proposing_ && qc_high_.node == b_leaf_->id)
            propose(fx);
    }

    void propose(Effects &fx) {
        if (blocks_this_view_ >= cfg_.max_blocks_per_view)
            return;
        const BlockPtr b =
            make_block(b_leaf_, command_for(cur_view_, id(), blocks_this_view_), qc_high_, cur_view_, id());
        ++blocks_this_view_;
        b_leaf_ = b;
        proposals_.insert(b->id);
        fx.note("propose", cur_view_, b->id, std::to_string(b->height));
        Message m;
        m.type = MsgType::generic;
        m.view = cur_view_;
        m.node = b;
        fx.broadcast(std::move(m));
    }

    void update_qc_high(const QuorumCert &qc) {
        if (rank_of(qc_block(qc)) > rank_of(qc_block(qc_high_))) {
            qc_high_ = qc;
            b_leaf_ = qc_block(qc);
        }
    }

    void update(const BlockPtr &b_star, Effects &fx) {
        const BlockPtr b2 = qc_block(b_star->justify);
        const BlockPtr b1 = qc_block(b2->justify);
        const BlockPtr b0 = qc_block(b1->justify);
        update_qc_high(b_star->justify);
        if (rank_of(b1) > rank_of(b_lock_)) {
            b_lock_ = b1;
            fx.note("lock", cur_view_, b1->id);
        }
        const bool chain = b2->parent && b2->parent_id == b1->id && b1->parent && b1->parent_id == b0->id;
        const bool one_view = b0->view == b1->view && b1->view == b2->view;
        if (chain && one_view && b0 != genesis())
            on_commit(b0, fx);
    }

    void on_commit(const BlockPtr &b, Effects &fx) {
        std::vector<BlockPtr> run;
        for (BlockPtr p = b; p && rank_of(p) > rank_of(b_exec_); p = p->parent)
            run.push_back(p);
        if (run.empty())
            return;
        for (auto it = run.rbegin(); it != run.rend(); ++it)
            decide(*it, fx);
        b_exec_ = b;
        // Progress keeps the current view alive.
        fails_ = 0;
        arm_timer(fx);
    }

    Rank vrank_{0, 0};
    BlockPtr b_lock_ = genesis();
    BlockPtr b_exec_ = genesis();
    BlockPtr b_leaf_ = genesis();
    QuorumCert qc_high_ = genesis_qc(MsgType::generic);

    std::unordered_set<NodeId> proposals_;
    std::unordered_map<NodeId, std::map<ReplicaId, Signature>> votes_;
    std::unordered_set<NodeId> certified_;
    bool proposing_ = false;
    std::size_t blocks_this_view_ = 0;
};

} // namespace gbqs::hotstuff
