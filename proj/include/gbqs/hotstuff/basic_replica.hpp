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

#include <array>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "gbqs/hotstuff/replica_base.hpp"

namespace gbqs::hotstuff {

/// Four-phase HotStuff: prepare, pre-commit, commit, decide.
class BasicReplica final : public ReplicaBase {
  public:
    explicit BasicReplica(ReplicaConfig cfg) : ReplicaBase(std::move(cfg)) {}

    const QuorumCert &prepare_qc() const { return prepare_qc_; }
    const QuorumCert &locked_qc() const { return locked_qc_; }

  protected:
    QuorumCert new_view_qc() const override { return prepare_qc_; }

    void on_enter_view(Effects &) override {
        proposal_.reset();
        for (auto &v : votes_)
            v.clear();
        formed_.fill(false);
    }

    void on_view_quorum(const std::map<ReplicaId, QuorumCert> &nv, Effects &fx) override {
        const QuorumCert *high = nullptr;
        for (const auto &[id, qc] : nv)
            if (!high || qc.view > high->view)
                high = &qc;
        const BlockPtr b = make_block(qc_block(*high), command_for(cur_view_, id()), *high, cur_view_, id());
        proposal_ = b;
        fx.note("propose", cur_view_, b->id, std::to_string(b->height));
        Message m;
        m.type = MsgType::prepare;
        m.view = cur_view_;
        m.node = b;
        m.justify = *high;
        fx.broadcast(std::move(m));
    }

    void handle(const Message &m, Effects &fx) override {
        if (m.vote) {
            on_vote(m, fx);
            return;
        }
        if (m.sender != leader_of(cur_view_, n_))
            return;
        switch (m.type) {
        case MsgType::prepare:
            on_prepare(m, fx);
            break;
        case MsgType::pre_commit:
            if (certified(m, MsgType::prepare, fx)) {
                prepare_qc_ = *m.justify;
                vote(MsgType::pre_commit, qc_block(prepare_qc_), fx);
            }
            break;
        case MsgType::commit:
            if (certified(m, MsgType::pre_commit, fx)) {
                locked_qc_ = *m.justify;
                fx.note("lock", cur_view_, locked_qc_.node);
                vote(MsgType::commit, qc_block(locked_qc_), fx);
            }
            break;
        case MsgType::decide:
            if (certified(m, MsgType::commit, fx)) {
                decide(qc_block(*m.justify), fx);
                fails_ = 0;
                enter_view(cur_view_ + 1, fx);
            }
            break;
        default:
            break;
        }
    }

  private:
    static std::size_t phase(MsgType t) {
        switch (t) {
        case MsgType::prepare:
            return 0;
        case MsgType::pre_commit:
            return 1;
        default:
            return 2;
        }
    }

    /// Leader message whose certificate has the expected phase and was formed in this view.
    bool certified(const Message &m, MsgType want, Effects &fx) {
        if (!m.justify || m.justify->type != want || m.justify->view != cur_view_)
            return false;
        if (!validator_.qc_ok(*m.justify)) {
            fx.note("reject", cur_view_, m.justify->node, std::string("invalid ") + to_string(want) + " certificate");
            return false;
        }
        return true;
    }

    void on_prepare(const Message &m, Effects &fx) {
        if (!m.node || !m.justify || m.node->view != cur_view_)
            return;
        if (!validator_.block_ok(m.node)) {
            fx.note("reject", cur_view_, m.node->id, "invalid node");
            return;
        }
        if (!validator_.qc_ok(*m.justify)) {
            fx.note("reject", cur_view_, m.node->id, "invalid prepare justify");
            return;
        }
        if (!extends(m.node, m.justify->node))
            return;
        const bool safe = extends(m.node, locked_qc_.node);
        const bool live = m.justify->view > locked_qc_.view;
        if (!safe && !live) {
            fx.note("reject", cur_view_, m.node->id, "locked");
            return;
        }
        vote(MsgType::prepare, m.node, fx);
    }

    void vote(MsgType type, const BlockPtr &node, Effects &fx) {
        auto &last = last_vote_[phase(type)];
        if (last >= cur_view_)
            return;
        last = cur_view_;
        Message v;
        v.type = type;
        v.view = cur_view_;
        v.node = node;
        v.vote = true;
        v.voter = id();
        v.sig = cfg_.signer->sign(id(), vote_bytes(type, cur_view_, node->id));
        fx.note("vote", cur_view_, node->id, to_string(type));
        fx.send(leader_of(cur_view_, n_), std::move(v));
    }

    void on_vote(const Message &m, Effects &fx) {
        if (!is_leader() || !proposal_ || !m.node || m.node->id != proposal_->id)
            return;
        if (m.type != MsgType::prepare && m.type != MsgType::pre_commit && m.type != MsgType::commit)
            return;
        if (!validator_.vote_ok(m)) {
            fx.note("reject", cur_view_, m.node->id, "bad vote signature");
            return;
        }
        const std::size_t ph = phase(m.type);
        auto &buf = votes_[ph];
        if (formed_[ph] || buf.contains(m.voter))
            return;
        buf.emplace(m.voter, m.sig);
        PartySet s(n_);
        for (const auto &[id, sig] : buf)
            s.insert(id);
        if (!cfg_.checker->is_quorum(s))
            return;
        formed_[ph] = true;
        QuorumCert qc = make_qc(m.type, cur_view_, proposal_, {buf.begin(), buf.end()});
        fx.note("qc", cur_view_, qc.node, to_string(m.type));
        Message out;
        out.view = cur_view_;
        out.justify = std::move(qc);
        out.type = m.type == MsgType::prepare      ? MsgType::pre_commit
                   : m.type == MsgType::pre_commit ? MsgType::commit
                                                   : MsgType::decide;
        fx.broadcast(std::move(out));
    }

    QuorumCert prepare_qc_ = genesis_qc(MsgType::prepare);
    QuorumCert locked_qc_ = genesis_qc(MsgType::pre_commit);
    std::array<View, 3> last_vote_{0, 0, 0};
    BlockPtr proposal_;
    std::array<std::map<ReplicaId, Signature>, 3> votes_;
    std::array<bool, 3> formed_{false, false, false};
};

} // namespace gbqs::hotstuff
