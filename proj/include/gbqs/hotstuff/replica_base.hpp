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
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "gbqs/hotstuff/trace.hpp"
#include "gbqs/hotstuff/types.hpp"

namespace gbqs::hotstuff {

struct ReplicaConfig {
    ReplicaId id = 0;
    std::shared_ptr<const QuorumChecker> checker;
    std::shared_ptr<const Signer> signer;
    /// First timeout of a view; doubles per consecutive failed view.
    Time base_timeout = 120;
    unsigned max_backoff = 4;
    /// Chained variant: proposals a leader makes in one view.
    std::size_t max_blocks_per_view = 1u << 20;
};

/// View bookkeeping shared by both variants: timers with backoff, new-view
/// collection, view synchronization and buffering of early messages.
///
/// New-view messages go to every replica. The view's leader needs them from
/// a quorum before proposing; any replica moves ahead to view v once the
/// senders for v or later cannot all be faulty.
class ReplicaBase : public Node {
  public:
    explicit ReplicaBase(ReplicaConfig cfg)
        : cfg_(std::move(cfg)), validator_(cfg_.checker, cfg_.signer), n_(cfg_.checker->universe_size()) {}

    Effects step(const Input &in, Time now) final {
        Effects fx;
        now_ = now;
        switch (in.kind) {
        case Input::Kind::start:
            enter_view(1, fx);
            break;
        case Input::Kind::timer:
            if (in.token == timer_token_) {
                ++fails_;
                fx.note("timeout", cur_view_);
                enter_view(cur_view_ + 1, fx);
            }
            break;
        case Input::Kind::message:
            receive(in.msg, fx);
            break;
        }
        return fx;
    }

    View current_view() const override { return cur_view_; }
    ReplicaId id() const { return cfg_.id; }
    std::size_t n() const { return n_; }
    bool is_leader() const { return leader_of(cur_view_, n_) == cfg_.id; }
    const std::vector<BlockPtr> &decided() const { return decided_; }

  protected:
    /// Certificate carried in this replica's new-view messages.
    virtual QuorumCert new_view_qc() const = 0;
    /// A verified certificate arrived in a new-view.
    virtual void on_new_view_qc(const QuorumCert &, Effects &) {}
    /// Called after entering a view, before buffered messages are replayed.
    virtual void on_enter_view(Effects &) {}
    /// Leader of the current view with new-views from a quorum.
    virtual void on_view_quorum(const std::map<ReplicaId, QuorumCert> &, Effects &) {}
    /// Message for the current view (new-views excluded).
    virtual void handle(const Message &m, Effects &fx) = 0;

    void decide(const BlockPtr &b, Effects &fx) {
        decided_.push_back(b);
        fx.decisions.emplace_back(b, cur_view_);
        fx.note("decide", cur_view_, b->id, std::to_string(b->height));
    }

    void arm_timer(Effects &fx) {
        ++timer_token_;
        fx.timers.push_back({cfg_.base_timeout << std::min<unsigned>(fails_, cfg_.max_backoff), timer_token_});
    }

    void enter_view(View v, Effects &fx) {
        cur_view_ = v;
        view_quorum_seen_ = false;
        fx.note("enter-view", v);
        arm_timer(fx);
        Message nv;
        nv.type = MsgType::new_view;
        nv.view = v - 1;
        nv.justify = new_view_qc();
        fx.broadcast(nv);
        nv_.erase(nv_.begin(), nv_.lower_bound(v));
        on_enter_view(fx);

        auto it = future_.find(v);
        std::vector<Message> replay;
        if (it != future_.end())
            replay = std::move(it->second);
        future_.erase(future_.begin(), future_.upper_bound(v));
        check_view_quorum(fx);
        for (const auto &m : replay) {
            if (cur_view_ != v)
                break;
            handle(m, fx);
        }
    }

    void check_view_quorum(Effects &fx) {
        if (view_quorum_seen_ || !is_leader())
            return;
        auto it = nv_.find(cur_view_);
        if (it == nv_.end())
            return;
        PartySet s(n_);
        for (const auto &[id, qc] : it->second)
            s.insert(id);
        if (!cfg_.checker->is_quorum(s))
            return;
        view_quorum_seen_ = true;
        on_view_quorum(it->second, fx);
    }

    ReplicaConfig cfg_;
    Validator validator_;
    std::size_t n_;
    View cur_view_ = 0;
    Time now_ = 0;
    unsigned fails_ = 0;
    std::uint64_t timer_token_ = 0;

  private:
    void receive(const Message &m, Effects &fx) {
        if (m.type == MsgType::new_view && !m.vote) {
            receive_new_view(m, fx);
            return;
        }
        if (m.view < cur_view_)
            return;
        if (m.view > cur_view_) {
            auto &buf = future_[m.view];
            if (buf.size() < 8 * n_ + 8)
                buf.push_back(m);
            return;
        }
        handle(m, fx);
    }

    void receive_new_view(const Message &m, Effects &fx) {
        const View target = m.view + 1;
        if (target < cur_view_ || m.sender >= n_)
            return;
        if (!m.justify || !validator_.qc_ok(*m.justify)) {
            fx.note("reject", cur_view_, 0, "new-view certificate");
            return;
        }
        on_new_view_qc(*m.justify, fx);
        nv_[target][m.sender] = *m.justify;
        if (target > cur_view_) {
            PartySet senders(n_);
            for (auto it = nv_.lower_bound(target); it != nv_.end(); ++it)
                for (const auto &[id, qc] : it->second)
                    senders.insert(id);
            if (!cfg_.checker->tolerates(senders)) {
                fx.note("sync", cur_view_, 0, "to " + std::to_string(target));
                enter_view(target, fx);
                return;
            }
        }
        if (target == cur_view_)
            check_view_quorum(fx);
    }

    std::map<View, std::map<ReplicaId, QuorumCert>> nv_;
    std::map<View, std::vector<Message>> future_;
    std::vector<BlockPtr> decided_;
    bool view_quorum_seen_ = false;
};

inline std::string command_for(View v, ReplicaId id, std::size_t seq = 0) {
    return "v" + std::to_string(v) + "/r" + std::to_string(id) + "/" + std::to_string(seq);
}

} // namespace gbqs::hotstuff
