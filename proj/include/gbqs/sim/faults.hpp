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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gbqs/sim/simulator.hpp"

namespace gbqs::sim {

namespace faults {

/// Runs a correct replica inside and rewrites what it emits.
class Wrapper : public Node {
  public:
    explicit Wrapper(const FaultContext &ctx)
        : ctx_(ctx), inner_(make_replica(ctx.cfg->variant, ctx.replica)), n_(ctx.cfg->n()) {}
    View current_view() const override { return inner_->current_view(); }

  protected:
    ReplicaId self() const { return ctx_.replica.id; }

    FaultContext ctx_;
    std::unique_ptr<Node> inner_;
    std::size_t n_;
};

class Crash final : public Wrapper {
  public:
    using Wrapper::Wrapper;
    Effects step(const Input &in, Time now) override {
        if (now >= ctx_.spec.crash_at) {
            Effects fx;
            if (!announced_)
                fx.note("crash", inner_->current_view());
            announced_ = true;
            return fx;
        }
        return inner_->step(in, now);
    }

  private:
    bool announced_ = false;
};

/// Follows the protocol but never sends its own leader messages.
class MuteLeader final : public Wrapper {
  public:
    using Wrapper::Wrapper;
    Effects step(const Input &in, Time now) override {
        Effects fx = inner_->step(in, now);
        std::erase_if(fx.sends, [](const Effects::Send &s) {
            return !s.msg.vote && s.msg.type != MsgType::new_view && s.msg.type != MsgType::generic_vote;
        });
        return fx;
    }
};

/// Repeats its votes and adds votes claiming to come from other replicas.
class VoteStuff final : public Wrapper {
  public:
    using Wrapper::Wrapper;
    Effects step(const Input &in, Time now) override {
        Effects fx = inner_->step(in, now);
        std::vector<Effects::Send> extra;
        for (const auto &s : fx.sends) {
            if (!s.msg.vote || !s.to)
                continue;
            for (int i = 0; i < 2; ++i)
                extra.push_back(s);
            for (ReplicaId j = 0; j < n_; ++j) {
                if (j == self())
                    continue;
                Effects::Send forged = s;
                forged.msg.voter = j;
                forged.msg.sig = junk(j, s.msg.sig);
                extra.push_back(std::move(forged));
            }
            Effects::Send bent = s;
            bent.msg.sig = junk(self(), s.msg.sig);
            extra.push_back(std::move(bent));
        }
        for (auto &e : extra)
            fx.sends.push_back(std::move(e));
        return fx;
    }

  private:
    static Signature junk(ReplicaId j, Signature sig) {
        for (auto &c : sig)
            c = static_cast<std::uint8_t>(c ^ (0x5a + j));
        return sig;
    }
};

/// Replaces every certificate it forwards with a broken copy.
class InvalidQc final : public Wrapper {
  public:
    using Wrapper::Wrapper;
    Effects step(const Input &in, Time now) override {
        Effects fx = inner_->step(in, now);
        for (auto &s : fx.sends) {
            if (s.msg.justify)
                s.msg.justify = corrupt(*s.msg.justify);
            if (s.msg.type == MsgType::generic && !s.msg.vote && s.msg.node) {
                const BlockPtr &b = s.msg.node;
                s.msg.node = make_block(b->parent, b->cmd, corrupt(b->justify), b->view, b->proposer);
            }
        }
        return fx;
    }

  private:
    QuorumCert corrupt(QuorumCert qc) {
        const unsigned mode = counter_++ % 4;
        if (qc.sigs.empty()) {
            // Genesis-looking certificate claiming a later view.
            qc.view += 1 + mode;
            return qc;
        }
        switch (mode) {
        case 0:
            qc.sigs.resize(1);
            break;
        case 1:
            qc.sigs.front().second.front() ^= 0xff;
            break;
        case 2:
            qc.node ^= 0x1234567;
            break;
        default:
            if (qc.sigs.size() >= 2)
                qc.sigs[1] = qc.sigs[0];
            else
                qc.sigs.push_back(qc.sigs[0]);
            break;
        }
        return qc;
    }
    unsigned counter_ = 0;
};

/// Two disjoint groups of correct replicas, each of which together with the
/// coalition forms a quorum when such a split exists.
inline std::pair<std::vector<ReplicaId>, std::vector<ReplicaId>> split_correct(const QuorumChecker &q,
                                                                              const PartySet &coalition) {
    const std::size_t n = q.universe_size();
    std::vector<ReplicaId> correct;
    for (ReplicaId i = 0; i < n; ++i)
        if (!coalition.contains(i))
            correct.push_back(i);
    auto as_set = [&](const std::vector<ReplicaId> &g) {
        PartySet s = coalition;
        for (ReplicaId i : g)
            s.insert(i);
        return s;
    };
    auto split = [&](std::uint64_t mask) {
        std::pair<std::vector<ReplicaId>, std::vector<ReplicaId>> out;
        for (std::size_t i = 0; i < correct.size(); ++i)
            ((mask >> i) & 1 ? out.first : out.second).push_back(correct[i]);
        return out;
    };
    if (correct.size() <= 20) {
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << correct.size()); ++mask) {
            auto g = split(mask);
            if (q.is_quorum(as_set(g.first)) && q.is_quorum(as_set(g.second)))
                return g;
        }
    }
    std::uint64_t alt = 0;
    for (std::size_t i = 0; i < correct.size() && i < 64; i += 2)
        alt |= std::uint64_t{1} << i;
    return split(alt);
}

/// Coalition member that, whenever it leads, drives two conflicting branches
/// to two halves of the correct replicas, completing each certificate with
/// signatures of the whole coalition. Otherwise it only sends new-views.
class Equivocate final : public Wrapper {
  public:
    explicit Equivocate(const FaultContext &ctx) : Wrapper(ctx) {
        auto g = split_correct(*ctx.cfg->checker, ctx.coalition);
        groups_[0] = std::move(g.first);
        groups_[1] = std::move(g.second);
    }

    Effects step(const Input &in, Time now) override {
        Effects out;
        if (in.kind == Input::Kind::message && in.msg.vote) {
            for (auto &br : branches_)
                if (br.view == inner_->current_view())
                    on_vote(br, in.msg, out);
        }
        Effects fx = inner_->step(in, now);
        for (auto &n : fx.notes)
            out.notes.push_back(std::move(n));
        out.timers = std::move(fx.timers);
        for (const auto &s : fx.sends) {
            const bool proposal = !s.msg.vote && (s.msg.type == MsgType::prepare || s.msg.type == MsgType::generic) &&
                                  s.msg.node && s.msg.node->proposer == self();
            if (proposal && started_ != s.msg.view)
                start(s.msg, out);
            else if (s.msg.type == MsgType::new_view && !s.msg.vote)
                out.sends.push_back(s);
        }
        return out;
    }

  private:
    struct Branch {
        int side = 0;
        View view = 0;
        BlockPtr tip;
        MsgType phase = MsgType::prepare;
        std::map<ReplicaId, Signature> votes;
        std::size_t blocks = 0;
        bool done = false;
    };

    static constexpr std::size_t chained_blocks = 5;

    bool chained() const { return ctx_.cfg->variant == Variant::chained; }

    void start(const Message &proposal, Effects &out) {
        started_ = proposal.view;
        branches_.clear();
        const BlockPtr &b = proposal.node;
        const QuorumCert justify = proposal.justify ? *proposal.justify : b->justify;
        for (int side = 0; side < 2; ++side) {
            Branch br;
            br.side = side;
            br.view = proposal.view;
            br.tip = make_block(b->parent, b->cmd + (side ? "/B" : "/A"), justify, b->view, self());
            br.blocks = 1;
            out.note("equivocate", br.view, br.tip->id, side ? "B" : "A");
            Message m;
            m.type = chained() ? MsgType::generic : MsgType::prepare;
            m.view = br.view;
            m.node = br.tip;
            if (!chained())
                m.justify = justify;
            send_group(side, m, out);
            branches_.push_back(std::move(br));
        }
    }

    void send_group(int side, const Message &m, Effects &out) const {
        for (ReplicaId r : groups_[side])
            out.send(r, m);
    }

    MsgType vote_type(const Branch &br) const { return chained() ? MsgType::generic : br.phase; }

    void on_vote(Branch &br, const Message &m, Effects &out) {
        if (br.done || !m.node || m.node->id != br.tip->id || m.view != br.view)
            return;
        const MsgType want = chained() ? MsgType::generic_vote : br.phase;
        if (m.type != want || m.voter != m.sender)
            return;
        const std::string bytes = vote_bytes(vote_type(br), br.view, br.tip->id);
        if (!ctx_.signer->verify(m.voter, bytes, m.sig))
            return;
        br.votes.emplace(m.voter, m.sig);

        PartySet s = ctx_.coalition;
        for (const auto &[id, sig] : br.votes)
            s.insert(id);
        if (!ctx_.cfg->checker->is_quorum(s))
            return;
        std::vector<std::pair<ReplicaId, Signature>> sigs(br.votes.begin(), br.votes.end());
        for (ReplicaId b = 0; b < n_; ++b)
            if (ctx_.coalition.contains(b) && !br.votes.contains(b))
                sigs.emplace_back(b, ctx_.signer->sign(b, bytes));
        QuorumCert qc = make_qc(vote_type(br), br.view, br.tip, std::move(sigs));
        br.votes.clear();
        out.note("qc", br.view, br.tip->id, br.side ? "B" : "A");

        Message next;
        next.view = br.view;
        if (chained()) {
            if (br.blocks >= chained_blocks) {
                br.done = true;
                return;
            }
            br.tip = make_block(br.tip, br.tip->cmd + "+", std::move(qc), br.view, self());
            ++br.blocks;
            next.type = MsgType::generic;
            next.node = br.tip;
        } else {
            next.justify = std::move(qc);
            switch (br.phase) {
            case MsgType::prepare:
                next.type = br.phase = MsgType::pre_commit;
                break;
            case MsgType::pre_commit:
                next.type = br.phase = MsgType::commit;
                break;
            default:
                next.type = MsgType::decide;
                br.done = true;
                break;
            }
        }
        send_group(br.side, next, out);
    }

    std::vector<ReplicaId> groups_[2];
    std::vector<Branch> branches_;
    View started_ = 0;
};

} // namespace faults

inline std::unique_ptr<Node> make_fault(const FaultContext &ctx) {
    switch (ctx.spec.behavior) {
    case Behavior::crash:
        return std::make_unique<faults::Crash>(ctx);
    case Behavior::mute_leader:
        return std::make_unique<faults::MuteLeader>(ctx);
    case Behavior::vote_stuff:
        return std::make_unique<faults::VoteStuff>(ctx);
    case Behavior::invalid_qc:
        return std::make_unique<faults::InvalidQc>(ctx);
    case Behavior::equivocate:
        return std::make_unique<faults::Equivocate>(ctx);
    }
    throw InvalidArgument("unknown fault behavior");
}

inline SimTrace simulate(const SimConfig &cfg) { return Simulator(cfg, make_fault).run(); }

} // namespace gbqs::sim
