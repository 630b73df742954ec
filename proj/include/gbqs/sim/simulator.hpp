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
#include <functional>
#include <memory>
#include <ostream>
#include <queue>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gbqs/hotstuff/basic_replica.hpp"
#include "gbqs/hotstuff/chained_replica.hpp"
#include "gbqs/hotstuff/trace.hpp"

namespace gbqs::sim {

using namespace gbqs::hotstuff;

enum class Variant { basic, chained };

enum class Behavior { crash, mute_leader, equivocate, vote_stuff, invalid_qc };

inline const char *to_string(Variant v) { return v == Variant::basic ? "basic" : "chained"; }

inline const char *to_string(Behavior b) {
    switch (b) {
    case Behavior::crash:
        return "crash";
    case Behavior::mute_leader:
        return "mute-leader";
    case Behavior::equivocate:
        return "equivocate";
    case Behavior::vote_stuff:
        return "vote-stuff";
    case Behavior::invalid_qc:
        return "invalid-qc";
    }
    return "?";
}

inline Behavior parse_behavior(const std::string &s) {
    for (Behavior b : {Behavior::crash, Behavior::mute_leader, Behavior::equivocate, Behavior::vote_stuff,
                       Behavior::invalid_qc})
        if (s == to_string(b))
            return b;
    throw InvalidArgument("unknown fault behavior '" + s + "'");
}

inline Variant parse_variant(const std::string &s) {
    if (s == "basic")
        return Variant::basic;
    if (s == "chained")
        return Variant::chained;
    throw InvalidArgument("unknown protocol variant '" + s + "'");
}

struct FaultSpec {
    ReplicaId replica = 0;
    Behavior behavior = Behavior::crash;
    /// Crash time; ignored by other behaviors.
    Time crash_at = 0;
};

struct SimConfig {
    Variant variant = Variant::basic;
    std::shared_ptr<const QuorumChecker> checker;
    std::vector<FaultSpec> faults;
    Time gst = 0;
    Time delta = 10;
    /// Pre-GST delays are uniform in [1, pre_gst_max], delivered no later than GST + delta.
    Time pre_gst_max = 100;
    Time horizon = 3000;
    std::uint64_t seed = 1;
    /// Liveness window; 0 means 8·delta.
    Time tf = 0;
    /// First view timeout; 0 means 12·delta.
    Time base_timeout = 0;
    /// Chained variant: a leader stops proposing after this many nodes, forcing
    /// a view change; 0 means unlimited.
    std::size_t blocks_per_view = 0;
    std::uint64_t signer_seed = 0x5eed;
    std::size_t max_events = 5'000'000;

    std::size_t n() const { return checker->universe_size(); }
    Time liveness_window() const { return tf ? tf : 8 * delta; }
    Time view_timeout() const { return base_timeout ? base_timeout : 12 * delta; }

    PartySet faulty() const {
        PartySet b(n());
        for (const auto &f : faults)
            b.insert(f.replica);
        return b;
    }
};

struct Decision {
    Time time = 0;
    ReplicaId replica = 0;
    View view = 0;
    BlockPtr node;
};

struct SimTrace {
    std::vector<TraceRecord> records;
    std::vector<Decision> decisions;
    std::size_t n = 0;
    PartySet faulty;
    std::size_t messages = 0;
    std::size_t events = 0;
    View max_view = 0;
    Time end_time = 0;
    bool truncated = false;

    void write(std::ostream &os) const {
        for (const auto &r : records)
            write_record(os, r);
    }
    std::string text() const {
        std::ostringstream os;
        write(os);
        return os.str();
    }
};

/// Signer that refuses to sign for replicas outside a coalition.
class CoalitionSigner final : public Signer {
  public:
    CoalitionSigner(std::shared_ptr<const Signer> inner, PartySet members)
        : inner_(std::move(inner)), members_(std::move(members)) {}
    Signature sign(ReplicaId who, std::string_view bytes) const override {
        if (!members_.contains(who))
            throw InvalidArgument("coalition cannot sign for replica " + std::to_string(who));
        return inner_->sign(who, bytes);
    }
    bool verify(ReplicaId who, std::string_view bytes, const Signature &sig) const override {
        return inner_->verify(who, bytes, sig);
    }
    const PartySet &members() const { return members_; }

  private:
    std::shared_ptr<const Signer> inner_;
    PartySet members_;
};

inline std::unique_ptr<Node> make_replica(Variant v, ReplicaConfig cfg) {
    if (v == Variant::basic)
        return std::make_unique<BasicReplica>(std::move(cfg));
    return std::make_unique<ChainedReplica>(std::move(cfg));
}

/// Everything a fault driver may use: its own replica config (signing only
/// for the coalition) and the coalition itself.
struct FaultContext {
    const SimConfig *cfg = nullptr;
    FaultSpec spec;
    PartySet coalition;
    std::shared_ptr<const CoalitionSigner> signer;
    ReplicaConfig replica;
};

using FaultFactory = std::function<std::unique_ptr<Node>(const FaultContext &)>;

/// Seeded discrete-event network. Ties are broken by (time, sender, sequence).
class Simulator {
  public:
    Simulator(SimConfig cfg, FaultFactory faults) : cfg_(std::move(cfg)), rng_(cfg_.seed) {
        const std::size_t n = cfg_.n();
        auto signer = std::make_shared<MacSigner>(cfg_.signer_seed);
        trace_.n = n;
        trace_.faulty = cfg_.faulty();
        auto coalition = std::make_shared<CoalitionSigner>(signer, trace_.faulty);
        for (ReplicaId i = 0; i < n; ++i) {
            ReplicaConfig rc;
            rc.id = i;
            rc.checker = cfg_.checker;
            rc.base_timeout = cfg_.view_timeout();
            rc.signer = signer;
            if (cfg_.blocks_per_view)
                rc.max_blocks_per_view = cfg_.blocks_per_view;
            const FaultSpec *fs = nullptr;
            for (const auto &f : cfg_.faults)
                if (f.replica == i)
                    fs = &f;
            if (fs) {
                rc.signer = coalition;
                FaultContext ctx{&cfg_, *fs, trace_.faulty, coalition, rc};
                nodes_.push_back(faults(ctx));
            } else {
                nodes_.push_back(make_replica(cfg_.variant, rc));
            }
        }
    }

    SimTrace run() {
        for (ReplicaId i = 0; i < nodes_.size(); ++i)
            push(0, i, i, Input::start());
        while (!queue_.empty()) {
            if (trace_.events >= cfg_.max_events) {
                trace_.truncated = true;
                break;
            }
            Event ev = queue_.top();
            queue_.pop();
            if (ev.time > cfg_.horizon)
                break;
            ++trace_.events;
            trace_.end_time = ev.time;
            apply(ev.target, nodes_[ev.target]->step(ev.input, ev.time), ev.time);
        }
        return std::move(trace_);
    }

  private:
    struct Event {
        Time time;
        ReplicaId sender;
        std::uint64_t seq;
        ReplicaId target;
        Input input;
    };
    struct Later {
        bool operator()(const Event &a, const Event &b) const {
            if (a.time != b.time)
                return a.time > b.time;
            if (a.sender != b.sender)
                return a.sender > b.sender;
            return a.seq > b.seq;
        }
    };

    void push(Time t, ReplicaId sender, ReplicaId target, Input in) {
        queue_.push(Event{t, sender, seq_++, target, std::move(in)});
    }

    Time delay(Time now) {
        if (now < cfg_.gst) {
            std::uniform_int_distribution<Time> d(1, cfg_.pre_gst_max);
            return std::min(now + d(rng_), cfg_.gst + cfg_.delta);
        }
        std::uniform_int_distribution<Time> d(1, cfg_.delta);
        return now + d(rng_);
    }

    void deliver(ReplicaId from, ReplicaId to, Message m, Time now) {
        if (to >= nodes_.size())
            return;
        m.sender = from;
        ++trace_.messages;
        push(to == from ? now : delay(now), from, to, Input::message(std::move(m)));
    }

    void apply(ReplicaId self, Effects fx, Time now) {
        const bool correct = !trace_.faulty.contains(self);
        for (auto &note : fx.notes) {
            if (note.kind == "enter-view" && correct)
                trace_.max_view = std::max(trace_.max_view, note.view);
            trace_.records.push_back({now, self, std::move(note.kind), note.view, note.node, std::move(note.detail)});
        }
        for (auto &[node, view] : fx.decisions)
            trace_.decisions.push_back({now, self, view, node});
        for (auto &s : fx.sends) {
            if (s.to) {
                deliver(self, *s.to, std::move(s.msg), now);
            } else {
                for (ReplicaId j = 0; j < nodes_.size(); ++j)
                    deliver(self, j, s.msg, now);
            }
        }
        for (const auto &t : fx.timers)
            push(now + t.delay, self, self, Input::timer(t.token));
    }

    SimConfig cfg_;
    std::mt19937_64 rng_;
    std::vector<std::unique_ptr<Node>> nodes_;
    std::priority_queue<Event, std::vector<Event>, Later> queue_;
    std::uint64_t seq_ = 0;
    SimTrace trace_;
};

} // namespace gbqs::sim
