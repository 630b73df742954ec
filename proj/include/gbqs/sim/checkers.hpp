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
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gbqs/sim/simulator.hpp"

namespace gbqs::sim {

struct SafetyReport {
    bool safe = true;
    std::size_t decisions = 0;
    /// Two decisions on conflicting branches when unsafe.
    std::optional<Decision> first;
    std::optional<Decision> second;

    std::string describe() const {
        if (safe)
            return "safe (" + std::to_string(decisions) + " decisions)";
        std::ostringstream os;
        os << "conflict: replica " << first->replica << " decided " << std::hex << first->node->id << std::dec
           << " at height " << first->node->height << ", replica " << second->replica << " decided " << std::hex
           << second->node->id << std::dec << " at height " << second->node->height;
        return os.str();
    }
};

/// Every decision by a correct replica lies on one chain.
inline SafetyReport check_safety(const SimTrace &t) {
    SafetyReport r;
    const Decision *top = nullptr;
    for (const auto &d : t.decisions) {
        if (t.faulty.contains(d.replica))
            continue;
        ++r.decisions;
        if (!top || d.node->height > top->node->height)
            top = &d;
    }
    if (!top)
        return r;
    for (const auto &d : t.decisions) {
        if (t.faulty.contains(d.replica) || extends(top->node, d.node->id))
            continue;
        r.safe = false;
        r.first = *top;
        r.second = d;
        break;
    }
    return r;
}

struct Stall {
    View view = 0;
    ReplicaId leader = 0;
    Time window_start = 0;
    Time window_end = 0;
};

struct LivenessReport {
    bool live = true;
    /// Views after GST with a correct leader in which the premise held: every
    /// correct replica was in the view and either someone decided within the
    /// window or nobody left before it closed.
    std::size_t eligible_views = 0;
    std::size_t deciding_views = 0;
    std::vector<Stall> stalls;

    std::string describe() const {
        std::ostringstream os;
        os << eligible_views << " eligible views, " << deciding_views << " with a decision";
        for (const auto &s : stalls)
            os << "; stall in view " << s.view << " (leader " << s.leader << ", " << s.window_start << ".."
               << s.window_end << ")";
        return os.str();
    }
};

/// In each view led by a correct replica: once every correct replica has
/// entered it (and GST has passed), some correct replica decides within
/// `window` ticks unless a correct replica leaves the view before then.
inline LivenessReport check_liveness(const SimTrace &t, Time gst, Time window) {
    struct Span {
        std::map<ReplicaId, Time> enter;
        std::map<ReplicaId, Time> leave;
        std::vector<Time> decided;
    };
    std::map<View, Span> spans;
    std::map<ReplicaId, View> current;
    for (const auto &r : t.records) {
        if (t.faulty.contains(r.replica))
            continue;
        if (r.kind == "enter-view") {
            if (auto it = current.find(r.replica); it != current.end())
                spans[it->second].leave.emplace(r.replica, r.time);
            current[r.replica] = r.view;
            spans[r.view].enter.emplace(r.replica, r.time);
        } else if (r.kind == "decide") {
            spans[r.view].decided.push_back(r.time);
        }
    }
    std::size_t correct = 0;
    for (ReplicaId i = 0; i < t.n; ++i)
        correct += !t.faulty.contains(i);

    LivenessReport rep;
    for (const auto &[view, span] : spans) {
        const ReplicaId leader = leader_of(view, t.n);
        if (t.faulty.contains(leader) || span.enter.size() < correct)
            continue;
        Time start = gst;
        for (const auto &[id, at] : span.enter)
            start = std::max(start, at);
        const Time close = start + window;
        const bool decided = std::any_of(span.decided.begin(), span.decided.end(),
                                         [&](Time at) { return at >= start && at <= close; });
        if (decided) {
            ++rep.eligible_views;
            ++rep.deciding_views;
            continue;
        }
        Time end = t.end_time;
        for (const auto &[id, at] : span.leave)
            end = std::min(end, at);
        if (end < close)
            continue;
        ++rep.eligible_views;
        rep.live = false;
        rep.stalls.push_back({view, leader, start, close});
    }
    return rep;
}

} // namespace gbqs::sim
