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

#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gbqs/hotstuff/types.hpp"

namespace gbqs::hotstuff {

/// One trace record: (time, replica, kind, view, node id, detail).
struct TraceRecord {
    Time time = 0;
    ReplicaId replica = 0;
    std::string kind;
    View view = 0;
    NodeId node = 0;
    std::string detail;

    friend bool operator==(const TraceRecord &, const TraceRecord &) = default;
};

/// Tab-separated, one record per line; node ids in hex.
inline void write_record(std::ostream &os, const TraceRecord &r) {
    std::ostringstream node;
    node << std::hex << r.node;
    os << r.time << '\t' << r.replica << '\t' << r.kind << '\t' << r.view << '\t' << node.str() << '\t' << r.detail
       << '\n';
}

inline TraceRecord parse_record(const std::string &line) {
    std::istringstream is(line);
    TraceRecord r;
    std::string node;
    if (!(is >> r.time >> r.replica >> r.kind >> r.view >> node))
        throw InvalidArgument("bad trace line: " + line);
    r.node = std::stoull(node, nullptr, 16);
    std::getline(is >> std::ws, r.detail);
    return r;
}

/// What a replica asks the environment to do after one step.
struct Effects {
    struct Send {
        std::optional<ReplicaId> to; // empty: broadcast to every replica, self included
        Message msg;
    };
    struct Timer {
        Time delay = 0;
        std::uint64_t token = 0;
    };
    struct Note {
        std::string kind;
        View view = 0;
        NodeId node = 0;
        std::string detail;
    };

    std::vector<Send> sends;
    std::vector<Timer> timers;
    std::vector<std::pair<BlockPtr, View>> decisions;
    std::vector<Note> notes;

    void send(ReplicaId to, Message m) { sends.push_back({to, std::move(m)}); }
    void broadcast(Message m) { sends.push_back({std::nullopt, std::move(m)}); }
    void note(std::string kind, View view, NodeId node = 0, std::string detail = {}) {
        notes.push_back({std::move(kind), view, node, std::move(detail)});
    }
};

/// Event fed to a replica.
struct Input {
    enum class Kind { start, message, timer };
    Kind kind = Kind::start;
    Message msg;
    std::uint64_t token = 0;

    static Input start() { return {}; }
    static Input message(Message m) { return {Kind::message, std::move(m), 0}; }
    static Input timer(std::uint64_t token) { return {Kind::timer, {}, token}; }
};

/// Anything the simulator can drive: correct replicas and fault drivers alike.
class Node {
  public:
    virtual ~Node() = default;
    virtual Effects step(const Input &in, Time now) = 0;
    virtual View current_view() const = 0;
};

} // namespace gbqs::hotstuff
