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
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "gbqs/party.hpp"
#include "gbqs/quorum_checker.hpp"

namespace gbqs::hotstuff {

using ReplicaId = std::uint32_t;
using View = std::uint64_t;
using NodeId = std::uint64_t;
using Time = std::uint64_t;
using Signature = std::vector<std::uint8_t>;

enum class MsgType : std::uint8_t { new_view, prepare, pre_commit, commit, decide, generic, generic_vote };

inline const char *to_string(MsgType t) {
    switch (t) {
    case MsgType::new_view:
        return "new-view";
    case MsgType::prepare:
        return "prepare";
    case MsgType::pre_commit:
        return "pre-commit";
    case MsgType::commit:
        return "commit";
    case MsgType::decide:
        return "decide";
    case MsgType::generic:
        return "generic";
    case MsgType::generic_vote:
        return "generic-vote";
    }
    return "?";
}

/// Round-robin leader rotation.
inline ReplicaId leader_of(View view, std::size_t n) { return static_cast<ReplicaId>(view % n); }

namespace detail {

inline std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

class Hasher {
  public:
    Hasher &add(std::uint64_t v) {
        h_ = mix(h_ ^ v);
        return *this;
    }
    Hasher &add(std::string_view s) {
        add(s.size());
        for (unsigned char c : s)
            h_ = (h_ ^ c) * 0x100000001b3ull;
        return *this;
    }
    Hasher &add(const std::vector<std::uint8_t> &b) {
        add(b.size());
        for (auto c : b)
            h_ = (h_ ^ c) * 0x100000001b3ull;
        return *this;
    }
    std::uint64_t value() const { return mix(h_); }

  private:
    std::uint64_t h_ = 0xcbf29ce484222325ull;
};

} // namespace detail

struct Block;
using BlockPtr = std::shared_ptr<const Block>;

/// Certificate: signatures of a quorum on (type, view, node).
struct QuorumCert {
    MsgType type = MsgType::prepare;
    View view = 0;
    NodeId node = 0;
    BlockPtr block; // the certified node
    std::vector<std::pair<ReplicaId, Signature>> sigs;

    PartySet signers() const {
        PartySet s;
        for (const auto &[id, sig] : sigs)
            s.insert(id);
        return s;
    }

    std::uint64_t digest() const {
        detail::Hasher h;
        h.add(static_cast<std::uint64_t>(type)).add(view).add(node);
        for (const auto &[id, sig] : sigs)
            h.add(id).add(sig);
        return h.value();
    }
};

/// Immutable tree node. Holding the parent pointer keeps the whole branch
/// reachable, so a message carrying a block carries its ancestry.
struct Block {
    NodeId id = 0;
    NodeId parent_id = 0;
    BlockPtr parent;
    std::string cmd;
    QuorumCert justify;
    std::uint64_t height = 0;
    View view = 0;
    ReplicaId proposer = 0;

    static NodeId compute_id(NodeId parent_id, const std::string &cmd, const QuorumCert &justify, std::uint64_t height,
                             View view, ReplicaId proposer) {
        return detail::Hasher{}
            .add(parent_id)
            .add(cmd)
            .add(static_cast<std::uint64_t>(justify.type))
            .add(justify.view)
            .add(justify.node)
            .add(height)
            .add(view)
            .add(proposer)
            .value();
    }
};

inline const BlockPtr &genesis() {
    static const BlockPtr g = [] {
        auto b = std::make_shared<Block>();
        b->cmd = "genesis";
        b->justify.view = 0;
        b->id = Block::compute_id(0, b->cmd, b->justify, 0, 0, 0);
        b->justify.node = b->id;
        return BlockPtr(b);
    }();
    return g;
}

/// Synthetic certificate for genesis at view 0; valid without signatures.
inline QuorumCert genesis_qc(MsgType type = MsgType::prepare) {
    QuorumCert qc;
    qc.type = type;
    qc.view = 0;
    qc.node = genesis()->id;
    qc.block = genesis();
    return qc;
}

inline bool is_genesis_qc(const QuorumCert &qc) { return qc.view == 0 && qc.node == genesis()->id && qc.sigs.empty(); }

/// Block a certificate points to; genesis for the genesis certificate.
inline const BlockPtr &qc_block(const QuorumCert &qc) { return qc.block ? qc.block : genesis(); }

inline BlockPtr make_block(const BlockPtr &parent, std::string cmd, QuorumCert justify, View view,
                           ReplicaId proposer) {
    auto b = std::make_shared<Block>();
    b->parent = parent;
    b->parent_id = parent->id;
    b->cmd = std::move(cmd);
    b->justify = std::move(justify);
    b->height = parent->height + 1;
    b->view = view;
    b->proposer = proposer;
    b->id = Block::compute_id(b->parent_id, b->cmd, b->justify, b->height, b->view, b->proposer);
    return b;
}

/// True iff `b` is `ancestor` or descends from it.
inline bool extends(const BlockPtr &b, NodeId ancestor) {
    for (const Block *p = b.get(); p != nullptr; p = p->parent.get())
        if (p->id == ancestor)
            return true;
    return false;
}

/// Lexicographic (view, height) used to order nodes across views.
using Rank = std::pair<View, std::uint64_t>;
inline Rank rank_of(const BlockPtr &b) { return {b->view, b->height}; }

/// Bytes covered by a vote signature.
inline std::string vote_bytes(MsgType type, View view, NodeId node) {
    std::string s = "vote:";
    s += to_string(type);
    s += ':' + std::to_string(view) + ':' + std::to_string(node);
    return s;
}

class Signer {
  public:
    virtual ~Signer() = default;
    virtual Signature sign(ReplicaId who, std::string_view bytes) const = 0;
    virtual bool verify(ReplicaId who, std::string_view bytes, const Signature &sig) const = 0;
};

/// Deterministic keyed-hash signer for simulation. Not cryptographically
/// secure; every replica's key derives from one seed.
class MacSigner final : public Signer {
  public:
    explicit MacSigner(std::uint64_t seed = 0x5eed) : seed_(seed) {}

    Signature sign(ReplicaId who, std::string_view bytes) const override {
        const std::uint64_t key = detail::mix(seed_ ^ detail::mix(who + 1));
        const std::uint64_t a = detail::Hasher{}.add(key).add(bytes).value();
        const std::uint64_t b = detail::Hasher{}.add(a).add(key ^ 0xa5a5a5a5a5a5a5a5ull).value();
        Signature sig(16);
        for (int i = 0; i < 8; ++i) {
            sig[i] = static_cast<std::uint8_t>(a >> (8 * i));
            sig[8 + i] = static_cast<std::uint8_t>(b >> (8 * i));
        }
        return sig;
    }
    bool verify(ReplicaId who, std::string_view bytes, const Signature &sig) const override {
        return sig == sign(who, bytes);
    }

  private:
    std::uint64_t seed_;
};

struct Message {
    MsgType type = MsgType::new_view;
    View view = 0;
    BlockPtr node;
    std::optional<QuorumCert> justify;
    /// Set on votes: the voter and its signature over (type, view, node id).
    bool vote = false;
    ReplicaId voter = 0;
    Signature sig;
    /// Filled in by the network; links are authenticated.
    ReplicaId sender = 0;

    NodeId node_id() const { return node ? node->id : 0; }
};

/// Validates blocks and certificates against one configuration, remembering
/// what it has already accepted.
class Validator {
  public:
    Validator(std::shared_ptr<const QuorumChecker> checker, std::shared_ptr<const Signer> signer)
        : checker_(std::move(checker)), signer_(std::move(signer)) {
        valid_blocks_.insert(genesis()->id);
    }

    const QuorumChecker &checker() const { return *checker_; }
    const Signer &signer() const { return *signer_; }
    std::size_t n() const { return checker_->universe_size(); }

    /// Hashes, heights and parent links all the way back to a known block.
    bool block_ok(const BlockPtr &b) {
        if (!b)
            return false;
        std::vector<const Block *> pending;
        const Block *p = b.get();
        while (!valid_blocks_.contains(p->id)) {
            if (!p->parent || p->parent->id != p->parent_id || p->height != p->parent->height + 1 ||
                p->view < p->parent->view)
                return false;
            if (Block::compute_id(p->parent_id, p->cmd, p->justify, p->height, p->view, p->proposer) != p->id)
                return false;
            pending.push_back(p);
            p = p->parent.get();
        }
        // The certificate inside must cover an ancestor of this node.
        for (const Block *q : pending) {
            if (q->justify.block && q->justify.block->id != q->justify.node)
                return false;
            if (!extends(q->parent, q->justify.node))
                return false;
        }
        for (const Block *q : pending)
            valid_blocks_.insert(q->id);
        return true;
    }

    /// Signatures verify, signers are distinct replicas, and they form a quorum.
    bool qc_ok(const QuorumCert &qc) {
        if (is_genesis_qc(qc))
            return true;
        if (!qc.block || qc.block->id != qc.node || !block_ok(qc.block))
            return false;
        const std::uint64_t d = qc.digest();
        if (valid_qcs_.contains(d))
            return true;
        const std::string bytes = vote_bytes(qc.type, qc.view, qc.node);
        PartySet seen(n());
        for (const auto &[id, sig] : qc.sigs) {
            if (id >= n() || seen.contains(id))
                return false;
            if (!signer_->verify(id, bytes, sig))
                return false;
            seen.insert(id);
        }
        if (!checker_->is_quorum(seen))
            return false;
        valid_qcs_.insert(d);
        return true;
    }

    /// Vote signed by its sender; generic votes sign as `generic`.
    bool vote_ok(const Message &m) {
        const MsgType t = m.type == MsgType::generic_vote ? MsgType::generic : m.type;
        return m.vote && m.node && m.voter == m.sender && m.voter < n() &&
               signer_->verify(m.voter, vote_bytes(t, m.view, m.node->id), m.sig);
    }

  private:
    std::shared_ptr<const QuorumChecker> checker_;
    std::shared_ptr<const Signer> signer_;
    std::unordered_set<NodeId> valid_blocks_;
    std::unordered_set<std::uint64_t> valid_qcs_;
};

/// Certificate from collected votes, signatures ordered by replica id.
inline QuorumCert make_qc(MsgType type, View view, const BlockPtr &node,
                          std::vector<std::pair<ReplicaId, Signature>> sigs) {
    std::sort(sigs.begin(), sigs.end(), [](const auto &a, const auto &b) { return a.first < b.first; });
    QuorumCert qc;
    qc.type = type;
    qc.view = view;
    qc.node = node->id;
    qc.block = node;
    qc.sigs = std::move(sigs);
    return qc;
}

} // namespace gbqs::hotstuff
