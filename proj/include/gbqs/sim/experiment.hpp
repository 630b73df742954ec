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
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gbqs/quorum_checker.hpp"
#include "gbqs/quorum_config.hpp"
#include "gbqs/sim/checkers.hpp"
#include "gbqs/sim/faults.hpp"

namespace gbqs::sim {

/// A quorum spec plus a "simulation" section, swept over consecutive seeds.
struct Experiment {
    Universe universe;
    std::optional<QuorumSpec> spec; // absent for counting quorums
    Encoding encoding = Encoding::mbf;
    SimConfig base;
    std::size_t seeds = 1;

    SimConfig config(std::size_t i) const {
        SimConfig c = base;
        c.seed = base.seed + i;
        return c;
    }
};

struct RunVerdict {
    std::uint64_t seed = 0;
    SafetyReport safety;
    LivenessReport liveness;
    std::size_t decisions = 0;
    View views = 0;
    std::size_t messages = 0;
    bool truncated = false;

    bool ok() const { return safety.safe && liveness.live; }
};

inline RunVerdict judge(const SimConfig &cfg, const SimTrace &t) {
    RunVerdict v;
    v.seed = cfg.seed;
    v.safety = check_safety(t);
    v.liveness = check_liveness(t, cfg.gst, cfg.liveness_window());
    v.decisions = v.safety.decisions;
    v.views = t.max_view;
    v.messages = t.messages;
    v.truncated = t.truncated;
    return v;
}

inline RunVerdict run_one(const SimConfig &cfg) { return judge(cfg, simulate(cfg)); }

inline std::vector<RunVerdict> run_experiment(const Experiment &e) {
    std::vector<RunVerdict> out;
    out.reserve(e.seeds);
    for (std::size_t i = 0; i < e.seeds; ++i)
        out.push_back(run_one(e.config(i)));
    return out;
}

namespace detail {

using json = nlohmann::ordered_json;
using gbqs::detail::child_ptr;

inline std::uint64_t uint_field(const json &sec, const char *key, const std::string &at, std::uint64_t def) {
    if (!sec.contains(key))
        return def;
    const auto &v = sec.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
        throw SpecError(SpecError::Kind::malformed, child_ptr(at, key), std::string(key) + " must be a non-negative integer");
    return v.get<std::uint64_t>();
}

inline std::string string_field(const json &sec, const char *key, const std::string &at, std::string def) {
    if (!sec.contains(key))
        return def;
    const auto &v = sec.at(key);
    if (!v.is_string())
        throw SpecError(SpecError::Kind::malformed, child_ptr(at, key), std::string(key) + " must be a string");
    return v.get<std::string>();
}

} // namespace detail

/// Parses an experiment document. The "simulation" section accepts
/// protocol, encoding, counting {n, f}, seed, seeds, gst, delta, pre_gst_max,
/// horizon, tf, base_timeout, blocks_per_view and faults [{party, behavior, crash_at}].
inline Experiment parse_experiment_json(const nlohmann::ordered_json &doc) {
    using Kind = SpecError::Kind;
    using gbqs::detail::child_ptr;
    if (!doc.is_object() || !doc.contains("simulation"))
        throw SpecError(Kind::malformed, "", "experiment needs a \"simulation\" section");
    const auto &sec = doc.at("simulation");
    const std::string at = "/simulation";
    if (!sec.is_object())
        throw SpecError(Kind::malformed, at, "expected an object");
    static const std::vector<std::string> known = {"protocol", "encoding", "counting", "seed",    "seeds",
                                                   "gst",      "delta",    "pre_gst_max", "horizon", "tf",
                                                   "base_timeout", "blocks_per_view", "faults"};
    for (auto it = sec.begin(); it != sec.end(); ++it)
        if (std::find(known.begin(), known.end(), it.key()) == known.end())
            throw SpecError(Kind::unknown_key, child_ptr(at, it.key()), "unexpected key '" + it.key() + "'");

    Experiment e;
    auto wrap = [&](const char *key, auto &&fn) {
        try {
            return fn();
        } catch (const InvalidArgument &err) {
            throw SpecError(Kind::malformed, child_ptr(at, key), err.what());
        }
    };
    e.encoding = wrap("encoding", [&] { return parse_encoding(detail::string_field(sec, "encoding", at, "mbf")); });
    e.base.variant =
        wrap("protocol", [&] { return parse_variant(detail::string_field(sec, "protocol", at, "basic")); });

    if (e.encoding == Encoding::counting) {
        if (!sec.contains("counting") || !sec.at("counting").is_object())
            throw SpecError(Kind::malformed, child_ptr(at, "counting"), "counting encoding needs {\"n\": .., \"f\": ..}");
        const auto &c = sec.at("counting");
        const std::string cat = child_ptr(at, "counting");
        for (auto it = c.begin(); it != c.end(); ++it)
            if (it.key() != "n" && it.key() != "f")
                throw SpecError(Kind::unknown_key, child_ptr(cat, it.key()), "unexpected key '" + it.key() + "'");
        const auto n = detail::uint_field(c, "n", cat, 0);
        const auto f = detail::uint_field(c, "f", cat, 0);
        if (n == 0 || 3 * f >= n)
            throw SpecError(Kind::threshold_range, cat, "counting quorums need n > 3f");
        for (auto it = doc.begin(); it != doc.end(); ++it)
            if (it.key() != "v" && it.key() != "parties" && it.key() != "simulation")
                throw SpecError(Kind::unknown_key, child_ptr("", it.key()),
                                "unexpected key '" + it.key() + "' for counting quorums");
        if (doc.contains("parties")) {
            for (const auto &name : gbqs::detail::string_list(doc.at("parties"), "/parties"))
                e.universe.add(name);
            if (e.universe.size() != n)
                throw SpecError(Kind::malformed, "/parties", "expected " + std::to_string(n) + " parties");
        } else {
            e.universe = Universe::numbered(n);
        }
        e.base.checker = std::make_shared<CountingChecker>(n, f);
    } else {
        if (sec.contains("counting"))
            throw SpecError(Kind::unknown_key, child_ptr(at, "counting"), "only valid with encoding \"counting\"");
        e.spec = parse_spec_json(doc, {"simulation"});
        e.universe = e.spec->universe;
        e.base.checker = make_checker(e.encoding, e.spec->formula, e.universe.size());
    }

    e.base.seed = detail::uint_field(sec, "seed", at, 1);
    e.seeds = detail::uint_field(sec, "seeds", at, 1);
    if (e.seeds == 0)
        throw SpecError(Kind::malformed, child_ptr(at, "seeds"), "seeds must be at least 1");
    e.base.gst = detail::uint_field(sec, "gst", at, 0);
    e.base.delta = detail::uint_field(sec, "delta", at, 10);
    e.base.pre_gst_max = detail::uint_field(sec, "pre_gst_max", at, 100);
    e.base.horizon = detail::uint_field(sec, "horizon", at, 3000);
    e.base.tf = detail::uint_field(sec, "tf", at, 0);
    e.base.base_timeout = detail::uint_field(sec, "base_timeout", at, 0);
    e.base.blocks_per_view = detail::uint_field(sec, "blocks_per_view", at, 0);
    if (e.base.delta == 0 || e.base.pre_gst_max == 0)
        throw SpecError(Kind::malformed, at, "delays must be at least one tick");

    if (sec.contains("faults")) {
        const auto &fs = sec.at("faults");
        const std::string fat = child_ptr(at, "faults");
        if (!fs.is_array())
            throw SpecError(Kind::malformed, fat, "expected a list");
        PartySet seen(e.universe.size());
        for (std::size_t i = 0; i < fs.size(); ++i) {
            const std::string p = child_ptr(fat, i);
            const auto &f = fs[i];
            if (!f.is_object() || !f.contains("party") || !f.contains("behavior"))
                throw SpecError(Kind::malformed, p, "fault needs \"party\" and \"behavior\"");
            for (auto it = f.begin(); it != f.end(); ++it)
                if (it.key() != "party" && it.key() != "behavior" && it.key() != "crash_at")
                    throw SpecError(Kind::unknown_key, child_ptr(p, it.key()), "unexpected key '" + it.key() + "'");
            FaultSpec spec;
            const std::string name = detail::string_field(f, "party", p, "");
            if (!e.universe.contains(name))
                throw SpecError(Kind::undeclared_party, child_ptr(p, "party"), "unknown party '" + name + "'");
            spec.replica = static_cast<ReplicaId>(e.universe.id(name));
            if (seen.contains(spec.replica))
                throw SpecError(Kind::duplicate, child_ptr(p, "party"), "party '" + name + "' has two faults");
            seen.insert(spec.replica);
            try {
                spec.behavior = parse_behavior(detail::string_field(f, "behavior", p, ""));
            } catch (const InvalidArgument &err) {
                throw SpecError(Kind::malformed, child_ptr(p, "behavior"), err.what());
            }
            spec.crash_at = detail::uint_field(f, "crash_at", p, 0);
            e.base.faults.push_back(spec);
        }
    }
    return e;
}

inline Experiment parse_experiment(std::string_view text) {
    nlohmann::ordered_json doc;
    try {
        doc = nlohmann::ordered_json::parse(text.begin(), text.end());
    } catch (const nlohmann::ordered_json::parse_error &e) {
        throw SpecError(SpecError::Kind::malformed, "", "invalid JSON (byte " + std::to_string(e.byte) + ")");
    }
    return parse_experiment_json(doc);
}

} // namespace gbqs::sim
