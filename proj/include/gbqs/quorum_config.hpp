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
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gbqs/constructions.hpp"
#include "gbqs/error.hpp"
#include "gbqs/formula.hpp"
#include "gbqs/party.hpp"

namespace gbqs {

/// Diagnostic for a rejected quorum-spec document.
class SpecError : public Error {
  public:
    enum class Kind { malformed, unknown_key, threshold_range, undeclared_party, duplicate, bad_version };

    SpecError(Kind kind, std::string pointer, const std::string &msg)
        : Error(std::string(kind_name(kind)) + " at " + (pointer.empty() ? "/" : pointer) + ": " + msg), kind_(kind),
          pointer_(std::move(pointer)) {}

    Kind kind() const { return kind_; }
    /// JSON pointer to the offending value ("" for the document root).
    const std::string &pointer() const { return pointer_; }

    static const char *kind_name(Kind k) {
        switch (k) {
        case Kind::malformed:
            return "malformed";
        case Kind::unknown_key:
            return "unknown key";
        case Kind::threshold_range:
            return "threshold out of range";
        case Kind::undeclared_party:
            return "undeclared party";
        case Kind::duplicate:
            return "duplicate";
        case Kind::bad_version:
            return "unsupported version";
        }
        return "error";
    }

  private:
    Kind kind_;
    std::string pointer_;
};

/// A parsed quorum specification.
struct QuorumSpec {
    Universe universe;
    /// Quorum formula over party ids.
    Formula formula;
    /// Present when the document declares attributes; `attr_formula` is then
    /// over attribute indices and `formula` is its party-level lowering.
    std::optional<AttributeSystem> attributes;
    std::optional<Formula> attr_formula;
    /// False when the universe was inferred from the literals.
    bool declared_parties = false;
};

namespace detail {

using json = nlohmann::ordered_json;

inline std::string child_ptr(const std::string &base, const std::string &key) {
    std::string esc;
    for (char c : key) {
        if (c == '~')
            esc += "~0";
        else if (c == '/')
            esc += "~1";
        else
            esc += c;
    }
    return base + "/" + esc;
}
inline std::string child_ptr(const std::string &base, std::size_t i) { return base + "/" + std::to_string(i); }

class SpecParser {
  public:
    using Kind = SpecError::Kind;

    /// `resolve` maps a literal name to an id or throws.
    template <class Resolve>
    Formula node(const json &j, const std::string &at, Resolve &&resolve) {
        if (j.is_string())
            return Formula::literal(resolve(j.get<std::string>(), at));
        if (!j.is_object())
            throw SpecError(Kind::malformed, at, "expected a party name or an operator object");
        if (j.contains("threshold")) {
            for (auto it = j.begin(); it != j.end(); ++it)
                if (it.key() != "threshold" && it.key() != "of")
                    throw SpecError(Kind::unknown_key, child_ptr(at, it.key()), "unexpected key '" + it.key() + "'");
            const json &k = j.at("threshold");
            if (!k.is_number_integer())
                throw SpecError(Kind::malformed, child_ptr(at, "threshold"), "threshold must be an integer");
            if (!j.contains("of"))
                throw SpecError(Kind::malformed, at, "threshold operator needs an \"of\" list");
            auto ch = children(j.at("of"), child_ptr(at, "of"), resolve);
            const auto kv = k.get<long long>();
            if (kv < 1 || static_cast<unsigned long long>(kv) > ch.size())
                throw SpecError(Kind::threshold_range, child_ptr(at, "threshold"),
                                "threshold " + std::to_string(kv) + " not in [1, " + std::to_string(ch.size()) + "]");
            return Formula::threshold(static_cast<std::size_t>(kv), std::move(ch));
        }
        if (j.size() != 1)
            throw SpecError(j.empty() ? Kind::malformed : Kind::unknown_key, at,
                            "operator object needs exactly one of threshold/and/or");
        const std::string key = j.begin().key();
        if (key == "and")
            return Formula::conjunction(children(j.at("and"), child_ptr(at, "and"), resolve));
        if (key == "or")
            return Formula::disjunction(children(j.at("or"), child_ptr(at, "or"), resolve));
        if (key == "of")
            throw SpecError(Kind::malformed, at, "\"of\" without \"threshold\"");
        throw SpecError(Kind::unknown_key, child_ptr(at, key), "unexpected key '" + key + "'");
    }

  private:
    template <class Resolve>
    std::vector<Formula> children(const json &j, const std::string &at, Resolve &&resolve) {
        if (!j.is_array())
            throw SpecError(Kind::malformed, at, "expected an array of operands");
        if (j.empty())
            throw SpecError(Kind::threshold_range, at, "operator needs at least one operand");
        std::vector<Formula> out;
        out.reserve(j.size());
        for (std::size_t i = 0; i < j.size(); ++i)
            out.push_back(node(j[i], child_ptr(at, i), resolve));
        return out;
    }
};

inline std::vector<std::string> string_list(const json &j, const std::string &at) {
    if (!j.is_array())
        throw SpecError(SpecError::Kind::malformed, at, "expected an array of names");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_string() || j[i].get<std::string>().empty())
            throw SpecError(SpecError::Kind::malformed, child_ptr(at, i), "expected a non-empty string");
        out.push_back(j[i].get<std::string>());
    }
    return out;
}

} // namespace detail

/// Parses an already-decoded document. `extra_keys` lists top-level keys
/// owned by a caller (e.g. an experiment section) that are skipped here.
inline QuorumSpec parse_spec_json(const nlohmann::ordered_json &doc, const std::vector<std::string> &extra_keys = {}) {
    using Kind = SpecError::Kind;
    using detail::child_ptr;
    QuorumSpec spec;
    detail::SpecParser p;

    const bool wrapped = doc.is_object() && doc.contains("quorum");
    if (!wrapped) {
        spec.formula = p.node(doc, "", [&](const std::string &name, const std::string &) {
            return spec.universe.intern(name);
        });
        return spec;
    }

    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const std::string &k = it.key();
        if (k != "v" && k != "parties" && k != "quorum" && k != "attributes" &&
            std::find(extra_keys.begin(), extra_keys.end(), k) == extra_keys.end())
            throw SpecError(Kind::unknown_key, child_ptr("", k), "unexpected key '" + k + "'");
    }
    if (doc.contains("v")) {
        const auto &v = doc.at("v");
        if (!v.is_number_integer() || v.get<long long>() != 1)
            throw SpecError(Kind::bad_version, "/v", "only version 1 is supported");
    }
    if (doc.contains("parties")) {
        spec.declared_parties = true;
        const auto names = detail::string_list(doc.at("parties"), "/parties");
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (spec.universe.contains(names[i]))
                throw SpecError(Kind::duplicate, child_ptr("/parties", i), "party '" + names[i] + "' listed twice");
            spec.universe.add(names[i]);
        }
    }
    auto party = [&](const std::string &name, const std::string &at) -> PartyId {
        if (spec.declared_parties) {
            if (!spec.universe.contains(name))
                throw SpecError(Kind::undeclared_party, at, "party '" + name + "' is not in \"parties\"");
            return spec.universe.id(name);
        }
        return spec.universe.intern(name);
    };

    if (!doc.contains("attributes")) {
        spec.formula = p.node(doc.at("quorum"), "/quorum", party);
        return spec;
    }

    const auto &attrs = doc.at("attributes");
    if (!attrs.is_object() || attrs.empty())
        throw SpecError(Kind::malformed, "/attributes", "expected a non-empty object");
    AttributeSystem sys;
    for (auto it = attrs.begin(); it != attrs.end(); ++it) {
        const std::string at = child_ptr("/attributes", it.key());
        const auto &a = it.value();
        if (!a.is_object())
            throw SpecError(Kind::malformed, at, "expected {\"holders\": [...], \"min\": n}");
        for (auto kt = a.begin(); kt != a.end(); ++kt)
            if (kt.key() != "holders" && kt.key() != "min")
                throw SpecError(Kind::unknown_key, child_ptr(at, kt.key()), "unexpected key '" + kt.key() + "'");
        if (!a.contains("holders") || !a.contains("min"))
            throw SpecError(Kind::malformed, at, "attribute needs \"holders\" and \"min\"");
        AttributeSystem::Attribute attr{it.key(), {}, 0};
        const auto holders = detail::string_list(a.at("holders"), child_ptr(at, "holders"));
        for (std::size_t i = 0; i < holders.size(); ++i) {
            const PartyId id = party(holders[i], child_ptr(child_ptr(at, "holders"), i));
            if (std::find(attr.holders.begin(), attr.holders.end(), id) != attr.holders.end())
                throw SpecError(Kind::duplicate, child_ptr(child_ptr(at, "holders"), i),
                                "holder '" + holders[i] + "' listed twice");
            attr.holders.push_back(id);
        }
        const auto &mn = a.at("min");
        if (!mn.is_number_integer())
            throw SpecError(Kind::malformed, child_ptr(at, "min"), "min must be an integer");
        const auto mv = mn.get<long long>();
        if (mv < 1 || static_cast<unsigned long long>(mv) > attr.holders.size())
            throw SpecError(Kind::threshold_range, child_ptr(at, "min"),
                            "min " + std::to_string(mv) + " not in [1, " + std::to_string(attr.holders.size()) + "]");
        attr.min = static_cast<std::size_t>(mv);
        sys.attributes.push_back(std::move(attr));
    }
    for (const auto &a : sys.attributes)
        if (spec.universe.contains(a.name))
            throw SpecError(Kind::duplicate, child_ptr("/attributes", a.name),
                            "attribute '" + a.name + "' shadows a party");
    spec.attr_formula = p.node(doc.at("quorum"), "/quorum", [&](const std::string &name, const std::string &at) {
        for (std::size_t i = 0; i < sys.attributes.size(); ++i)
            if (sys.attributes[i].name == name)
                return static_cast<PartyId>(i);
        throw SpecError(Kind::undeclared_party, at, "'" + name + "' is not a declared attribute");
    });
    spec.formula = lower_attributes(sys, *spec.attr_formula);
    spec.attributes = std::move(sys);
    return spec;
}

inline QuorumSpec parse_spec(std::string_view text) {
    nlohmann::ordered_json doc;
    try {
        doc = nlohmann::ordered_json::parse(text.begin(), text.end());
    } catch (const nlohmann::ordered_json::parse_error &e) {
        throw SpecError(SpecError::Kind::malformed, "", "invalid JSON (byte " + std::to_string(e.byte) + ")");
    }
    return parse_spec_json(doc);
}

namespace detail {

inline nlohmann::ordered_json emit_node(const Formula &f, const std::vector<std::string> &names) {
    if (f.is_literal()) {
        if (f.party() >= names.size())
            throw InvalidArgument("formula names party #" + std::to_string(f.party()) + " outside the universe");
        return names[f.party()];
    }
    nlohmann::ordered_json ch = nlohmann::ordered_json::array();
    for (const auto &c : f.children())
        ch.push_back(emit_node(c, names));
    nlohmann::ordered_json out = nlohmann::ordered_json::object();
    switch (f.kind()) {
    case Formula::Kind::conjunction:
        out["and"] = std::move(ch);
        break;
    case Formula::Kind::disjunction:
        out["or"] = std::move(ch);
        break;
    default:
        out["threshold"] = f.k();
        out["of"] = std::move(ch);
    }
    return out;
}

inline std::vector<std::string> party_names(const Formula &f, const Universe *u) {
    if (u)
        return u->names();
    std::vector<std::string> names;
    for (std::size_t i = 0; i < f.party_bound(); ++i)
        names.push_back("p" + std::to_string(i + 1));
    return names;
}

} // namespace detail

/// Canonical document: keys in the order v, parties, quorum; two-space indent;
/// trailing newline. Without a universe parties are named p1..pn.
inline std::string emit_spec(const Formula &f, const Universe *u = nullptr) {
    const auto names = detail::party_names(f, u);
    nlohmann::ordered_json doc = nlohmann::ordered_json::object();
    doc["v"] = 1;
    doc["parties"] = names;
    doc["quorum"] = detail::emit_node(f, names);
    return doc.dump(2) + "\n";
}

/// Canonical document for a parsed spec, attributes included.
inline std::string emit_spec(const QuorumSpec &spec) {
    if (!spec.attributes)
        return emit_spec(spec.formula, &spec.universe);
    const auto &names = spec.universe.names();
    nlohmann::ordered_json doc = nlohmann::ordered_json::object();
    doc["v"] = 1;
    doc["parties"] = names;
    nlohmann::ordered_json attrs = nlohmann::ordered_json::object();
    std::vector<std::string> attr_names;
    for (const auto &a : spec.attributes->attributes) {
        nlohmann::ordered_json h = nlohmann::ordered_json::array();
        for (PartyId p : a.holders)
            h.push_back(names.at(p));
        attrs[a.name] = {{"holders", std::move(h)}, {"min", a.min}};
        attr_names.push_back(a.name);
    }
    doc["attributes"] = std::move(attrs);
    doc["quorum"] = detail::emit_node(*spec.attr_formula, attr_names);
    return doc.dump(2) + "\n";
}

} // namespace gbqs
