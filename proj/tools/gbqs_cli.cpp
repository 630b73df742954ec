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

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gbqs/gbqs.hpp"

namespace {

using namespace gbqs;

constexpr int exit_ok = 0;
constexpr int exit_violation = 1;
constexpr int exit_usage = 2;

std::string slurp(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InvalidArgument("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Writes to --out when given, otherwise stdout.
void emit(const std::string &out, const std::string &text) {
    if (out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f)
        throw InvalidArgument("cannot write " + out);
    f << text;
}

PartySet parse_subset(const Universe &u, const std::string &list) {
    PartySet s(u.size());
    std::stringstream ss(list);
    std::string name;
    while (std::getline(ss, name, ',')) {
        name.erase(0, name.find_first_not_of(" \t"));
        name.erase(name.find_last_not_of(" \t") + 1);
        if (name.empty())
            continue;
        if (!u.contains(name))
            throw InvalidArgument("unknown party '" + name + "'");
        s.insert(u.id(name));
    }
    return s;
}

Msp spec_msp(const QuorumSpec &spec) {
    if (spec.attributes)
        return attribute_msp(*spec.attributes, *spec.attr_formula);
    return build_msp(spec.formula);
}

int cmd_check(const std::string &path, const std::string &subset, const std::string &enc) {
    const QuorumSpec spec = parse_spec(slurp(path));
    const PartySet s = parse_subset(spec.universe, subset);
    const Encoding e = parse_encoding(enc);
    bool verdict = false;
    std::string extra;
    switch (e) {
    case Encoding::mbf:
        verdict = spec.formula.eval(s);
        break;
    case Encoding::msp: {
        const auto w = accepts(spec_msp(spec), s);
        verdict = w.accepted;
        if (verdict)
            extra = "redundant=" + spec.universe.format(w.redundant);
        break;
    }
    case Encoding::msp_lup: {
        const LupChecker checker(spec_msp(spec));
        const auto w = checker.factored() ? accepts_lup(checker, s) : accepts(checker.msp(), s);
        verdict = w.accepted;
        if (verdict)
            extra = "redundant=" + spec.universe.format(w.redundant);
        break;
    }
    case Encoding::counting:
        throw InvalidArgument("check needs a formula encoding (mbf, msp or msp-lup)");
    }
    std::cout << (verdict ? "quorum" : "not-quorum") << '\n';
    if (!extra.empty())
        std::cout << extra << '\n';
    return exit_ok;
}

int cmd_microbench(const std::string &path, std::size_t trials, std::uint64_t seed, const std::string &enc) {
    if (trials == 0)
        throw InvalidArgument("--trials must be at least 1");
    const QuorumSpec spec = parse_spec(slurp(path));
    const std::size_t n = spec.universe.size();
    std::vector<BenchReport> rows;
    if (enc.empty()) {
        rows = bench_formula(spec.formula, n, trials, seed);
    } else {
        const Encoding e = parse_encoding(enc);
        auto checker = make_checker(e, spec.formula, n);
        const std::size_t bytes = e == Encoding::mbf ? nlohmann::ordered_json::parse(emit_spec(spec)).dump().size()
                                                     : dump(build_msp(spec.formula)).size();
        rows.push_back(bench_checker(*checker, bytes, trials, seed));
    }
    std::cout << std::left << std::setw(10) << "encoding" << std::right << std::setw(12) << "memory(B)"
              << std::setw(12) << "median(ns)" << std::setw(12) << "mean(ns)" << std::setw(9) << "trials"
              << std::setw(9) << "quorums" << '\n';
    for (const auto &r : rows)
        std::cout << std::left << std::setw(10) << r.encoding << std::right << std::setw(12) << r.memory_bytes()
                  << std::setw(12) << std::fixed << std::setprecision(1) << r.median_ns << std::setw(12) << r.mean_ns
                  << std::setw(9) << r.trials << std::setw(9) << r.quorums << '\n';
    for (const auto &r : rows)
        std::cout << "encoding=" << r.encoding << " memory=" << r.memory_bytes() << " serialized=" << r.serialized_bytes
                  << " live=" << r.live_bytes << " median_ns=" << r.median_ns << " mean_ns=" << r.mean_ns
                  << " trials=" << r.trials << " seed=" << r.seed << " quorums=" << r.quorums << '\n';
    return exit_ok;
}

int cmd_simulate(const std::string &path, const std::string &out, std::optional<std::uint64_t> seed,
                 std::optional<std::size_t> trials) {
    sim::Experiment e = sim::parse_experiment(slurp(path));
    if (seed)
        e.base.seed = *seed;
    if (trials)
        e.seeds = *trials;
    std::size_t bad = 0;
    for (std::size_t i = 0; i < e.seeds; ++i) {
        const sim::SimConfig cfg = e.config(i);
        const sim::SimTrace trace = sim::simulate(cfg);
        const sim::RunVerdict v = sim::judge(cfg, trace);
        if (i == 0 && !out.empty())
            emit(out, trace.text());
        std::cout << "seed=" << v.seed << " safety=" << (v.safety.safe ? "ok" : "VIOLATION")
                  << " liveness=" << (v.liveness.live ? "ok" : "STALL") << " decisions=" << v.decisions
                  << " views=" << v.views << " messages=" << v.messages << " eligible_views=" << v.liveness.eligible_views
                  << (v.truncated ? " truncated" : "") << '\n';
        if (!v.safety.safe)
            std::cout << "  counterexample: " << v.safety.describe() << '\n';
        if (!v.liveness.live)
            std::cout << "  stall: " << v.liveness.describe() << '\n';
        bad += !v.ok();
    }
    std::cout << "runs=" << e.seeds << " failed=" << bad << '\n';
    return bad ? exit_violation : exit_ok;
}

int cmd_build_msp(const std::string &path, const std::string &out) {
    const QuorumSpec spec = parse_spec(slurp(path));
    const Msp msp = spec_msp(spec);
    const auto [pm, pd] = predicted_dims(spec.attributes ? lower_attributes(*spec.attributes, *spec.attr_formula)
                                                         : spec.formula);
    emit(out, dump(msp, &spec.universe));
    std::cerr << "dims " << msp.rows() << "x" << msp.cols() << " predicted " << pm << "x" << pd << '\n';
    return exit_ok;
}

int cmd_enumerate(const std::string &path, std::size_t bound, bool selections, bool verify,
                  const std::string &out) {
    const QuorumSpec spec = parse_spec(slurp(path));
    const std::size_t n = spec.universe.size();
    std::ostringstream os;
    int rc = exit_ok;
    if (selections) {
        const auto sets = enumerate_exact_selections(spec.formula);
        os << "selections=" << sets.size() << '\n';
        for (const auto &s : sets)
            os << spec.universe.format(s) << '\n';
    } else {
        const QuorumSystem q = enumerate_minimal_quorums(spec.formula, n, bound);
        os << "minimal_quorums=" << q.quorums.size() << '\n';
        for (const auto &s : q.quorums)
            os << spec.universe.format(s) << '\n';
    }
    if (verify) {
        const CanonicalReport r = verify_canonical_bqs(spec.formula, n);
        if (r.ok) {
            std::cerr << "bqs=ok\n";
        } else {
            std::cerr << "bqs=violation quorums " << spec.universe.format(r.quorums[0]) << " "
                      << spec.universe.format(r.quorums[1]) << " " << spec.universe.format(r.quorums[2])
                      << " share no party\n";
            rc = exit_violation;
        }
    }
    emit(out, os.str());
    return rc;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Generalized Byzantine quorum systems toolkit"};
    app.require_subcommand(1);

    std::string spec, subset, encoding = "mbf", out;
    std::uint64_t seed = 1;
    std::size_t trials = 10000, bound = 24;
    bool selections = false, verify = false;

    auto *check = app.add_subcommand("check", "Is a set of parties a quorum?");
    check->add_option("spec", spec, "Quorum spec (JSON)")->required();
    check->add_option("subset", subset, "Comma-separated party names")->required();
    check->add_option("--encoding", encoding, "mbf, msp or msp-lup");

    std::string bench_encoding;
    auto *bench = app.add_subcommand("microbench", "Memory and quorum-check time per encoding");
    bench->add_option("spec", spec, "Quorum spec (JSON)")->required();
    bench->add_option("--trials", trials, "Random subsets to check");
    bench->add_option("--seed", seed, "Subset generator seed");
    bench->add_option("--encoding", bench_encoding, "Only this encoding");

    std::optional<std::uint64_t> sim_seed;
    std::optional<std::size_t> sim_trials;
    auto *simulate = app.add_subcommand("simulate", "Run an experiment config and check the traces");
    simulate->add_option("config", spec, "Experiment config (JSON)")->required();
    simulate->add_option("--seed", sim_seed, "First seed (overrides the config)");
    simulate->add_option("--trials", sim_trials, "Number of seeds (overrides the config)");
    simulate->add_option("--out", out, "Write the first run's trace here");

    auto *build = app.add_subcommand("build-msp", "Build and dump the span program");
    build->add_option("spec", spec, "Quorum spec (JSON)")->required();
    build->add_option("--out", out, "Output file");

    auto *enumerate = app.add_subcommand("enumerate", "List minimal quorums");
    enumerate->add_option("spec", spec, "Quorum spec (JSON)")->required();
    enumerate->add_option("--bound", bound, "Largest universe to enumerate");
    enumerate->add_flag("--selections", selections, "List exact threshold selections instead");
    enumerate->add_flag("--verify", verify, "Also check the canonical system is a BQS");
    enumerate->add_option("--out", out, "Output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*check)
            return cmd_check(spec, subset, encoding);
        if (*bench)
            return cmd_microbench(spec, trials, seed, bench_encoding);
        if (*simulate)
            return cmd_simulate(spec, out, sim_seed, sim_trials);
        if (*build)
            return cmd_build_msp(spec, out);
        if (*enumerate)
            return cmd_enumerate(spec, bound, selections, verify, out);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}
