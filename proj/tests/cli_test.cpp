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

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include <gtest/gtest.h>

namespace {

struct CliResult {
    int code = -1;
    std::string out;
};

/// Runs the CLI with `args`, capturing stdout; stderr is discarded unless `with_stderr`.
CliResult cli(const std::string &args, bool with_stderr = false) {
    const std::string cmd = std::string("\"") + GBQS_CLI + "\" " + args + (with_stderr ? " 2>&1" : " 2>/dev/null");
    CliResult r;
    FILE *p = popen(cmd.c_str(), "r");
    if (!p)
        return r;
    std::array<char, 4096> buf;
    std::size_t got = 0;
    while ((got = std::fread(buf.data(), 1, buf.size(), p)) > 0)
        r.out.append(buf.data(), got);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string config(const std::string &name) { return std::string("\"") + GBQS_SOURCE_DIR + "/configs/" + name + "\""; }

bool contains(const std::string &hay, const std::string &needle) { return hay.find(needle) != std::string::npos; }

TEST(CliTest, CheckQuorum) {
    const std::string spec = config("2l1c_k4.json");
    CliResult r = cli("check " + spec + " A0,A1,A2,B0,B1,B3,B4,B6,B7");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "quorum\n");
    r = cli("check " + spec + " A0,A1,A2,B0,B1,B3,B4,B6");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "not-quorum\n");
    r = cli("check " + spec + " \"\"");
    EXPECT_EQ(r.out, "not-quorum\n");
    for (const char *enc : {"msp", "msp-lup"}) {
        r = cli("check " + spec + " A0,A1,A2,A3,B0,B1,B3,B4,B6,B7,B9,B10 --encoding " + enc);
        EXPECT_EQ(r.code, 0);
        EXPECT_TRUE(contains(r.out, "quorum\nredundant={")) << r.out;
    }
}

TEST(CliTest, EncodingsAgree) {
    const std::string spec = config("2l1c_k4.json");
    for (const char *subset : {"A0,A1,A2,B0,B1,B3,B4,B6,B7", "A0,A1,B0,B1,B3,B4", "A1,A2,A3,B3,B5,B6,B8,B9,B11",
                               "A0,A3,B0,B2,B9,B10,A1,B4,B5"}) {
        const std::string mbf = cli("check " + spec + " " + subset).out;
        for (const char *enc : {"msp", "msp-lup"})
            EXPECT_EQ(cli("check " + spec + " " + subset + " --encoding " + enc).out.substr(0, mbf.size()), mbf)
                << subset << " " << enc;
    }
}

TEST(CliTest, CheckAttributes) {
    const std::string spec = config("os_location.json");
    const std::string three_by_three =
        "zurich-linux,zurich-bsd,zurich-windows,paris-linux,paris-bsd,paris-windows,tokyo-linux,tokyo-bsd,tokyo-windows";
    EXPECT_EQ(cli("check " + spec + " " + three_by_three).out, "quorum\n");
    EXPECT_EQ(cli("check " + spec + " " + three_by_three + " --encoding msp").out.substr(0, 7), "quorum\n");
    EXPECT_EQ(cli("check " + spec + " zurich-linux,paris-bsd").out, "not-quorum\n");
}

TEST(CliTest, BuildMspDims) {
    EXPECT_TRUE(contains(cli("build-msp " + config("2l1c_k4.json"), true).out, "dims 20x11 predicted 20x11"));
    EXPECT_TRUE(contains(cli("build-msp " + config("os_location.json"), true).out, "dims 32x22 predicted 32x22"));
    const CliResult r = cli("build-msp " + config("threshold_2of3.json"));
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "3 2 2147483647\n1 1\n1 2\n1 3\np1\np2\np3\n");
}

TEST(CliTest, Enumerate) {
    CliResult r = cli("enumerate " + config("2l1c_k4.json") + " --verify", true);
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(contains(r.out, "minimal_quorums=216\n"));
    EXPECT_TRUE(contains(r.out, "bqs=ok"));
    r = cli("enumerate " + config("2l1c_k4.json") + " --selections");
    EXPECT_TRUE(contains(r.out, "selections=792\n"));
    EXPECT_EQ(cli("enumerate " + config("threshold_2of3.json") + " --verify").code, 1);
}

TEST(CliTest, Microbench) {
    const CliResult r = cli("microbench " + config("2l1c_k4.json") + " --trials 200 --seed 4");
    EXPECT_EQ(r.code, 0);
    for (const char *enc : {"encoding=mbf ", "encoding=msp ", "encoding=msp-lup "})
        EXPECT_TRUE(contains(r.out, enc)) << r.out;
    EXPECT_EQ(cli("microbench " + config("2l1c_k4.json") + " --trials 0").code, 2);
}

TEST(CliTest, SimulateBundledConfigs) {
    CliResult r = cli("simulate " + config("happy_path.json"));
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_TRUE(contains(r.out, "runs=5 failed=0"));

    r = cli("simulate " + config("over_corruption.json"));
    EXPECT_EQ(r.code, 1) << r.out;
    EXPECT_TRUE(contains(r.out, "safety=VIOLATION"));
    EXPECT_TRUE(contains(r.out, "counterexample: conflict"));

    r = cli("simulate " + config("2l1c_equivocation.json"));
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_TRUE(contains(r.out, "runs=100 failed=0"));

    r = cli("simulate " + config("2l1c_gst_crossing.json") + " --trials 3");
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_TRUE(contains(r.out, "runs=3 failed=0"));
}

TEST(CliTest, SimulateWritesTrace) {
    const auto path = std::filesystem::temp_directory_path() / "gbqs_cli_test_trace.tsv";
    const CliResult r = cli("simulate " + config("happy_path.json") + " --trials 1 --out \"" + path.string() + "\"");
    EXPECT_EQ(r.code, 0);
    std::ifstream in(path);
    std::string first;
    std::getline(in, first);
    EXPECT_EQ(first.substr(0, 4), "0\t0\t");
    std::filesystem::remove(path);
}

TEST(CliTest, UsageErrors) {
    EXPECT_EQ(cli("check " + config("2l1c_k4.json") + " A0,Z9").code, 2);
    EXPECT_EQ(cli("check " + config("2l1c_k4.json")).code, 2);
    EXPECT_EQ(cli("").code, 2);
    EXPECT_EQ(cli("frobnicate").code, 2);
    EXPECT_EQ(cli("check /nonexistent.json A0").code, 2);
    EXPECT_EQ(cli("--help").code, 0);

    const auto bad = std::filesystem::temp_directory_path() / "gbqs_cli_test_bad.json";
    std::ofstream(bad) << R"({"simulation": {"encoding": "counting", "counting": {"n": 4, "f": 1},
        "faults": [{"party": "p7", "behavior": "crash"}]}})";
    const CliResult r = cli("simulate \"" + bad.string() + "\"", true);
    EXPECT_EQ(r.code, 2);
    EXPECT_TRUE(contains(r.out, "/simulation/faults/0/party")) << r.out;
    std::filesystem::remove(bad);
}

} // namespace
