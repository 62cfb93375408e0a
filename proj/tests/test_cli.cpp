// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "diffcond/pipeline.hpp"
#include "diffcond/taskgen.hpp"
#include "fixtures.hpp"

using namespace diffcond;

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int code;
    std::string out;
};

RunResult run(const std::string& args) {
    const std::string cmd = std::string("DIFFCOND_COLOR=0 ") + DIFFCOND_BIN + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    std::string out;
    std::array<char, 4096> buf;
    while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe))
        out.append(buf.data(), n);
    const int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

class Workdir : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("diffcond_cli_" + std::to_string(::getpid()) + "_" +
                                            ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
        write("running.orig.imp", fixtures::kRunningOriginal);
        write("running.mod.imp", fixtures::kRunningModified);
        write("relax.orig.imp", fixtures::kRelaxOriginal);
        write("relax.mod.imp", fixtures::kRelaxModified);
    }
    void TearDown() override { fs::remove_all(dir_); }

    void write(const std::string& name, const std::string& text) { std::ofstream(dir_ / name) << text; }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }
    std::string read(const std::string& name) const {
        std::ifstream in(dir_ / name);
        return {std::istreambuf_iterator<char>(in), {}};
    }

    fs::path dir_;
};

PipelineOptions options(Detector d) {
    PipelineOptions o;
    o.detector = d;
    o.bounds = OracleBounds{3, 40, {}};
    o.baseline = true;
    return o;
}

} // namespace

TEST(Pipeline, RunningExampleDp) {
    const auto r = run_pipeline(fixtures::kRunningOriginal, fixtures::kRunningModified, options(Detector::dp));
    EXPECT_EQ(r.condition.accepting.size(), 1u);
    EXPECT_EQ(r.conditional.explored_paths, 0u);
    ASSERT_TRUE(r.baseline);
    EXPECT_EQ(r.baseline->explored_paths, 7u);
}

TEST(Pipeline, RunningExampleSyn) {
    const auto r = run_pipeline(fixtures::kRunningOriginal, fixtures::kRunningModified, options(Detector::syn));
    EXPECT_EQ(r.condition.accepting.size(), 0u);
    EXPECT_EQ(r.conditional.explored_paths, r.baseline->explored_paths);
}

TEST(Pipeline, IdenticalPair) {
    for (Detector d : {Detector::syn, Detector::dp}) {
        const auto r = run_pipeline(fixtures::kRunningOriginal, fixtures::kRunningOriginal, options(d));
        EXPECT_EQ(r.graph.delta.size(), 0u);
        EXPECT_EQ(r.conditional.explored_paths, 0u);
    }
}

TEST(Pipeline, StageErrorsAreTagged) {
    try {
        run_pipeline("x = ;", "", options(Detector::dp));
        FAIL() << "expected a stage error";
    } catch (const StageError& e) {
        EXPECT_EQ(e.stage(), "parse-original");
    }
}

TEST(Pipeline, ReportIsDeterministic) {
    auto a = run_pipeline(fixtures::kRelaxOriginal, fixtures::kRelaxModified, options(Detector::dp));
    auto b = run_pipeline(fixtures::kRelaxOriginal, fixtures::kRelaxModified, options(Detector::dp));
    EXPECT_EQ(dump_json(a.to_json(false)), dump_json(b.to_json(false)));
}

TEST(TaskGen, DeterministicPerSeed) {
    const Task a = generate_task(0);
    const Task b = generate_task(0);
    EXPECT_EQ(a.original, b.original);
    EXPECT_EQ(a.modified, b.modified);
    EXPECT_NE(generate_task(1).original, a.original);
}

TEST(TaskGen, MostPairsDiffer) {
    int differing = 0;
    for (std::uint64_t s = 0; s < 1000; ++s) {
        const Task t = generate_task(s);
        if (t.original != t.modified)
            ++differing;
    }
    EXPECT_GE(differing, 300);
}

TEST(TaskGen, AssertWeakenCanRelaxABound) {
    bool seen = false;
    for (std::uint64_t s = 0; s < 64 && !seen; ++s)
        seen = mutate("assert(x <= 3);", "assert_weaken", s) == "assert(x <= 5);\n";
    EXPECT_TRUE(seen);
    EXPECT_THROW(mutate("x = 1;", "shuffle", 0), std::invalid_argument);
}

TEST(TaskGen, RespectsSizeKnobs) {
    for (std::uint64_t s = 0; s < 200; ++s) {
        const Cfa c = build_cfa(parse_program(generate_task(s).original));
        EXPECT_LE(c.variables().size(), 4u);
    }
}

TEST_F(Workdir, ParseWritesCfaJson) {
    const auto r = run("parse --program " + path("running.orig.imp") + " --out " + path("c.json"));
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_EQ(deserialize(read("c.json")), fixtures::cfa(fixtures::kRunningOriginal));
}

TEST_F(Workdir, ExtractReduceVerify) {
    auto r = run("extract --detector dp --original " + path("relax.orig.imp") + " --modified " + path("relax.mod.imp") +
                 " --out " + path("cond.json") + " --graph " + path("graph.json"));
    ASSERT_EQ(r.code, 0) << r.out;
    r = run("verify --program " + path("relax.mod.imp") + " --condition " + path("cond.json") +
            " --bound 10 --depth 40 --json");
    EXPECT_EQ(r.code, 1);
    const auto v = nlohmann::json::parse(r.out);
    EXPECT_EQ(v["alarms"].size(), 7u);
    EXPECT_EQ(v["covered_paths"], 14);
    r = run("reduce --program " + path("relax.mod.imp") + " --condition " + path("cond.json") + " --out " +
            path("res.json") + " --map " + path("map.json"));
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_EQ(deserialize(read("res.json")).edges().size(), 1u);
    r = run("verify --program " + path("res.json") + " --bound 10 --depth 40 --inputs x");
    EXPECT_EQ(r.code, 1);
}

TEST_F(Workdir, VerifySafeAndInconclusive) {
    write("loop.imp", "while (x < 100) { x = x + 1; }");
    EXPECT_EQ(run("verify --program " + path("running.mod.imp") + " --bound 3").code, 0);
    EXPECT_EQ(run("verify --program " + path("loop.imp") + " --bound 1 --depth 10").code, 2);
}

TEST_F(Workdir, DiffDotAndFlags) {
    const auto r = run("diff --detector dp --no-implication --align-same-write --original " + path("running.orig.imp") +
                       " --modified " + path("running.mod.imp") + " --out " + path("g.json") + " --dot " + path("g.dot"));
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_EQ(graph_from_json(nlohmann::json::parse(read("g.json"))).nodes.size(), 6u);
    EXPECT_NE(read("g.dot").find("digraph"), std::string::npos);
}

TEST_F(Workdir, OracleCountsAndDump) {
    auto r = run("oracle --original " + path("relax.orig.imp") + " --modified " + path("relax.mod.imp") + " --bound 10");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("regression-bug paths: 2"), std::string::npos) << r.out;
    r = run("oracle --original " + path("relax.orig.imp") + " --modified " + path("relax.mod.imp") +
            " --bound 10 --dump");
    const auto j = nlohmann::json::parse(r.out);
    ASSERT_EQ(j.size(), 2u);
    EXPECT_EQ(j[0]["input"]["x"], 4);
}

TEST_F(Workdir, PipelineWritesArtifacts) {
    const auto r = run("pipeline --detector dp --baseline --reduce --original " + path("running.orig.imp") +
                       " --modified " + path("running.mod.imp") + " --bound 3 --out-dir " + path("out"));
    ASSERT_EQ(r.code, 0) << r.out;
    for (const char* f : {"graph.json", "condition.json", "residual.json", "residual.map.json", "verdict.json",
                          "report.json"})
        EXPECT_TRUE(fs::exists(dir_ / "out" / f)) << f;
    const auto report = nlohmann::json::parse(read("out/report.json"));
    EXPECT_EQ(report["condition"]["accepting"], 1);
    EXPECT_EQ(report["residual"]["edges"], 0);
    EXPECT_EQ(report["conditional"]["alarms"], 0);

    const auto plain = run("pipeline --detector dp --original " + path("running.orig.imp") + " --modified " +
                           path("running.mod.imp") + " --bound 3 --out-dir " + path("plain"));
    ASSERT_EQ(plain.code, 0) << plain.out;
    const auto j = nlohmann::json::parse(read("plain/report.json"));
    EXPECT_EQ(j["conditional"]["explored_paths"], 0);
    EXPECT_EQ(j["conditional"]["covered_paths"], 7);
}

TEST_F(Workdir, SyntaxErrorExitCode) {
    write("bad.imp", "x = ;");
    const auto r = run("parse --program " + path("bad.imp"));
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.out.find("1:5"), std::string::npos);
}

TEST_F(Workdir, FuzzSmallCampaign) {
    const auto r = run("fuzz --seeds 20 --bound 2 --depth 20");
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
    const auto d = run("fuzz --seeds 20 --bound 2 --depth 20 --division");
    EXPECT_EQ(d.code, 0) << d.out;
    EXPECT_EQ(d.out.find("FAIL"), std::string::npos);
}
